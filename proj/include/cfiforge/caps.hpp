#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cfiforge {

/// Thrown when an operation would exceed a configured resource cap.
class ResourceCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when an internal cross-check fails (an implementation bug or an
/// input that violates a documented precondition in an undetectable way).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Resource limits. Defaults are conservative desk-scale values; the
/// CFIFORGE_CAPS environment variable overrides them with a comma-separated
/// list such as "gadget=729,wl_tuples=100000".
struct Caps {
  std::uint64_t gadget_size = 4096;          // q^(deg-1) per vertex
  std::uint64_t explicit_preorder = 2048;    // universe size up to which the preorder is stored as tuples
  std::uint64_t wl_tuples = 2'000'000;       // n^k
  std::uint64_t group_elements = 1'000'000;  // permutation group enumeration
  std::uint64_t twist_enumeration = 1u << 20;
  std::uint64_t matrix_entries = 50'000'000;

  /// Defaults with CFIFORGE_CAPS applied. Throws std::invalid_argument on a
  /// malformed variable.
  static Caps from_env();

  /// Applies "key=value,..." overrides.
  void apply(const std::string& text);
};

/// Process-wide caps, initialised from the environment on first use.
Caps& default_caps();

}  // namespace cfiforge
