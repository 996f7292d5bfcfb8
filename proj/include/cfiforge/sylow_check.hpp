#pragma once

// Brute-force cross-checks for the Sylow machinery: orbit enumeration,
// exhaustive counting and the solvability chain from the full matrix M_n
// down to the compact signature-indexed system.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cfiforge/eqformula.hpp"
#include "cfiforge/sylow.hpp"

namespace cfiforge::sylow::check {

struct CheckResult {
  bool ok = true;
  std::uint64_t checked = 0;
  std::string detail;
};

/// Exact number of tuples in [q^r]^l with signature sigma that agree with
/// every fixed slot.
std::uint64_t brute_count(std::uint32_t q, std::uint32_t r, std::size_t l, const SignatureVector& sigma,
                          const std::vector<std::optional<std::uint32_t>>& fixed);

/// Orbit id of every tuple of [q^r]^l under Delta_r, from union-find over
/// the generators.
std::vector<std::uint32_t> tuple_orbits(const SylowGroup& g, std::size_t l);

/// Materialised group has the predicted order, contains the identity, is
/// closed under composition and equals the closure of generators().
CheckResult check_group(const SylowGroup& g);

/// sgn(pi a) = sgn(a). Exhaustive over all elements and tuples when
/// samples is empty, otherwise that many random (element, tuple) pairs.
CheckResult check_invariance(const SylowGroup& g, std::size_t l, std::optional<std::size_t> samples,
                             std::mt19937_64& rng);

/// Tuples with equal signatures lie in one orbit. Exhaustive when samples
/// is empty, otherwise checks the signature class of that many random
/// tuples against their orbit.
CheckResult check_completeness(const SylowGroup& g, std::size_t l, std::optional<std::size_t> samples,
                               std::mt19937_64& rng);

/// count_realizations against enumeration: every well-formed sigma, every
/// fixed prefix of length s <= min(l, 2), and every sub-block for s = 0.
/// Residues, realizability and lex-least witnesses must all agree.
CheckResult check_counting(std::uint32_t q, std::uint32_t r, std::uint32_t p, std::size_t l);

struct ChainReport {
  bool solvable_full = false;      // M_n x = 1
  bool solvable_averaged = false;  // M* x = 1
  bool solvable_dedup = false;     // one row and column per orbit of M*
  bool solvable_compact = false;   // compact_matrix x = 1
  bool orbits_match_signatures = false;
  bool entries_match = false;      // compact entries equal brute orbit counts
  bool stabilizer_scaling = false; // dedup(a, b) = |Stab(b)| * compact
  std::size_t full_rows = 0, full_cols = 0, compact_rows = 0, compact_cols = 0;

  bool consistent() const {
    return orbits_match_signatures && entries_match && stabilizer_scaling &&
           solvable_full == solvable_averaged && solvable_averaged == solvable_dedup &&
           solvable_dedup == solvable_compact;
  }
};

ChainReport check_chain(const eq::Formula& alpha, std::uint32_t q, std::uint32_t r, std::uint32_t p);

}  // namespace cfiforge::sylow::check
