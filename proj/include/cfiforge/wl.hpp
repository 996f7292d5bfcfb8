#pragma once

// k-dimensional Weisfeiler-Leman refinement with counting.
//
// Round 0 colours every k-tuple by its atomic type. Each later round
// recolours a tuple t by its old colour together with the multiset, over all
// elements c, of the vector (col(t[c/1]), ..., col(t[c/k])) where t[c/j]
// replaces position j by c. When k = 1, or when some relation has arity
// above k, the atomic type of the extended tuple (t, c) is added to each
// multiset entry; for k >= 2 over binary relations it is already implied by
// the substituted colours. Stable k-WL equivalence coincides with
// indistinguishability in the (k+1)-variable counting logic.
//
// Colour ids are assigned by sorting signatures, so they are canonical
// across runs and independent of the thread count.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cfiforge/caps.hpp"
#include "cfiforge/relstruct.hpp"

namespace cfiforge::wl {

struct Options {
  std::size_t k = 2;
  unsigned threads = 1;
  Caps caps = default_caps();
};

struct Coloring {
  std::size_t k = 0;
  std::size_t universe = 0;
  /// Colour of the tuple (a_1, ..., a_k) at index sum a_j * n^(k-j).
  std::vector<std::uint32_t> colors;
  /// Refinement rounds performed until the partition stopped changing.
  std::size_t rounds = 0;
  std::size_t color_count = 0;
  /// Number of colour classes after each round, starting with round 0.
  std::vector<std::size_t> classes_per_round;

  std::uint32_t color_of(std::span<const rel::Element> tuple) const;
  /// Colours of the diagonal tuples (a, ..., a).
  std::vector<std::uint32_t> diagonal() const;
};

/// Stable colouring. Throws std::invalid_argument for k = 0 and
/// ResourceCapError when n^k exceeds opts.caps.wl_tuples.
Coloring wl_refine(const rel::Structure& s, const Options& opts = {});

using Histogram = std::map<std::uint32_t, std::uint64_t>;

struct Verdict {
  std::size_t k = 0;
  bool distinguished = false;
  /// Round that settled the verdict: the first round with different
  /// histograms, the stable round, or 0 for identical inputs.
  std::size_t round = 0;
  /// Refinement rounds performed.
  std::size_t rounds = 0;
  Histogram histogram_a;
  Histogram histogram_b;

  /// "distinguished" or "stable-equivalent".
  std::string verdict_name() const;
};

/// Joint refinement of both structures with a shared colour dictionary.
/// Structures of different sizes or vocabularies are distinguished at round 0.
Verdict wl_distinguish(const rel::Structure& a, const rel::Structure& b, const Options& opts = {});

}  // namespace cfiforge::wl
