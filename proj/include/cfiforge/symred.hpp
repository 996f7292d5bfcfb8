#pragma once

// Symmetry reductions of linear systems over F_p: stabiliser checks, column
// folding along orbit partitions, symmetric solutions, group averaging and
// rank computed from solvability queries only.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cfiforge/caps.hpp"
#include "cfiforge/gfp.hpp"
#include "cfiforge/perm.hpp"

namespace cfiforge::symred {

class PermutationGroup {
 public:
  /// Throws std::invalid_argument unless every generator is a bijection of
  /// the given degree.
  PermutationGroup(std::size_t degree, std::vector<Permutation> generators);

  static PermutationGroup trivial(std::size_t degree) { return {degree, {}}; }

  std::size_t degree() const { return degree_; }
  const std::vector<Permutation>& generators() const { return generators_; }

  /// All group elements in breadth-first order from the identity along the
  /// generators. Throws ResourceCapError above caps.group_elements.
  std::vector<Permutation> elements(const Caps& caps = default_caps()) const;
  std::uint64_t order(const Caps& caps = default_caps()) const;

 private:
  std::size_t degree_;
  std::vector<Permutation> generators_;
};

/// An ordered partition of {0, ..., size-1} into disjoint non-empty blocks.
class OrbitPartition {
 public:
  /// Throws std::invalid_argument unless the blocks partition [0, size).
  /// Block order and the order inside blocks are kept as given.
  OrbitPartition(std::size_t size, std::vector<std::vector<std::uint32_t>> blocks);

  static OrbitPartition singletons(std::size_t size);

  std::size_t size() const { return size_; }
  std::size_t block_count() const { return blocks_.size(); }
  const std::vector<std::vector<std::uint32_t>>& blocks() const { return blocks_; }
  /// Block index of each point.
  std::vector<std::uint32_t> block_of() const;

  friend bool operator==(const OrbitPartition&, const OrbitPartition&) = default;

 private:
  std::size_t size_;
  std::vector<std::vector<std::uint32_t>> blocks_;
};

/// Orbits of the points in [first, first + count) under the group, as a
/// partition of [0, count) (points shifted by -first). Blocks are sorted
/// and ordered by their least point. Throws std::invalid_argument if some
/// generator maps a point of the range outside it.
OrbitPartition orbits(const PermutationGroup& g, std::size_t first, std::size_t count);
inline OrbitPartition orbits(const PermutationGroup& g) { return orbits(g, 0, g.degree()); }

/// True iff M(rows(a), cols(b)) = M(a, b) for all a, b.
bool stabilizes(const gfp::Matrix& m, std::span<const std::uint32_t> rows,
                std::span<const std::uint32_t> cols);

/// M * E, where column j of E is the indicator of block j.
gfp::LinearSystem fold_columns(const gfp::LinearSystem& sys, const OrbitPartition& part);

/// Lifts a solution of the folded system: x[i] = y[block_of(i)].
gfp::Vector expand_solution(const OrbitPartition& part, std::span<const gfp::Residue> folded);

/// The prime q when n = q^e for some e >= 1, 1 for n = 1, 0 otherwise.
std::uint64_t prime_power_base(std::uint64_t n);

/// Thrown when the hypotheses of symmetric_solution fail.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Gamma acts on rows and columns at once: points [0, rows) are row
/// indices, [rows, rows + cols) are column indices. Returns a solution
/// constant on the column orbits if the system is solvable. Throws
/// PreconditionError unless Gamma stabilises M, the right-hand side is
/// Gamma-invariant and |Gamma| is a power of a prime other than p.
std::optional<gfp::Vector> symmetric_solution(const gfp::LinearSystem& sys,
                                              const PermutationGroup& gamma,
                                              const Caps& caps = default_caps());

/// Splits a group on rows and columns into the two permutation actions.
struct SplitAction {
  Permutation rows;
  Permutation cols;
};
SplitAction split_action(std::span<const std::uint32_t> perm, std::size_t rows, std::size_t cols);

/// M*(a, b) = sum over pi in Delta of M(pi(a), b), Delta acting on rows.
gfp::Matrix group_average(const gfp::Matrix& m, const PermutationGroup& delta,
                          const Caps& caps = default_caps());

using SolvabilityOracle = std::function<bool(const gfp::LinearSystem&)>;

struct RankResult {
  std::size_t rank = 0;
  std::size_t queries = 0;
};

/// Rank of M using only solvability queries. Blocks are processed in order;
/// within a block a greedy set W grows by each column m (in block order)
/// with m outside span(W) and outside span(V ∪ W), V being the columns
/// accepted in earlier blocks.
RankResult rank_via_solvability(const gfp::Matrix& m, const OrbitPartition& blocks,
                                const SolvabilityOracle& oracle = gfp::is_solvable);

}  // namespace cfiforge::symred
