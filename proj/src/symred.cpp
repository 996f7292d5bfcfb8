#include "cfiforge/symred.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace cfiforge::symred {

PermutationGroup::PermutationGroup(std::size_t degree, std::vector<Permutation> generators)
    : degree_(degree), generators_(std::move(generators)) {
  for (const auto& g : generators_) require_bijection(g, degree_, "group generator");
}

std::vector<Permutation> PermutationGroup::elements(const Caps& caps) const {
  std::vector<Permutation> out{identity_permutation(degree_)};
  std::set<Permutation> seen{out.front()};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& g : generators_) {
      Permutation next = compose(g, out[i]);
      if (seen.insert(next).second) {
        if (out.size() >= caps.group_elements) {
          throw ResourceCapError("group enumeration exceeds the cap of " +
                                 std::to_string(caps.group_elements) + " elements");
        }
        out.push_back(std::move(next));
      }
    }
  }
  return out;
}

std::uint64_t PermutationGroup::order(const Caps& caps) const { return elements(caps).size(); }

OrbitPartition::OrbitPartition(std::size_t size, std::vector<std::vector<std::uint32_t>> blocks)
    : size_(size), blocks_(std::move(blocks)) {
  std::vector<bool> seen(size_, false);
  std::size_t covered = 0;
  for (const auto& b : blocks_) {
    if (b.empty()) throw std::invalid_argument("partition: empty block");
    for (auto i : b) {
      if (i >= size_) throw std::invalid_argument("partition: point " + std::to_string(i) + " out of range");
      if (seen[i]) throw std::invalid_argument("partition: point " + std::to_string(i) + " in two blocks");
      seen[i] = true;
      ++covered;
    }
  }
  if (covered != size_) throw std::invalid_argument("partition: blocks do not cover the index set");
}

OrbitPartition OrbitPartition::singletons(std::size_t size) {
  std::vector<std::vector<std::uint32_t>> blocks(size);
  for (std::uint32_t i = 0; i < size; ++i) blocks[i] = {i};
  return {size, std::move(blocks)};
}

std::vector<std::uint32_t> OrbitPartition::block_of() const {
  std::vector<std::uint32_t> out(size_);
  for (std::uint32_t b = 0; b < blocks_.size(); ++b) {
    for (auto i : blocks_[b]) out[i] = b;
  }
  return out;
}

namespace {

std::uint32_t find(std::vector<std::uint32_t>& parent, std::uint32_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

OrbitPartition orbits(const PermutationGroup& g, std::size_t first, std::size_t count) {
  if (first + count > g.degree()) throw std::invalid_argument("orbits: range exceeds the group degree");
  std::vector<std::uint32_t> parent(count);
  std::iota(parent.begin(), parent.end(), 0u);
  for (const auto& gen : g.generators()) {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t img = gen[first + i];
      if (img < first || img >= first + count) {
        throw std::invalid_argument("orbits: generator does not preserve the point range");
      }
      const auto a = find(parent, static_cast<std::uint32_t>(i));
      const auto b = find(parent, static_cast<std::uint32_t>(img - first));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  // Roots are least elements, so visiting points in order yields blocks
  // ordered by their least point.
  std::vector<std::vector<std::uint32_t>> blocks;
  std::vector<std::int64_t> index(count, -1);
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto r = find(parent, i);
    if (index[r] < 0) {
      index[r] = static_cast<std::int64_t>(blocks.size());
      blocks.emplace_back();
    }
    blocks[index[r]].push_back(i);
  }
  return {count, std::move(blocks)};
}

bool stabilizes(const gfp::Matrix& m, std::span<const std::uint32_t> rows,
                std::span<const std::uint32_t> cols) {
  require_bijection(rows, m.rows(), "row permutation");
  require_bijection(cols, m.cols(), "column permutation");
  for (std::size_t a = 0; a < m.rows(); ++a) {
    for (std::size_t b = 0; b < m.cols(); ++b) {
      if (m(rows[a], cols[b]) != m(a, b)) return false;
    }
  }
  return true;
}

gfp::LinearSystem fold_columns(const gfp::LinearSystem& sys, const OrbitPartition& part) {
  const auto& m = sys.matrix();
  if (part.size() != m.cols()) throw std::invalid_argument("fold_columns: partition size differs from the column count");
  const std::uint32_t p = m.modulus();
  gfp::Matrix out(p, m.rows(), part.block_count());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t j = 0; j < part.block_count(); ++j) {
      std::uint64_t acc = 0;
      for (auto c : part.blocks()[j]) acc += m(r, c);
      out.set(r, j, static_cast<gfp::Residue>(acc % p));
    }
  }
  return {std::move(out), sys.rhs()};
}

gfp::Vector expand_solution(const OrbitPartition& part, std::span<const gfp::Residue> folded) {
  if (folded.size() != part.block_count()) throw std::invalid_argument("expand_solution: length differs from the block count");
  gfp::Vector out(part.size());
  for (std::size_t j = 0; j < part.block_count(); ++j) {
    for (auto c : part.blocks()[j]) out[c] = folded[j];
  }
  return out;
}

std::uint64_t prime_power_base(std::uint64_t n) {
  if (n == 0) return 0;
  if (n == 1) return 1;
  std::uint64_t q = 2;
  while (q * q <= n && n % q != 0) ++q;
  if (n % q != 0) q = n;  // n itself is prime
  while (n % q == 0) n /= q;
  return n == 1 ? q : 0;
}

SplitAction split_action(std::span<const std::uint32_t> perm, std::size_t rows, std::size_t cols) {
  require_bijection(perm, rows + cols, "row/column action");
  SplitAction out{Permutation(rows), Permutation(cols)};
  for (std::size_t a = 0; a < rows; ++a) {
    if (perm[a] >= rows) throw std::invalid_argument("action maps a row index to a column index");
    out.rows[a] = perm[a];
  }
  for (std::size_t b = 0; b < cols; ++b) {
    if (perm[rows + b] < rows) throw std::invalid_argument("action maps a column index to a row index");
    out.cols[b] = static_cast<std::uint32_t>(perm[rows + b] - rows);
  }
  return out;
}

std::optional<gfp::Vector> symmetric_solution(const gfp::LinearSystem& sys, const PermutationGroup& gamma,
                                              const Caps& caps) {
  const auto& m = sys.matrix();
  const std::size_t rows = m.rows(), cols = m.cols();
  if (gamma.degree() != rows + cols) {
    throw PreconditionError("symmetric_solution: group degree must equal rows + columns");
  }
  for (const auto& g : gamma.generators()) {
    const auto act = split_action(g, rows, cols);
    if (!stabilizes(m, act.rows, act.cols)) throw PreconditionError("symmetric_solution: group does not stabilise the matrix");
    for (std::size_t a = 0; a < rows; ++a) {
      if (sys.rhs()[act.rows[a]] != sys.rhs()[a]) {
        throw PreconditionError("symmetric_solution: right-hand side is not group-invariant");
      }
    }
  }
  const std::uint64_t order = gamma.order(caps);
  const std::uint64_t q = prime_power_base(order);
  if (q == 0) throw PreconditionError("symmetric_solution: group order " + std::to_string(order) + " is not a prime power");
  if (q == m.modulus()) {
    throw PreconditionError("symmetric_solution: the field characteristic divides the group order");
  }
  const auto part = orbits(gamma, rows, cols);
  auto folded = gfp::solve(fold_columns(sys, part));
  if (!folded) return std::nullopt;
  auto x = expand_solution(part, *folded);
  if (!gfp::satisfies(sys, x)) throw ConsistencyError("symmetric_solution: expanded vector fails the system");
  return x;
}

gfp::Matrix group_average(const gfp::Matrix& m, const PermutationGroup& delta, const Caps& caps) {
  if (delta.degree() != m.rows()) throw std::invalid_argument("group_average: group degree differs from the row count");
  const auto& k = kernels::active();
  gfp::Matrix out(m.modulus(), m.rows(), m.cols());
  for (const auto& pi : delta.elements(caps)) {
    for (std::size_t a = 0; a < m.rows(); ++a) k.axpy(out.row(a), m.row(pi[a]), 1, m.modulus());
  }
  return out;
}

RankResult rank_via_solvability(const gfp::Matrix& m, const OrbitPartition& blocks,
                                const SolvabilityOracle& oracle) {
  if (blocks.size() != m.cols()) throw std::invalid_argument("rank_via_solvability: partition size differs from the column count");
  const std::uint32_t p = m.modulus();
  RankResult out;
  auto in_span = [&](const std::vector<gfp::Vector>& gens, const gfp::Vector& target) {
    ++out.queries;
    return oracle(gfp::LinearSystem(gfp::from_columns(p, m.rows(), gens), target));
  };
  std::vector<gfp::Vector> accepted;  // V: columns accepted in earlier blocks
  for (const auto& block : blocks.blocks()) {
    std::vector<gfp::Vector> w;
    std::vector<gfp::Vector> vw = accepted;
    for (auto c : block) {
      auto col = m.column(c);
      if (in_span(w, col)) continue;
      if (in_span(vw, col)) continue;
      w.push_back(col);
      vw.push_back(std::move(col));
    }
    out.rank += w.size();
    accepted = std::move(vw);
  }
  return out;
}

}  // namespace cfiforge::symred
