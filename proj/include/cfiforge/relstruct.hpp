#pragma once

// Finite relational structures and ordered base graphs.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cfiforge::rel {

using Element = std::uint32_t;
using Tuple = std::vector<Element>;

/// A named relation of fixed arity over a universe {0, ..., n-1}.
///
/// Either explicit (a sorted, duplicate-free tuple list) or an implicit
/// binary preorder given by per-element ranks: (a, b) is in the relation iff
/// rank[a] <= rank[b]. The implicit form keeps large preorders linear in
/// size.
class Relation {
 public:
  /// Throws std::invalid_argument on arity 0, tuples of the wrong length, or
  /// entries outside the universe.
  Relation(std::string name, std::size_t arity, std::vector<Tuple> tuples, std::size_t universe);

  static Relation preorder_from_ranks(std::string name, std::vector<std::uint32_t> ranks);

  const std::string& name() const { return name_; }
  std::size_t arity() const { return arity_; }
  std::size_t universe() const { return universe_; }
  bool is_implicit_preorder() const { return ranks_.has_value(); }
  const std::vector<std::uint32_t>& ranks() const { return *ranks_; }

  bool contains(std::span<const Element> tuple) const;
  bool contains(Element a, Element b) const;

  /// Number of tuples (counted, not materialised, for implicit preorders).
  std::size_t size() const;

  /// All tuples in lexicographic order.
  std::vector<Tuple> tuples() const;

  /// Same relation with every tuple stored explicitly.
  Relation materialized(std::size_t universe) const;

 private:
  Relation() = default;
  void build_index();

  std::string name_;
  std::size_t arity_ = 0;
  std::size_t universe_ = 0;
  std::vector<Tuple> tuples_;
  std::optional<std::vector<std::uint32_t>> ranks_;
  // Binary relations over small universes get a dense bit matrix; everything
  // else is looked up by binary search over encoded tuples.
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint64_t> codes_;
};

class Structure {
 public:
  /// Relations are kept sorted by name. Throws std::invalid_argument on
  /// duplicate relation names or relations built over a different universe.
  Structure(std::size_t universe, std::vector<Relation> relations);

  std::size_t universe() const { return universe_; }
  const std::vector<Relation>& relations() const { return relations_; }

  const Relation* find(std::string_view name) const;
  /// Throws std::invalid_argument when absent.
  const Relation& at(std::string_view name) const;

  /// Vocabulary as (name, arity) pairs in declaration order.
  std::vector<std::pair<std::string, std::size_t>> vocabulary() const;

  friend bool operator==(const Structure& a, const Structure& b);

 private:
  std::size_t universe_;
  std::vector<Relation> relations_;
};

/// Undirected, connected, ordered graph on vertices 0..n-1 (order = index).
class BaseGraph {
 public:
  /// Normalises edges to (min, max) and sorts them. Throws
  /// std::invalid_argument on self-loops, duplicate edges, out-of-range
  /// vertices or a disconnected graph.
  BaseGraph(std::size_t vertices, std::vector<std::pair<std::uint32_t, std::uint32_t>> edges);

  std::size_t vertex_count() const { return n_; }
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges() const { return edges_; }
  const std::vector<std::uint32_t>& neighbors(std::uint32_t v) const { return adj_.at(v); }
  std::size_t degree(std::uint32_t v) const { return adj_.at(v).size(); }
  bool adjacent(std::uint32_t u, std::uint32_t v) const;

  /// Both orientations of every edge, sorted lexicographically by
  /// (source, target).
  std::vector<std::pair<std::uint32_t, std::uint32_t>> directed_edges() const;

  friend bool operator==(const BaseGraph&, const BaseGraph&) = default;

 private:
  std::size_t n_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
  std::vector<std::vector<std::uint32_t>> adj_;
};

/// K_n. Throws std::invalid_argument for n < 2.
BaseGraph complete_graph(std::size_t n);
BaseGraph cycle_graph(std::size_t n);
BaseGraph path_graph(std::size_t n);

/// Vertex connectivity: the largest k such that removing any k-1 vertices
/// leaves the graph connected, with K_n having connectivity n-1. Computed as
/// the minimum, over non-adjacent pairs, of the number of internally
/// vertex-disjoint paths (max-flow on the vertex-split digraph).
std::size_t connectivity(const BaseGraph& g);

/// Canonical code of the atomic type of a tuple: its equality pattern, then
/// one membership bit per relation and per position tuple of that arity.
/// Two tuples over structures with the same vocabulary get equal codes iff
/// mapping one onto the other entrywise is a partial isomorphism.
std::vector<std::uint32_t> atomic_type(const Structure& s, std::span<const Element> tuple);

/// True iff map is a bijection from a's universe onto b's under which every
/// relation of a maps exactly onto the same-named relation of b.
bool is_isomorphism(const Structure& a, const Structure& b, std::span<const Element> map);

}  // namespace cfiforge::rel
