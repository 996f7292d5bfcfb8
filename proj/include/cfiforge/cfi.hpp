#pragma once

// Generalised CFI structures CFI_q(G, d) over F_q.
//
// Element numbering (the canonical universe order):
//   edge node e_i of the j-th directed edge  ->  j * q + i
//   equation node rho of vertex v           ->  gadget_offset(v) + rank(rho)
// Directed edges are ordered lexicographically by (source, target). A
// gadget function rho : E(v) -> F_q is stored as its value sequence over
// E(v) in directed-edge order; rank(rho) reads all but the last value as a
// base-q number, so gadgets enumerate in lexicographic order.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "cfiforge/caps.hpp"
#include "cfiforge/relstruct.hpp"

namespace cfiforge::cfi {

inline constexpr std::string_view kPreorder = "le";
inline constexpr std::string_view kCycle = "C";
inline constexpr std::string_view kInverse = "I";
inline constexpr std::string_view kGadget = "R";

struct CfiInstance {
  /// Throws std::invalid_argument if q is not prime, |d| != |V|, or a gadget
  /// value is not reduced mod q.
  CfiInstance(rel::BaseGraph base, std::uint32_t q, std::vector<std::uint32_t> d);

  rel::BaseGraph base;
  std::uint32_t q;
  std::vector<std::uint32_t> d;

  friend bool operator==(const CfiInstance&, const CfiInstance&) = default;
};

/// Element numbering of CFI_q(G, .) for a fixed base graph and q; it does
/// not depend on the gadget values.
class Layout {
 public:
  /// Throws ResourceCapError when some q^(deg(v)-1) exceeds caps.gadget_size
  /// and std::invalid_argument for isolated vertices.
  Layout(const rel::BaseGraph& base, std::uint32_t q, const Caps& caps = default_caps());

  std::uint32_t q() const { return q_; }
  std::size_t vertex_count() const { return vertex_edges_.size(); }
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& directed_edges() const { return dir_; }
  std::size_t directed_edge_count() const { return dir_.size(); }

  /// Index of the directed edge (u, v); throws if absent.
  std::size_t edge_index(std::uint32_t u, std::uint32_t v) const;
  std::size_t reverse(std::size_t e) const { return reverse_[e]; }
  /// Directed edges leaving v (E(v)), in directed-edge order.
  const std::vector<std::size_t>& edges_at(std::uint32_t v) const { return vertex_edges_[v]; }

  rel::Element edge_node(std::size_t e, std::uint32_t i) const {
    return static_cast<rel::Element>(e * q_ + i);
  }
  std::size_t edge_node_count() const { return dir_.size() * q_; }

  std::size_t gadget_offset(std::uint32_t v) const { return gadget_offset_[v]; }
  std::size_t gadget_size(std::uint32_t v) const { return gadget_size_[v]; }
  std::size_t universe_size() const { return universe_; }

  /// Element of the gadget function rho (values over edges_at(v)).
  rel::Element equation_node(std::uint32_t v, std::span<const std::uint32_t> rho) const;

  /// Gadget function with the given rank whose values sum to `sum`.
  std::vector<std::uint32_t> gadget_function(std::uint32_t v, std::size_t rank,
                                             std::uint32_t sum) const;

  bool is_edge_node(rel::Element a) const { return a < edge_node_count(); }
  /// Vertex owning an equation node.
  std::uint32_t owner(rel::Element a) const;

 private:
  std::uint32_t q_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> dir_;
  std::vector<std::size_t> reverse_;
  std::vector<std::vector<std::size_t>> vertex_edges_;
  std::vector<std::size_t> gadget_offset_;
  std::vector<std::size_t> gadget_size_;
  std::size_t universe_ = 0;
};

/// Materialises CFI_q(G, d). Relations, in order: the preorder "le" (stored
/// explicitly up to caps.explicit_preorder elements, as ranks beyond), the
/// cycle relation "C", the inverse relation "I", and the gadget relation "R".
rel::Structure build(const CfiInstance& inst, const Caps& caps = default_caps());

/// Sum of the gadget values mod q.
std::uint32_t iso_class(const CfiInstance& inst);

/// An element of the twist group: one shift per directed edge, with
/// values[e] + values[reverse(e)] = 0 mod q.
struct TwistVector {
  std::uint32_t q = 2;
  std::vector<std::uint32_t> values;

  friend auto operator<=>(const TwistVector&, const TwistVector&) = default;
};

/// Throws std::invalid_argument unless pi is a well-formed twist for layout.
void validate_twist(const Layout& layout, const TwistVector& pi);

/// Twist with the given value on each undirected edge (u, v), u < v, in
/// base.edges() order; the reverse orientation gets the negation.
TwistVector twist_from_edge_values(const rel::BaseGraph& base, std::uint32_t q,
                                   std::span<const std::uint32_t> values);

TwistVector add_twists(const TwistVector& a, const TwistVector& b);

struct TwistResult {
  CfiInstance instance;
  /// element_map[a] is the image of element a of build(input) in
  /// build(instance): e_i -> e_{i + pi(e)}, rho -> rho + pi restricted to E(v).
  std::vector<rel::Element> element_map;
};

TwistResult apply_twist(const CfiInstance& inst, const TwistVector& pi);

/// Sum of sigma^z[(v_i, v_{i+1})] along the path. Accepts simple paths and
/// simple cycles (first vertex repeated at the end, length >= 3).
TwistVector path_twist(const rel::BaseGraph& base, std::uint32_t q,
                       std::span<const std::uint32_t> path, std::uint32_t z);

/// All twists fixing every gadget value, i.e. the cycle space of the base
/// graph over F_q, sorted. Throws ResourceCapError when q^dim exceeds
/// caps.twist_enumeration.
std::vector<TwistVector> automorphisms(const CfiInstance& inst, const Caps& caps = default_caps());

/// Structure of CFI_q(G, (iso_class, 0, ..., 0)).
rel::Structure canonical_form(const CfiInstance& inst, const Caps& caps = default_caps());

/// Independent isomorphism test: true iff some twist maps a's gadget values
/// to b's, found by enumerating all q^|E| twists. Throws
/// std::invalid_argument for different bases or q, ResourceCapError above
/// caps.twist_enumeration.
bool brute_iso_oracle(const CfiInstance& a, const CfiInstance& b,
                      const Caps& caps = default_caps());

/// Decoded view of a structure produced by build(), recovered from the
/// relations alone.
struct ParsedStructure {
  std::uint32_t q = 0;
  /// Edge classes in order of their least element; each class lists its
  /// nodes along the C-cycle starting from the least element.
  std::vector<std::vector<rel::Element>> edge_classes;
  /// Equation classes (one per base vertex) in preorder order.
  std::vector<std::vector<rel::Element>> equation_classes;
  /// Edge nodes in increasing element order.
  std::vector<rel::Element> edge_nodes;
};

/// Checks that s is a well-formed CFI structure (every edge class carries a
/// single directed C-cycle of prime length q, I pairs related classes by
/// additive inverses, every equation node has exactly one R-neighbour per
/// incident edge class, and the preorder puts edge classes below equation
/// classes). Throws std::invalid_argument describing the first violation.
ParsedStructure parse_structure(const rel::Structure& s);

}  // namespace cfiforge::cfi
