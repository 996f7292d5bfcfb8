#include "cfiforge/cfi.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cfiforge/gfp.hpp"

namespace cfiforge::cfi {

using rel::Element;

CfiInstance::CfiInstance(rel::BaseGraph base_, std::uint32_t q_, std::vector<std::uint32_t> d_)
    : base(std::move(base_)), q(gfp::require_prime(q_, "q")), d(std::move(d_)) {
  if (d.size() != base.vertex_count()) {
    throw std::invalid_argument("gadget vector has " + std::to_string(d.size()) +
                                " entries, base graph has " +
                                std::to_string(base.vertex_count()) + " vertices");
  }
  for (auto v : d) {
    if (v >= q) throw std::invalid_argument("gadget value " + std::to_string(v) + " not in [0, q)");
  }
}

Layout::Layout(const rel::BaseGraph& base, std::uint32_t q, const Caps& caps)
    : q_(gfp::require_prime(q, "q")), dir_(base.directed_edges()) {
  const std::size_t n = base.vertex_count();
  reverse_.resize(dir_.size());
  for (std::size_t e = 0; e < dir_.size(); ++e) {
    const auto [u, v] = dir_[e];
    reverse_[e] = static_cast<std::size_t>(
        std::lower_bound(dir_.begin(), dir_.end(), std::make_pair(v, u)) - dir_.begin());
  }
  vertex_edges_.resize(n);
  for (std::size_t e = 0; e < dir_.size(); ++e) vertex_edges_[dir_[e].first].push_back(e);
  universe_ = dir_.size() * q_;
  gadget_offset_.resize(n);
  gadget_size_.resize(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    const std::size_t deg = vertex_edges_[v].size();
    if (deg == 0) throw std::invalid_argument("CFI layout: vertex " + std::to_string(v) + " is isolated");
    std::uint64_t size = 1;
    for (std::size_t i = 0; i + 1 < deg; ++i) {
      size *= q_;
      if (size > caps.gadget_size) {
        throw ResourceCapError("gadget of vertex " + std::to_string(v) + " exceeds cap of " +
                               std::to_string(caps.gadget_size) + " equation nodes");
      }
    }
    gadget_offset_[v] = universe_;
    gadget_size_[v] = size;
    universe_ += size;
  }
}

std::size_t Layout::edge_index(std::uint32_t u, std::uint32_t v) const {
  auto it = std::lower_bound(dir_.begin(), dir_.end(), std::make_pair(u, v));
  if (it == dir_.end() || *it != std::make_pair(u, v)) {
    throw std::invalid_argument("(" + std::to_string(u) + ", " + std::to_string(v) +
                                ") is not an edge of the base graph");
  }
  return static_cast<std::size_t>(it - dir_.begin());
}

Element Layout::equation_node(std::uint32_t v, std::span<const std::uint32_t> rho) const {
  const auto& es = vertex_edges_.at(v);
  if (rho.size() != es.size()) throw std::invalid_argument("gadget function has wrong length");
  std::size_t rank = 0;
  for (std::size_t i = 0; i + 1 < rho.size(); ++i) rank = rank * q_ + rho[i];
  return static_cast<Element>(gadget_offset_[v] + rank);
}

std::vector<std::uint32_t> Layout::gadget_function(std::uint32_t v, std::size_t rank,
                                                   std::uint32_t sum) const {
  const std::size_t deg = vertex_edges_.at(v).size();
  std::vector<std::uint32_t> rho(deg, 0);
  std::uint64_t partial = 0;
  for (std::size_t i = deg - 1; i-- > 0;) {
    rho[i] = static_cast<std::uint32_t>(rank % q_);
    rank /= q_;
    partial += rho[i];
  }
  rho[deg - 1] = static_cast<std::uint32_t>((sum + q_ - partial % q_) % q_);
  return rho;
}

std::uint32_t Layout::owner(Element a) const {
  if (is_edge_node(a) || a >= universe_) throw std::invalid_argument("owner: not an equation node");
  auto it = std::upper_bound(gadget_offset_.begin(), gadget_offset_.end(), static_cast<std::size_t>(a));
  return static_cast<std::uint32_t>(it - gadget_offset_.begin() - 1);
}

rel::Structure build(const CfiInstance& inst, const Caps& caps) {
  const Layout L(inst.base, inst.q, caps);
  const std::uint32_t q = inst.q;
  const std::size_t nE = L.directed_edge_count();
  const std::size_t universe = L.universe_size();

  std::vector<std::uint32_t> ranks(universe);
  for (std::size_t e = 0; e < nE; ++e) {
    for (std::uint32_t i = 0; i < q; ++i) ranks[L.edge_node(e, i)] = static_cast<std::uint32_t>(e);
  }
  for (std::uint32_t v = 0; v < L.vertex_count(); ++v) {
    for (std::size_t r = 0; r < L.gadget_size(v); ++r) {
      ranks[L.gadget_offset(v) + r] = static_cast<std::uint32_t>(nE + v);
    }
  }

  std::vector<rel::Tuple> cycle, inv, gadget;
  for (std::size_t e = 0; e < nE; ++e) {
    const std::size_t f = L.reverse(e);
    for (std::uint32_t i = 0; i < q; ++i) {
      cycle.push_back({L.edge_node(e, i), L.edge_node(e, (i + 1) % q)});
      inv.push_back({L.edge_node(e, i), L.edge_node(f, (q - i) % q)});
    }
  }
  for (std::uint32_t v = 0; v < L.vertex_count(); ++v) {
    const auto& es = L.edges_at(v);
    for (std::size_t r = 0; r < L.gadget_size(v); ++r) {
      const auto rho = L.gadget_function(v, r, inst.d[v]);
      const Element node = static_cast<Element>(L.gadget_offset(v) + r);
      for (std::size_t j = 0; j < es.size(); ++j) gadget.push_back({node, L.edge_node(es[j], rho[j])});
    }
  }

  std::vector<rel::Relation> rels;
  auto pre = rel::Relation::preorder_from_ranks(std::string(kPreorder), std::move(ranks));
  rels.push_back(universe <= caps.explicit_preorder ? pre.materialized(universe) : std::move(pre));
  rels.emplace_back(std::string(kCycle), 2, std::move(cycle), universe);
  rels.emplace_back(std::string(kInverse), 2, std::move(inv), universe);
  rels.emplace_back(std::string(kGadget), 2, std::move(gadget), universe);
  return rel::Structure(universe, std::move(rels));
}

std::uint32_t iso_class(const CfiInstance& inst) {
  std::uint64_t s = 0;
  for (auto v : inst.d) s += v;
  return static_cast<std::uint32_t>(s % inst.q);
}

void validate_twist(const Layout& L, const TwistVector& pi) {
  if (pi.q != L.q()) throw std::invalid_argument("twist: modulus differs from the instance's q");
  if (pi.values.size() != L.directed_edge_count()) {
    throw std::invalid_argument("twist: expected one value per directed edge (" +
                                std::to_string(L.directed_edge_count()) + "), got " +
                                std::to_string(pi.values.size()));
  }
  for (std::size_t e = 0; e < pi.values.size(); ++e) {
    if (pi.values[e] >= pi.q) throw std::invalid_argument("twist: value not reduced mod q");
    if ((pi.values[e] + pi.values[L.reverse(e)]) % pi.q != 0) {
      const auto [u, v] = L.directed_edges()[e];
      throw std::invalid_argument("twist: values on (" + std::to_string(u) + ", " +
                                  std::to_string(v) + ") and its reverse are not inverse");
    }
  }
}

TwistVector twist_from_edge_values(const rel::BaseGraph& base, std::uint32_t q,
                                   std::span<const std::uint32_t> values) {
  const auto& edges = base.edges();
  if (values.size() != edges.size()) throw std::invalid_argument("twist: one value per undirected edge required");
  const auto dir = base.directed_edges();
  TwistVector t{q, std::vector<std::uint32_t>(dir.size(), 0)};
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto [u, v] = edges[i];
    const auto fwd = std::lower_bound(dir.begin(), dir.end(), std::make_pair(u, v)) - dir.begin();
    const auto bwd = std::lower_bound(dir.begin(), dir.end(), std::make_pair(v, u)) - dir.begin();
    t.values[static_cast<std::size_t>(fwd)] = values[i] % q;
    t.values[static_cast<std::size_t>(bwd)] = (q - values[i] % q) % q;
  }
  return t;
}

TwistVector add_twists(const TwistVector& a, const TwistVector& b) {
  if (a.q != b.q || a.values.size() != b.values.size()) throw std::invalid_argument("add_twists: shape mismatch");
  TwistVector out{a.q, a.values};
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = (out.values[i] + b.values[i]) % a.q;
  return out;
}

TwistResult apply_twist(const CfiInstance& inst, const TwistVector& pi) {
  const Layout L(inst.base, inst.q);
  validate_twist(L, pi);
  const std::uint32_t q = inst.q;
  std::vector<std::uint32_t> d = inst.d;
  for (std::uint32_t v = 0; v < L.vertex_count(); ++v) {
    std::uint64_t s = d[v];
    for (auto e : L.edges_at(v)) s += pi.values[e];
    d[v] = static_cast<std::uint32_t>(s % q);
  }
  std::vector<Element> map(L.universe_size());
  for (std::size_t e = 0; e < L.directed_edge_count(); ++e) {
    for (std::uint32_t i = 0; i < q; ++i) map[L.edge_node(e, i)] = L.edge_node(e, (i + pi.values[e]) % q);
  }
  for (std::uint32_t v = 0; v < L.vertex_count(); ++v) {
    const auto& es = L.edges_at(v);
    for (std::size_t r = 0; r < L.gadget_size(v); ++r) {
      auto rho = L.gadget_function(v, r, inst.d[v]);
      for (std::size_t j = 0; j < es.size(); ++j) rho[j] = (rho[j] + pi.values[es[j]]) % q;
      map[L.gadget_offset(v) + r] = L.equation_node(v, rho);
    }
  }
  return TwistResult{CfiInstance(inst.base, q, std::move(d)), std::move(map)};
}

TwistVector path_twist(const rel::BaseGraph& base, std::uint32_t q,
                       std::span<const std::uint32_t> path, std::uint32_t z) {
  gfp::require_prime(q, "q");
  if (z >= q) throw std::invalid_argument("path_twist: shift not in [0, q)");
  if (path.size() < 2) throw std::invalid_argument("path_twist: path needs at least one edge");
  const bool closed = path.front() == path.back();
  if (closed && path.size() < 4) throw std::invalid_argument("path_twist: cycle must have length >= 3");
  const std::size_t distinct = closed ? path.size() - 1 : path.size();
  std::vector<std::uint32_t> seen(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(distinct));
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw std::invalid_argument("path_twist: path is not simple");
  }
  const auto dir = base.directed_edges();
  TwistVector t{q, std::vector<std::uint32_t>(dir.size(), 0)};
  auto index = [&](std::uint32_t u, std::uint32_t v) {
    return static_cast<std::size_t>(std::lower_bound(dir.begin(), dir.end(), std::make_pair(u, v)) - dir.begin());
  };
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto u = path[i], v = path[i + 1];
    if (!base.adjacent(u, v)) {
      throw std::invalid_argument("path_twist: " + std::to_string(u) + " and " + std::to_string(v) +
                                  " are not adjacent");
    }
    auto& fwd = t.values[index(u, v)];
    auto& bwd = t.values[index(v, u)];
    fwd = (fwd + z) % q;
    bwd = (bwd + q - z) % q;
  }
  return t;
}

std::vector<TwistVector> automorphisms(const CfiInstance& inst, const Caps& caps) {
  const auto& base = inst.base;
  const std::uint32_t q = inst.q;
  const auto& edges = base.edges();
  // Oriented incidence: an edge value t on (u, v), u < v, contributes +t at u
  // and -t at v.
  gfp::Matrix inc(q, base.vertex_count(), edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    inc.set(edges[i].first, i, 1 % q);
    inc.set(edges[i].second, i, q - 1);
  }
  const auto basis = gfp::kernel_basis(inc);
  long double total = 1;
  for (std::size_t i = 0; i < basis.size(); ++i) total *= q;
  if (total > static_cast<long double>(caps.twist_enumeration)) {
    throw ResourceCapError("automorphism group has " + std::to_string(static_cast<double>(total)) +
                           " elements, above the enumeration cap");
  }
  std::vector<TwistVector> out;
  std::vector<std::uint32_t> coeff(basis.size(), 0);
  while (true) {
    std::vector<std::uint32_t> vals(edges.size(), 0);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      for (std::size_t i = 0; i < edges.size(); ++i) {
        vals[i] = static_cast<std::uint32_t>((vals[i] + static_cast<std::uint64_t>(coeff[b]) * basis[b][i]) % q);
      }
    }
    out.push_back(twist_from_edge_values(base, q, vals));
    std::size_t k = 0;
    while (k < coeff.size() && ++coeff[k] == q) coeff[k++] = 0;
    if (k == coeff.size()) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

rel::Structure canonical_form(const CfiInstance& inst, const Caps& caps) {
  std::vector<std::uint32_t> d(inst.d.size(), 0);
  d[0] = iso_class(inst);
  return build(CfiInstance(inst.base, inst.q, std::move(d)), caps);
}

bool brute_iso_oracle(const CfiInstance& a, const CfiInstance& b, const Caps& caps) {
  if (!(a.base == b.base) || a.q != b.q) {
    throw std::invalid_argument("brute_iso_oracle: instances must share base graph and q");
  }
  const std::uint32_t q = a.q;
  const auto& edges = a.base.edges();
  long double total = 1;
  for (std::size_t i = 0; i < edges.size(); ++i) total *= q;
  if (total > static_cast<long double>(caps.twist_enumeration)) {
    throw ResourceCapError("brute_iso_oracle: q^|E| above the enumeration cap");
  }
  // Walk all of F_q^E and apply each twist to the gadget values directly;
  // (u, v) with u < v shifts u by +t and v by -t.
  std::vector<std::uint32_t> t(edges.size(), 0);
  std::vector<std::uint32_t> d(a.d.size());
  while (true) {
    d = a.d;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      d[edges[i].first] = (d[edges[i].first] + t[i]) % q;
      d[edges[i].second] = (d[edges[i].second] + q - t[i]) % q;
    }
    if (d == b.d) return true;
    std::size_t k = 0;
    while (k < t.size() && ++t[k] == q) t[k++] = 0;
    if (k == t.size()) return false;
  }
}

ParsedStructure parse_structure(const rel::Structure& s) {
  auto fail = [](const std::string& msg) -> void { throw std::invalid_argument("malformed CFI structure: " + msg); };
  const auto* pre = s.find(kPreorder);
  const auto* C = s.find(kCycle);
  const auto* I = s.find(kInverse);
  const auto* R = s.find(kGadget);
  if (!pre || !C || !I || !R) fail("missing one of the relations le, C, I, R");
  for (const auto* r : {pre, C, I, R}) {
    if (r->arity() != 2) fail("relation " + r->name() + " is not binary");
  }
  const std::size_t n = s.universe();
  constexpr Element kNone = ~Element{0};
  std::vector<Element> succ(n, kNone), pred(n, kNone), partner(n, kNone);
  for (const auto& t : C->tuples()) {
    if (succ[t[0]] != kNone || pred[t[1]] != kNone) fail("C is not a union of cycles");
    succ[t[0]] = t[1];
    pred[t[1]] = t[0];
  }
  for (const auto& t : I->tuples()) {
    if (partner[t[0]] != kNone) fail("I is not a matching");
    partner[t[0]] = t[1];
  }
  std::vector<std::vector<Element>> gadget_nbrs(n);
  for (const auto& t : R->tuples()) gadget_nbrs[t[0]].push_back(t[1]);

  ParsedStructure out;
  std::vector<std::int64_t> class_of(n, -1);
  std::vector<std::size_t> pos_in_class(n, 0);
  for (Element a = 0; a < n; ++a) {
    const bool edge = succ[a] != kNone;
    if (edge != (pred[a] != kNone)) fail("C is not a union of cycles");
    if (!edge) continue;
    out.edge_nodes.push_back(a);
    if (class_of[a] >= 0) continue;
    std::vector<Element> cls;
    Element cur = a;
    do {
      if (class_of[cur] >= 0) fail("C cycles overlap");
      class_of[cur] = static_cast<std::int64_t>(out.edge_classes.size());
      pos_in_class[cur] = cls.size();
      cls.push_back(cur);
      cur = succ[cur];
      if (cur == kNone) fail("C is not a union of cycles");
    } while (cur != a);
    out.edge_classes.push_back(std::move(cls));
  }
  if (out.edge_classes.empty()) fail("no edge classes");
  out.q = static_cast<std::uint32_t>(out.edge_classes.front().size());
  if (!gfp::is_prime(out.q)) fail("cycle length " + std::to_string(out.q) + " is not prime");
  for (const auto& cls : out.edge_classes) {
    if (cls.size() != out.q) fail("edge classes of different sizes");
  }
  const std::uint32_t q = out.q;
  for (const auto& cls : out.edge_classes) {
    const Element first = partner[cls[0]];
    if (first == kNone || class_of[first] < 0) fail("edge node without an I-partner");
    const auto& other = out.edge_classes[static_cast<std::size_t>(class_of[first])];
    if (&other == &cls) fail("I pairs a class with itself");
    const std::size_t base = pos_in_class[first];
    for (std::size_t i = 0; i < q; ++i) {
      // partner of e_i is f_{-i} relative to the partner of e_0.
      const Element want = other[(base + q - i) % q];
      if (partner[cls[i]] != want || partner[want] != cls[i]) {
        fail("I does not pair additive inverses");
      }
    }
  }
  std::vector<Element> eq_nodes;
  for (Element a = 0; a < n; ++a) {
    if (succ[a] != kNone) {
      if (!gadget_nbrs[a].empty()) fail("edge node with R-successors");
      continue;
    }
    if (partner[a] != kNone) fail("I touches a non-edge node");
    if (gadget_nbrs[a].empty()) fail("element " + std::to_string(a) + " is neither edge nor equation node");
    eq_nodes.push_back(a);
  }
  // Edge nodes precede equation nodes; equation classes are preorder classes.
  auto le = [&](Element a, Element b) { return pre->contains(a, b); };
  for (auto e : out.edge_nodes) {
    for (auto v : eq_nodes) {
      if (!le(e, v) || le(v, e)) fail("preorder does not put edge nodes below equation nodes");
    }
  }
  std::vector<Element> sorted = eq_nodes;
  std::stable_sort(sorted.begin(), sorted.end(), [&](Element a, Element b) { return le(a, b) && !le(b, a); });
  for (auto a : sorted) {
    if (!out.equation_classes.empty()) {
      const Element rep = out.equation_classes.back().front();
      if (le(rep, a) && le(a, rep)) {
        out.equation_classes.back().push_back(a);
        continue;
      }
    }
    out.equation_classes.push_back({a});
  }
  for (const auto& cls : out.equation_classes) {
    std::vector<std::int64_t> incident;
    for (auto b : gadget_nbrs[cls.front()]) incident.push_back(class_of[b]);
    std::sort(incident.begin(), incident.end());
    if (incident.front() < 0) fail("R points at a non-edge node");
    if (std::adjacent_find(incident.begin(), incident.end()) != incident.end()) {
      fail("equation node with two R-neighbours in one edge class");
    }
    for (auto a : cls) {
      std::vector<std::int64_t> mine;
      for (auto b : gadget_nbrs[a]) mine.push_back(class_of[b]);
      std::sort(mine.begin(), mine.end());
      if (mine != incident) fail("equation nodes of one class touch different edge classes");
    }
  }
  return out;
}

}  // namespace cfiforge::cfi
