#include "cfiforge/isoles.hpp"

#include <algorithm>
#include <stdexcept>

namespace cfiforge::isoles {

std::vector<std::string> IsoSystem::variable_names() const {
  std::vector<std::string> names;
  names.reserve(variable_count());
  for (auto a : edge_variables) names.push_back("e" + std::to_string(a));
  for (std::size_t k = 0; k < vertex_variables; ++k) names.push_back("v" + std::to_string(k));
  return names;
}

IsoSystem build_system(const rel::Structure& s, std::uint32_t z) {
  const cfi::ParsedStructure parsed = cfi::parse_structure(s);
  const std::uint32_t q = parsed.q;
  if (z >= q) throw std::invalid_argument("build_system: z must lie in [0, q)");

  std::vector<std::int64_t> var(s.universe(), -1);
  for (std::size_t i = 0; i < parsed.edge_nodes.size(); ++i) var[parsed.edge_nodes[i]] = static_cast<std::int64_t>(i);
  const std::size_t n_edge = parsed.edge_nodes.size();
  const std::size_t n_vert = parsed.equation_classes.size();
  const std::size_t n_vars = n_edge + n_vert;

  const auto cycle = s.at(cfi::kCycle).tuples();
  const auto inv = s.at(cfi::kInverse).tuples();
  std::vector<std::vector<rel::Element>> gadget(s.universe());
  for (const auto& t : s.at(cfi::kGadget).tuples()) gadget[t[0]].push_back(t[1]);

  std::size_t n_eq3 = 0;
  for (const auto& cls : parsed.equation_classes) n_eq3 += cls.size();
  const std::size_t rows = cycle.size() + inv.size() + n_eq3 + 1;

  gfp::Matrix m(q, rows, n_vars);
  gfp::Vector rhs(rows, 0);
  const gfp::Residue minus_one = q - 1;
  auto add = [&](std::size_t r, std::size_t c, gfp::Residue v) { m.set(r, c, (m(r, c) + v) % q); };

  std::size_t r = 0;
  for (const auto& t : cycle) {
    add(r, static_cast<std::size_t>(var[t[1]]), 1);
    add(r, static_cast<std::size_t>(var[t[0]]), minus_one);
    rhs[r++] = 1 % q;
  }
  for (const auto& t : inv) {
    add(r, static_cast<std::size_t>(var[t[0]]), 1);
    add(r, static_cast<std::size_t>(var[t[1]]), 1);
    ++r;
  }
  for (std::size_t k = 0; k < n_vert; ++k) {
    for (auto rho : parsed.equation_classes[k]) {
      add(r, n_edge + k, 1);
      for (auto b : gadget[rho]) add(r, static_cast<std::size_t>(var[b]), minus_one);
      ++r;
    }
  }
  for (std::size_t k = 0; k < n_vert; ++k) add(r, n_edge + k, 1);
  rhs[r] = z;

  return IsoSystem{q,
                   parsed.edge_nodes,
                   n_vert,
                   {cycle.size(), inv.size(), n_eq3, 1},
                   gfp::LinearSystem(std::move(m), std::move(rhs))};
}

std::uint32_t decide_class_via_les(const rel::Structure& s) {
  const std::uint32_t q = cfi::parse_structure(s).q;
  std::vector<std::uint32_t> solvable;
  for (std::uint32_t z = 0; z < q; ++z) {
    if (gfp::is_solvable(build_system(s, z).system)) solvable.push_back(z);
  }
  if (solvable.size() != 1) {
    throw ConsistencyError("expected exactly one solvable class value, found " +
                           std::to_string(solvable.size()));
  }
  return solvable.front();
}

Isomorphism solution_to_isomorphism(const cfi::CfiInstance& inst, std::uint32_t z,
                                    std::span<const gfp::Residue> solution) {
  const rel::Structure source = cfi::build(inst);
  const IsoSystem sys = build_system(source, z);
  if (!gfp::satisfies(sys.system, solution)) {
    throw std::invalid_argument("solution_to_isomorphism: vector does not solve the system");
  }
  const cfi::Layout L(inst.base, inst.q);
  const std::uint32_t q = inst.q;
  // In the canonical numbering the edge-node variables are elements 0.., and
  // equation classes follow vertex order.
  const std::size_t n_edge = L.edge_node_count();
  std::vector<std::uint32_t> d_plus(L.vertex_count());
  for (std::uint32_t v = 0; v < L.vertex_count(); ++v) d_plus[v] = solution[n_edge + v];
  std::vector<std::uint32_t> delta(L.directed_edge_count());
  for (std::size_t e = 0; e < delta.size(); ++e) delta[e] = solution[L.edge_node(e, 0)];

  std::vector<rel::Element> map(L.universe_size());
  for (std::size_t e = 0; e < L.directed_edge_count(); ++e) {
    for (std::uint32_t i = 0; i < q; ++i) map[L.edge_node(e, i)] = L.edge_node(e, solution[L.edge_node(e, i)]);
  }
  for (std::uint32_t v = 0; v < L.vertex_count(); ++v) {
    const auto& es = L.edges_at(v);
    for (std::size_t rank = 0; rank < L.gadget_size(v); ++rank) {
      auto rho = L.gadget_function(v, rank, inst.d[v]);
      for (std::size_t j = 0; j < es.size(); ++j) rho[j] = (rho[j] + delta[es[j]]) % q;
      map[L.gadget_offset(v) + rank] = L.equation_node(v, rho);
    }
  }
  cfi::CfiInstance target(inst.base, q, std::move(d_plus));
  if (!rel::is_isomorphism(source, cfi::build(target), map)) {
    throw ConsistencyError("solution_to_isomorphism: induced map is not an isomorphism");
  }
  return Isomorphism{std::move(target), std::move(map)};
}

}  // namespace cfiforge::isoles
