#include <gtest/gtest.h>

#include <numeric>

#include "cfiforge/isoles.hpp"

using namespace cfiforge;
using cfi::CfiInstance;

namespace {

std::vector<std::vector<std::uint32_t>> all_vectors(std::uint32_t q, std::size_t n) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> d(n, 0);
  while (true) {
    out.push_back(d);
    std::size_t i = 0;
    while (i < n && ++d[i] == q) d[i++] = 0;
    if (i == n) return out;
  }
}

std::uint32_t sum_mod(const std::vector<std::uint32_t>& d, std::uint32_t q) {
  return static_cast<std::uint32_t>(std::accumulate(d.begin(), d.end(), 0u) % q);
}

}  // namespace

TEST(IsoLes, SystemShape) {
  const auto sys = isoles::build_system(cfi::build(CfiInstance(rel::complete_graph(4), 2, {1, 0, 0, 0})), 1);
  EXPECT_EQ(sys.variable_count(), 28u);
  EXPECT_EQ(sys.system.matrix().cols(), 28u);
  EXPECT_EQ(sys.system.matrix().rows(), 65u);
  EXPECT_EQ(sys.equation_counts, (std::array<std::size_t, 4>{24, 24, 16, 1}));
  EXPECT_EQ(sys.variable_names().size(), 28u);
  std::vector<rel::Element> expect(24);
  std::iota(expect.begin(), expect.end(), 0u);
  EXPECT_EQ(sys.edge_variables, expect);
  EXPECT_THROW(isoles::build_system(cfi::build(CfiInstance(rel::complete_graph(4), 2, {1, 0, 0, 0})), 2),
               std::invalid_argument);
}

TEST(IsoLes, SolvabilityExamples) {
  const auto s = cfi::build(CfiInstance(rel::complete_graph(4), 2, {1, 0, 0, 0}));
  EXPECT_TRUE(gfp::is_solvable(isoles::build_system(s, 1).system));
  EXPECT_FALSE(gfp::is_solvable(isoles::build_system(s, 0).system));
}

TEST(IsoLes, DecideExamples) {
  EXPECT_EQ(isoles::decide_class_via_les(cfi::build(CfiInstance(rel::complete_graph(4), 3, {1, 2, 0, 0}))), 0u);
  EXPECT_EQ(isoles::decide_class_via_les(cfi::build(CfiInstance(rel::complete_graph(5), 2, {1, 1, 1, 0, 0}))), 1u);
  EXPECT_EQ(isoles::decide_class_via_les(cfi::build(CfiInstance(rel::complete_graph(5), 3, {0, 0, 0, 0, 0}))), 0u);
}

TEST(IsoLes, SolvableExactlyForTheClassExhaustively) {
  for (std::size_t n : {4u, 5u}) {
    const auto g = rel::complete_graph(n);
    for (std::uint32_t q : {2u, 3u}) {
      for (const auto& d : all_vectors(q, n)) {
        const auto s = cfi::build(CfiInstance(g, q, d));
        for (std::uint32_t z = 0; z < q; ++z) {
          ASSERT_EQ(gfp::is_solvable(isoles::build_system(s, z).system), z == sum_mod(d, q))
              << "n=" << n << " q=" << q << " z=" << z;
        }
      }
    }
  }
}

TEST(IsoLes, DecideMatchesIsoClassOnOtherBases) {
  for (const auto& g : {rel::cycle_graph(6), rel::path_graph(3)}) {
    for (const auto& d : all_vectors(3, g.vertex_count())) {
      const CfiInstance inst(g, 3, d);
      EXPECT_EQ(isoles::decide_class_via_les(cfi::build(inst)), cfi::iso_class(inst));
    }
  }
}

TEST(IsoLes, TrivialSolutionGivesIdentity) {
  const CfiInstance inst(rel::complete_graph(4), 3, {2, 0, 0, 0});
  const cfi::Layout L(inst.base, 3);
  std::vector<gfp::Residue> x(L.edge_node_count() + 4, 0);
  for (std::size_t e = 0; e < L.directed_edge_count(); ++e)
    for (std::uint32_t i = 0; i < 3; ++i) x[L.edge_node(e, i)] = i;
  for (std::uint32_t v = 0; v < 4; ++v) x[L.edge_node_count() + v] = inst.d[v];
  const auto iso = isoles::solution_to_isomorphism(inst, 2, x);
  EXPECT_EQ(iso.target, inst);
  std::vector<rel::Element> id(L.universe_size());
  std::iota(id.begin(), id.end(), 0u);
  EXPECT_EQ(iso.map, id);
}

TEST(IsoLes, SolverSolutionIsAnIsomorphism) {
  for (std::uint32_t q : {2u, 3u}) {
    for (const auto& d : all_vectors(q, 4)) {
      const CfiInstance inst(rel::complete_graph(4), q, d);
      const std::uint32_t z = sum_mod(d, q);
      const auto x = gfp::solve(isoles::build_system(cfi::build(inst), z).system);
      ASSERT_TRUE(x.has_value());
      const auto iso = isoles::solution_to_isomorphism(inst, z, *x);
      // Checked here independently of the internal verification.
      EXPECT_TRUE(rel::is_isomorphism(cfi::build(inst), cfi::build(iso.target), iso.map));
      EXPECT_EQ(cfi::iso_class(iso.target), z);
    }
  }
}

TEST(IsoLes, RejectsNonSolutions) {
  const CfiInstance inst(rel::complete_graph(4), 2, {1, 1, 0, 0});
  std::vector<gfp::Residue> zeros(28, 0);
  EXPECT_THROW(isoles::solution_to_isomorphism(inst, 0, zeros), std::invalid_argument);
  auto x = *gfp::solve(isoles::build_system(cfi::build(inst), 0).system);
  x[0] ^= 1;
  EXPECT_THROW(isoles::solution_to_isomorphism(inst, 0, x), std::invalid_argument);
}

TEST(IsoLes, RejectsMalformedStructures) {
  const rel::Structure s(4, {rel::Relation("C", 2, {{0, 1}}, 4)});
  EXPECT_THROW(isoles::build_system(s, 0), std::invalid_argument);
}
