#include <gtest/gtest.h>

#include <random>

#include "cfiforge/relstruct.hpp"

using namespace cfiforge;
using rel::BaseGraph;
using rel::Relation;
using rel::Structure;

namespace {

bool connected_without(const BaseGraph& g, std::uint32_t removed) {
  const std::size_t n = g.vertex_count();
  std::uint32_t start = 0;
  while (start < n && (removed >> start & 1)) ++start;
  if (start == n) return true;
  std::vector<bool> seen(n, false);
  std::vector<std::uint32_t> stack{start};
  seen[start] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (auto w : g.neighbors(v)) {
      if ((removed >> w & 1) || seen[w]) continue;
      seen[w] = true;
      ++reached;
      stack.push_back(w);
    }
  }
  return reached + __builtin_popcount(removed) == n;
}

// Smallest separating vertex set by exhaustion; n-1 when none exists.
std::size_t brute_connectivity(const BaseGraph& g) {
  const std::size_t n = g.vertex_count();
  std::size_t best = n - 1;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    const std::size_t k = __builtin_popcount(s);
    if (k >= best || n - k < 2) continue;
    if (!connected_without(g, s)) best = k;
  }
  return best;
}

BaseGraph random_connected(std::mt19937_64& rng, std::size_t n, double density) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  // Random spanning tree first so the graph is connected.
  for (std::uint32_t v = 1; v < n; ++v) edges.emplace_back(static_cast<std::uint32_t>(rng() % v), v);
  std::bernoulli_distribution coin(density);
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v) {
      bool present = false;
      for (auto [a, b] : edges) present |= (a == u && b == v);
      if (!present && coin(rng)) edges.emplace_back(u, v);
    }
  return BaseGraph(n, edges);
}

}  // namespace

TEST(RelStruct, Families) {
  EXPECT_EQ(rel::complete_graph(4).edges().size(), 6u);
  EXPECT_EQ(rel::complete_graph(5).edges().size(), 10u);
  EXPECT_EQ(rel::complete_graph(2).edges().size(), 1u);
  EXPECT_THROW(rel::complete_graph(1), std::invalid_argument);
  EXPECT_EQ(rel::cycle_graph(6).edges().size(), 6u);
  EXPECT_EQ(rel::path_graph(4).edges().size(), 3u);
}

TEST(RelStruct, GraphValidation) {
  EXPECT_THROW(BaseGraph(3, {{0, 0}, {0, 1}, {1, 2}}), std::invalid_argument);
  EXPECT_THROW(BaseGraph(3, {{0, 1}}), std::invalid_argument);
  EXPECT_THROW(BaseGraph(2, {{0, 1}, {1, 0}}), std::invalid_argument);
  EXPECT_THROW(BaseGraph(2, {{0, 2}}), std::invalid_argument);
  const BaseGraph g(3, {{2, 1}, {1, 0}});
  for (auto [u, v] : g.edges()) EXPECT_LT(u, v);
  EXPECT_TRUE(g.adjacent(1, 2));
  EXPECT_FALSE(g.adjacent(0, 2));
}

TEST(RelStruct, ConnectivityExamples) {
  EXPECT_EQ(rel::connectivity(rel::complete_graph(5)), 4u);
  EXPECT_EQ(rel::connectivity(rel::cycle_graph(6)), 2u);
  EXPECT_EQ(rel::connectivity(rel::path_graph(4)), 1u);
  for (std::size_t n = 2; n <= 8; ++n) EXPECT_EQ(rel::connectivity(rel::complete_graph(n)), n - 1);
}

TEST(RelStruct, ConnectivityMatchesExhaustiveSeparators) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 7;
    const BaseGraph g = random_connected(rng, n, (trial % 4) * 0.3);
    EXPECT_EQ(rel::connectivity(g), brute_connectivity(g)) << "trial " << trial;
  }
}

TEST(RelStruct, AtomicTypeExamples) {
  const Structure empty(3, {Relation("C", 2, {}, 3)});
  EXPECT_EQ(rel::atomic_type(empty, rel::Tuple{0, 0}), rel::atomic_type(empty, rel::Tuple{1, 1}));
  EXPECT_NE(rel::atomic_type(empty, rel::Tuple{0, 0}), rel::atomic_type(empty, rel::Tuple{0, 1}));

  const Structure s(3, {Relation("C", 2, {{0, 1}}, 3)});
  EXPECT_NE(rel::atomic_type(s, rel::Tuple{0, 1}), rel::atomic_type(s, rel::Tuple{1, 2}));
  EXPECT_NE(rel::atomic_type(s, rel::Tuple{0, 1}), rel::atomic_type(s, rel::Tuple{1, 0}));
}

// Two pairs get the same code iff t -> t' is a well-defined injective map that
// preserves every relation on the entries.
TEST(RelStruct, AtomicTypeMatchesPartialIsomorphismClassifier) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 64; ++trial) {
    std::vector<rel::Tuple> tuples;
    for (rel::Element a = 0; a < 3; ++a)
      for (rel::Element b = 0; b < 3; ++b)
        if (rng() & 1) tuples.push_back({a, b});
    const Structure s(3, {Relation("C", 2, tuples, 3)});
    const auto& c = s.at("C");
    for (rel::Element a = 0; a < 3; ++a)
      for (rel::Element b = 0; b < 3; ++b)
        for (rel::Element x = 0; x < 3; ++x)
          for (rel::Element y = 0; y < 3; ++y) {
            bool partial_iso = (a == b) == (x == y);
            const rel::Element src[2] = {a, b}, dst[2] = {x, y};
            for (int i = 0; i < 2 && partial_iso; ++i)
              for (int j = 0; j < 2; ++j) partial_iso &= c.contains(src[i], src[j]) == c.contains(dst[i], dst[j]);
            EXPECT_EQ(rel::atomic_type(s, rel::Tuple{a, b}) == rel::atomic_type(s, rel::Tuple{x, y}), partial_iso);
          }
  }
}

TEST(RelStruct, AtomicTypeInvariantUnderAutomorphisms) {
  // A directed 4-cycle: rotations are automorphisms.
  const Structure s(4, {Relation("E", 2, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, 4), Relation("P", 1, {{0}, {2}}, 4)});
  const std::vector<rel::Element> rot2 = {2, 3, 0, 1};
  ASSERT_TRUE(rel::is_isomorphism(s, s, rot2));
  ASSERT_FALSE(rel::is_isomorphism(s, s, std::vector<rel::Element>{1, 2, 3, 0}));
  for (rel::Element a = 0; a < 4; ++a)
    for (rel::Element b = 0; b < 4; ++b)
      for (rel::Element c = 0; c < 4; ++c)
        EXPECT_EQ(rel::atomic_type(s, rel::Tuple{a, b, c}), rel::atomic_type(s, rel::Tuple{rot2[a], rot2[b], rot2[c]}));
}

TEST(RelStruct, ImplicitPreorderMatchesMaterialized) {
  const auto r = Relation::preorder_from_ranks("le", {0, 0, 1, 2, 1});
  EXPECT_TRUE(r.is_implicit_preorder());
  const auto m = r.materialized(5);
  EXPECT_FALSE(m.is_implicit_preorder());
  EXPECT_EQ(r.size(), m.size());
  for (rel::Element a = 0; a < 5; ++a)
    for (rel::Element b = 0; b < 5; ++b) EXPECT_EQ(r.contains(a, b), m.contains(a, b));
  EXPECT_TRUE(r.contains(0, 1));
  EXPECT_TRUE(r.contains(4, 2));
  EXPECT_FALSE(r.contains(3, 2));
}

TEST(RelStruct, RelationValidation) {
  EXPECT_THROW(Relation("R", 0, {}, 3), std::invalid_argument);
  EXPECT_THROW(Relation("R", 2, {{0, 3}}, 3), std::invalid_argument);
  EXPECT_THROW(Relation("R", 2, {{0}}, 3), std::invalid_argument);
  EXPECT_THROW(Structure(3, {Relation("R", 1, {}, 3), Relation("R", 1, {}, 3)}), std::invalid_argument);
}
