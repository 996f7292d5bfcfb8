#include <gtest/gtest.h>

#include <map>
#include <set>

#include "cfiforge/cfi.hpp"
#include "cfiforge/wl.hpp"

using namespace cfiforge;
using cfi::CfiInstance;

namespace {

wl::Options with_k(std::size_t k, unsigned threads = 1) {
  wl::Options o;
  o.k = k;
  o.threads = threads;
  return o;
}

// Equal colors imply equal labels.
bool refines(const std::vector<std::uint32_t>& fine, const std::vector<std::uint32_t>& coarse) {
  std::map<std::uint32_t, std::uint32_t> seen;
  for (std::size_t i = 0; i < fine.size(); ++i) {
    auto [it, fresh] = seen.emplace(fine[i], coarse[i]);
    if (!fresh && it->second != coarse[i]) return false;
  }
  return true;
}

std::vector<std::uint32_t> canonical_labels(const std::vector<std::uint32_t>& v) {
  std::map<std::uint32_t, std::uint32_t> rename;
  std::vector<std::uint32_t> out;
  for (auto x : v) out.push_back(rename.emplace(x, static_cast<std::uint32_t>(rename.size())).first->second);
  return out;
}

}  // namespace

TEST(Wl, EmptyRelationsGiveOneColor) {
  const rel::Structure s(6, {rel::Relation("E", 2, {}, 6)});
  const auto c = wl::wl_refine(s, with_k(1));
  EXPECT_EQ(c.color_count, 1u);
  EXPECT_EQ(c.colors.size(), 6u);
}

TEST(Wl, RefinesPreorderClasses) {
  const CfiInstance inst(rel::complete_graph(4), 2, {1, 0, 0, 0});
  const auto s = cfi::build(inst);
  const auto c = wl::wl_refine(s, with_k(1));
  const cfi::Layout L(inst.base, 2);
  std::vector<std::uint32_t> cls(s.universe());
  for (rel::Element a = 0; a < s.universe(); ++a) cls[a] = L.is_edge_node(a) ? a / 2 : 1000 + L.owner(a);
  EXPECT_TRUE(refines(c.colors, cls));
  EXPECT_EQ(c.color_count, 12u + 4u);
}

TEST(Wl, StableColorsRefineAtomicTypesAndGrowMonotonically) {
  const auto s = cfi::build(CfiInstance(rel::cycle_graph(5), 2, {0, 1, 0, 0, 0}));
  const auto c = wl::wl_refine(s, with_k(2));
  std::vector<std::uint32_t> types;
  std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
  for (rel::Element a = 0; a < s.universe(); ++a)
    for (rel::Element b = 0; b < s.universe(); ++b)
      types.push_back(ids.emplace(rel::atomic_type(s, rel::Tuple{a, b}), ids.size()).first->second);
  EXPECT_TRUE(refines(c.colors, types));
  ASSERT_FALSE(c.classes_per_round.empty());
  for (std::size_t r = 1; r < c.classes_per_round.size(); ++r) EXPECT_GE(c.classes_per_round[r], c.classes_per_round[r - 1]);
  EXPECT_EQ(c.classes_per_round.back(), c.color_count);
}

TEST(Wl, DiagonalOfK5MatchesAutomorphismOrbits) {
  const CfiInstance inst(rel::complete_graph(5), 2, {1, 0, 0, 0, 0});
  const auto s = cfi::build(inst);
  const auto c = wl::wl_refine(s, with_k(2));
  const auto diag = c.diagonal();

  // Orbits of single elements under the enumerated automorphisms.
  std::vector<std::uint32_t> orbit(s.universe());
  for (rel::Element a = 0; a < s.universe(); ++a) orbit[a] = a;
  const auto autos = cfi::automorphisms(inst);
  ASSERT_EQ(autos.size(), 64u);
  for (const auto& pi : autos) {
    const auto map = cfi::apply_twist(inst, pi).element_map;
    for (rel::Element a = 0; a < s.universe(); ++a) orbit[a] = std::min(orbit[a], map[a]);
  }
  std::set<std::uint32_t> orbit_ids(orbit.begin(), orbit.end()), diag_ids(diag.begin(), diag.end());
  EXPECT_EQ(orbit_ids.size(), 25u);
  EXPECT_EQ(diag_ids.size(), 25u);
  EXPECT_EQ(canonical_labels(diag), canonical_labels(orbit));

  // Invariance of pair colors under every automorphism.
  for (const auto& pi : autos) {
    const auto map = cfi::apply_twist(inst, pi).element_map;
    for (rel::Element a = 0; a < s.universe(); ++a)
      for (rel::Element b = 0; b < s.universe(); ++b)
        ASSERT_EQ(c.color_of(rel::Tuple{a, b}), c.color_of(rel::Tuple{map[a], map[b]}));
  }
}

TEST(Wl, ThreadCountDoesNotChangeColors) {
  const auto s = cfi::build(CfiInstance(rel::complete_graph(4), 3, {1, 0, 2, 0}));
  const auto one = wl::wl_refine(s, with_k(2, 1));
  const auto four = wl::wl_refine(s, with_k(2, 4));
  EXPECT_EQ(one.colors, four.colors);
  EXPECT_EQ(one.rounds, four.rounds);
  const auto a = cfi::build(CfiInstance(rel::complete_graph(4), 3, {0, 0, 0, 0}));
  const auto v1 = wl::wl_distinguish(a, s, with_k(2, 1));
  const auto v4 = wl::wl_distinguish(a, s, with_k(2, 4));
  EXPECT_EQ(v1.histogram_a, v4.histogram_a);
  EXPECT_EQ(v1.histogram_b, v4.histogram_b);
  EXPECT_EQ(v1.distinguished, v4.distinguished);
}

TEST(Wl, IdenticalInputsAreEquivalent) {
  const auto s = cfi::build(CfiInstance(rel::complete_graph(4), 2, {0, 0, 0, 0}));
  const auto v = wl::wl_distinguish(s, s, with_k(1));
  EXPECT_FALSE(v.distinguished);
  EXPECT_EQ(v.histogram_a, v.histogram_b);
}

TEST(Wl, CfiPairsBelowConnectivityAreEquivalent) {
  const auto k4 = rel::complete_graph(4);
  const auto a4 = cfi::build(CfiInstance(k4, 2, {0, 0, 0, 0}));
  const auto b4 = cfi::build(CfiInstance(k4, 2, {1, 0, 0, 0}));
  EXPECT_FALSE(wl::wl_distinguish(a4, b4, with_k(1)).distinguished);
  EXPECT_FALSE(wl::wl_distinguish(a4, b4, with_k(2)).distinguished);

  const auto k5 = rel::complete_graph(5);
  EXPECT_FALSE(wl::wl_distinguish(cfi::build(CfiInstance(k5, 2, {0, 0, 0, 0, 0})),
                                  cfi::build(CfiInstance(k5, 2, {1, 0, 0, 0, 0})), with_k(2, 4))
                   .distinguished);
}

TEST(Wl, DistinguishedPairsAreNonIsomorphic) {
  const auto c6 = rel::cycle_graph(6);
  const CfiInstance a(c6, 2, {0, 0, 0, 0, 0, 0}), b(c6, 2, {0, 0, 1, 0, 0, 0});
  const auto v = wl::wl_distinguish(cfi::build(a), cfi::build(b), with_k(2));
  EXPECT_TRUE(v.distinguished);
  EXPECT_GT(v.round, 0u);
  EXPECT_NE(v.histogram_a, v.histogram_b);
  EXPECT_FALSE(cfi::brute_iso_oracle(a, b));

  const CfiInstance c(c6, 2, {1, 0, 1, 0, 0, 0});
  EXPECT_FALSE(wl::wl_distinguish(cfi::build(a), cfi::build(c), with_k(2)).distinguished);
  EXPECT_TRUE(cfi::brute_iso_oracle(a, c));
}

TEST(Wl, DifferentSizesAreDistinguishedImmediately) {
  const auto a = cfi::build(CfiInstance(rel::complete_graph(4), 2, {0, 0, 0, 0}));
  const auto b = cfi::build(CfiInstance(rel::cycle_graph(4), 2, {0, 0, 0, 0}));
  const auto v = wl::wl_distinguish(a, b, with_k(1));
  EXPECT_TRUE(v.distinguished);
  EXPECT_EQ(v.round, 0u);
}

TEST(Wl, TupleCapIsEnforced) {
  const auto s = cfi::build(CfiInstance(rel::complete_graph(4), 2, {0, 0, 0, 0}));
  auto o = with_k(3);
  o.caps.wl_tuples = 1000;
  EXPECT_THROW(wl::wl_refine(s, o), ResourceCapError);
  EXPECT_THROW(wl::wl_refine(s, with_k(0)), std::invalid_argument);
}
