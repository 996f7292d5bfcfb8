#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "cfiforge/sylow.hpp"
#include "cfiforge/sylow_check.hpp"

using namespace cfiforge;
using sylow::Signature;
using sylow::SignatureVector;
using sylow::SylowGroup;

namespace {

std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// An explicit rooted q-ary tree of depth r, leaves numbered left to right.
struct Tree {
  struct NodeInfo {
    int parent = -1;
    std::uint32_t height = 0;
    std::uint32_t child_index = 0;
  };
  std::vector<NodeInfo> nodes;
  std::vector<int> leaf;

  Tree(std::uint32_t q, std::uint32_t r) {
    nodes.push_back({-1, r, 0});
    grow(0, q);
  }

  void grow(int v, std::uint32_t q) {
    if (nodes[v].height == 0) {
      leaf.push_back(v);
      return;
    }
    for (std::uint32_t c = 0; c < q; ++c) {
      nodes.push_back({v, nodes[v].height - 1, c});
      grow(static_cast<int>(nodes.size() - 1), q);
    }
  }

  // Height of the lowest common ancestor and the child-index difference there.
  Signature lca(std::uint32_t a, std::uint32_t b, std::uint32_t q) const {
    if (a == b) return {0, 0};
    int x = leaf[a], y = leaf[b];
    while (nodes[x].parent != nodes[y].parent) {
      x = nodes[x].parent;
      y = nodes[y].parent;
    }
    const auto h = nodes[nodes[x].parent].height;
    return {h, (nodes[y].child_index + q - nodes[x].child_index) % q};
  }
};

std::vector<std::vector<std::uint32_t>> all_tuples(std::uint32_t n, std::size_t l) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> t(l, 0);
  while (true) {
    out.push_back(t);
    std::size_t i = 0;
    while (i < l && ++t[i] == n) t[i++] = 0;
    if (i == l) return out;
  }
}

}  // namespace

TEST(Sylow, GroupOrders) {
  EXPECT_EQ(SylowGroup(2, 2).order(), 8u);
  EXPECT_EQ(SylowGroup(3, 2).order(), 81u);
  EXPECT_EQ(SylowGroup(2, 3).order(), 128u);
  EXPECT_EQ(SylowGroup(2, 1).order(), 2u);
  EXPECT_THROW(SylowGroup(4, 2), std::invalid_argument);
  EXPECT_THROW(SylowGroup(2, 0), std::invalid_argument);
}

TEST(Sylow, MaterializedGroupIsClosed) {
  for (auto [q, r] : {std::pair{2u, 2u}, std::pair{3u, 2u}, std::pair{2u, 3u}}) {
    const SylowGroup g(q, r);
    const auto perms = g.materialize();
    const std::set<Permutation> set(perms.begin(), perms.end());
    ASSERT_EQ(set.size(), g.order());
    for (const auto& a : perms) {
      EXPECT_TRUE(is_bijection(a));
      EXPECT_TRUE(set.count(inverse(a)));
      for (const auto& b : perms) ASSERT_TRUE(set.count(compose(a, b)));
    }
    // The generators span the same group.
    EXPECT_EQ(g.as_group().order(), g.order());
    EXPECT_TRUE(sylow::check::check_group(g).ok);
  }
}

TEST(Sylow, SignatureAgainstExplicitTree) {
  EXPECT_EQ(sylow::signature(2, 2, 3, 3), (Signature{0, 0}));
  EXPECT_EQ(sylow::signature(2, 2, 1, 3), (Signature{2, 1}));
  EXPECT_EQ(sylow::signature(2, 2, 0, 1), (Signature{1, 1}));
  for (auto [q, r] : {std::pair{2u, 3u}, std::pair{3u, 2u}, std::pair{5u, 2u}, std::pair{2u, 4u}}) {
    const Tree t(q, r);
    const std::uint32_t n = static_cast<std::uint32_t>(ipow(q, r));
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = 0; b < n; ++b) ASSERT_EQ(sylow::signature(q, r, a, b), t.lca(a, b, q));
  }
  EXPECT_THROW(sylow::signature(2, 2, 0, 4), std::invalid_argument);
}

TEST(Sylow, TupleSignatures) {
  EXPECT_TRUE(sylow::tuple_signature(2, 2, std::vector<std::uint32_t>{3}).empty());
  const auto c = sylow::tuple_signature(3, 2, std::vector<std::uint32_t>{4, 4, 4, 4});
  EXPECT_EQ(c.size(), 6u);
  for (const auto& s : c) EXPECT_EQ(s, (Signature{0, 0}));
  const auto s = sylow::tuple_signature(2, 2, std::vector<std::uint32_t>{0, 1, 3});
  EXPECT_EQ(s, (SignatureVector{{1, 1}, {2, 1}, {2, 1}}));
}

// Pair signatures on [4]^2 are exactly the orbits of the 8 group elements.
TEST(Sylow, PairSignaturesAreOrbits) {
  for (auto [q, r] : {std::pair{2u, 2u}, std::pair{3u, 2u}, std::pair{2u, 3u}}) {
    const SylowGroup g(q, r);
    const auto perms = g.materialize();
    const auto n = static_cast<std::uint32_t>(g.degree());
    for (std::size_t l : {2u, 3u}) {
      if (l == 3 && n > 8) continue;
      const auto tuples = all_tuples(n, l);
      for (const auto& a : tuples)
        for (const auto& b : tuples) {
          bool same_orbit = false;
          for (const auto& pi : perms) {
            bool hit = true;
            for (std::size_t i = 0; i < l; ++i) hit &= pi[a[i]] == b[i];
            if (hit) {
              same_orbit = true;
              break;
            }
          }
          ASSERT_EQ(sylow::tuple_signature(q, r, a) == sylow::tuple_signature(q, r, b), same_orbit);
        }
    }
  }
}

TEST(Sylow, InvarianceAndCompletenessChecks) {
  std::mt19937_64 rng(3);
  const SylowGroup g(2, 3);
  EXPECT_TRUE(sylow::check::check_invariance(g, 2, std::nullopt, rng).ok);
  EXPECT_TRUE(sylow::check::check_completeness(g, 2, std::nullopt, rng).ok);
  EXPECT_TRUE(sylow::check::check_invariance(SylowGroup(3, 2), 3, 500, rng).ok);
}

// For an anchor a and two other points whose signatures to a differ, the
// signature between the two points is forced. When the first point branches
// off higher up, the offset is the negated anchor offset.
TEST(Sylow, CrossClassSignatureRule) {
  for (auto [q, r] : {std::pair{3u, 2u}, std::pair{2u, 3u}, std::pair{3u, 3u}}) {
    const auto n = static_cast<std::uint32_t>(ipow(q, r));
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t x = 0; x < n; ++x)
        for (std::uint32_t y = 0; y < n; ++y) {
          const auto s1 = sylow::signature(q, r, a, x), s2 = sylow::signature(q, r, a, y);
          if (s1.level == 0 || s2.level == 0 || s1 == s2) continue;
          Signature want;
          if (s1.level == s2.level) {
            want = {s1.level, (s2.offset + q - s1.offset) % q};
          } else if (s1.level < s2.level) {
            want = {s2.level, s2.offset};
          } else {
            want = {s1.level, (q - s1.offset) % q};
          }
          ASSERT_EQ(sylow::signature(q, r, x, y), want) << a << " " << x << " " << y;
        }
  }
}

TEST(Sylow, CountExamples) {
  const auto one = sylow::count_realizations(3, 2, 2, 1, {}, 2, 0, {});
  EXPECT_EQ(one.residue, 1u);
  EXPECT_TRUE(one.realizable);
  const auto pairs = sylow::count_realizations(2, 2, 3, 2, {{2, 1}}, 2, 0, {});
  EXPECT_EQ(pairs.residue, 2u);
  EXPECT_EQ(pairs.witness, (std::vector<std::uint32_t>{0, 2}));
  // A level-2 pair cannot live inside a block of size 2.
  const auto none = sylow::count_realizations(2, 2, 3, 2, {{2, 1}}, 1, 0, {});
  EXPECT_EQ(none.residue, 0u);
  EXPECT_FALSE(none.realizable);
  // Fixed entry inconsistent with the signature.
  const std::uint32_t fixed[] = {0, 1};
  const auto pinned = sylow::count_realizations(2, 2, 3, 2, {{2, 1}}, 2, 0, fixed);
  EXPECT_FALSE(pinned.realizable);
  EXPECT_THROW(sylow::count_realizations(2, 2, 3, 2, {{0, 1}}, 2, 0, {}), std::invalid_argument);
  EXPECT_THROW(sylow::count_realizations(2, 2, 2, 1, {}, 2, 0, {}), std::invalid_argument);
}

TEST(Sylow, CountMatchesBruteForce) {
  for (auto [q, r, p] : {std::tuple{2u, 2u, 3u}, std::tuple{2u, 3u, 5u}, std::tuple{3u, 2u, 2u}}) {
    const auto n = static_cast<std::uint32_t>(ipow(q, r));
    for (std::size_t l = 1; l <= 3; ++l) {
      std::map<SignatureVector, std::pair<std::uint64_t, std::vector<std::uint32_t>>> brute;
      for (const auto& t : all_tuples(n, l)) {
        auto& e = brute[sylow::tuple_signature(q, r, t)];
        if (e.first++ == 0 || t < e.second) e.second = t;
      }
      const auto real = sylow::realizable_signatures(q, r, l);
      EXPECT_EQ(real.size(), brute.size());
      for (const auto& [sig, info] : brute) {
        const auto got = sylow::count_realizations(q, r, p, l, sig, r, 0, {});
        EXPECT_EQ(got.residue, info.first % p);
        EXPECT_TRUE(got.realizable);
        EXPECT_EQ(got.witness, info.second);
        EXPECT_TRUE(std::find(real.begin(), real.end(), sig) != real.end());
      }
    }
    EXPECT_TRUE(sylow::check::check_counting(q, r, p, 3).ok);
  }
}

TEST(Sylow, PerEqualityTypeExamples) {
  const std::vector<std::uint32_t> a = {1, 2};
  const auto sig = sylow::tuple_signature(2, 2, a);
  eq::EqualityType same{2, 2, {0, 1, 0, 1}};
  EXPECT_EQ(sylow::count_per_equality_type(2, 2, 3, same, sig, sig, a), 1u);

  const std::vector<std::uint32_t> single = {0};
  eq::EqualityType distinct{1, 1, {0, 1}};
  EXPECT_EQ(sylow::count_per_equality_type(2, 2, 3, distinct, {}, {}, single), 0u);
  EXPECT_EQ(sylow::count_per_equality_type(2, 2, 5, distinct, {}, {}, single), 3u);
}

TEST(Sylow, PerEqualityTypeMatchesBruteForce) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint32_t q = trial % 2 ? 2 : 3, r = q == 2 ? 3 : 2;
    const std::uint32_t n = static_cast<std::uint32_t>(ipow(q, r));
    const std::uint32_t p = q == 2 ? (trial % 4 == 1 ? 3 : 7) : (trial % 4 == 0 ? 2 : 5);
    const std::size_t k = 1 + rng() % 2, l = 1 + rng() % 2;
    std::vector<std::uint32_t> a(k), b0(l);
    for (auto& x : a) x = static_cast<std::uint32_t>(rng() % n);
    // Bias b0 toward the entries of a so equality types are populated.
    for (auto& x : b0) x = rng() % 2 ? a[rng() % k] : static_cast<std::uint32_t>(rng() % n);
    std::vector<std::uint32_t> ab = a;
    ab.insert(ab.end(), b0.begin(), b0.end());
    const auto types = eq::all_types(k, l);
    const auto tau = trial % 3 ? eq::type_of(k, l, ab) : types[rng() % types.size()];
    const auto sa = sylow::tuple_signature(q, r, a), sb = sylow::tuple_signature(q, r, b0);
    std::uint64_t count = 0;
    for (const auto& b : all_tuples(n, l)) {
      if (sylow::tuple_signature(q, r, b) != sb) continue;
      std::vector<std::uint32_t> v = a;
      v.insert(v.end(), b.begin(), b.end());
      count += tau.matches(v);
    }
    EXPECT_EQ(sylow::count_per_equality_type(q, r, p, tau, sa, sb, a), count % p)
        << "trial " << trial << " tau " << tau.to_string();
  }
}

TEST(Sylow, CompactExamples) {
  const auto id = sylow::compact_matrix(eq::parse("x1=y1"), 2, 2, 3);
  EXPECT_EQ(id.matrix, gfp::Matrix::from_rows(3, {{1}}));
  EXPECT_EQ(id.row_signatures.size(), 1u);
  const auto all = sylow::compact_matrix(eq::parse("x1=x1", 1, 1), 3, 2, 2);
  EXPECT_EQ(all.matrix, gfp::Matrix::from_rows(2, {{1}}));
  const auto none = sylow::compact_matrix(eq::parse("x1!=x1 & y1=y2", 2, 2), 2, 2, 3);
  EXPECT_EQ(none.matrix, gfp::Matrix(3, none.matrix.rows(), none.matrix.cols()));
  EXPECT_GT(none.matrix.rows(), 1u);
}

TEST(Sylow, EquivalenceChain) {
  std::mt19937_64 rng(43);
  std::vector<eq::Formula> fs = {eq::parse("x1=y1"), eq::parse("x1!=y1 & x2=y1"), eq::parse("x1=y1 | x2=y2")};
  for (int i = 0; i < 4; ++i) fs.push_back(eq::random_formula(2, 1 + rng() % 2, 1 + rng() % 4, rng));
  for (const auto& f : fs) {
    for (auto [q, r, p] : {std::tuple{2u, 3u, 3u}, std::tuple{3u, 2u, 2u}}) {
      const auto rep = sylow::check::check_chain(f, q, r, p);
      EXPECT_TRUE(rep.consistent()) << f.to_string() << " q=" << q;
      EXPECT_LE(rep.compact_rows, rep.full_rows);
    }
  }
}
