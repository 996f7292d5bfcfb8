#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "cfiforge/eqformula.hpp"

using namespace cfiforge;
using eq::Node;

namespace {

// Every assignment of k + l variables over [k + l] values.
std::vector<std::vector<std::uint32_t>> assignments(std::size_t vars) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> v(vars, 0);
  while (true) {
    out.push_back(v);
    std::size_t i = 0;
    while (i < vars && ++v[i] == vars) v[i++] = 0;
    if (i == vars) return out;
  }
}

}  // namespace

TEST(EqFormula, ParseLiteral) {
  const auto f = eq::parse("x1=y1");
  EXPECT_EQ(f.k(), 1u);
  EXPECT_EQ(f.l(), 1u);
  EXPECT_EQ(f.root().kind, Node::Kind::Eq);
  EXPECT_EQ(f.root().lhs, (eq::Var{'x', 1}));
  EXPECT_EQ(f.root().rhs, (eq::Var{'y', 1}));
}

TEST(EqFormula, ParseConjunctionWithNegation) {
  const auto f = eq::parse("x1=y1 & !(x1=y2)");
  EXPECT_EQ(f.l(), 2u);
  ASSERT_EQ(f.root().kind, Node::Kind::And);
  EXPECT_EQ(f.root().a->kind, Node::Kind::Eq);
  ASSERT_EQ(f.root().b->kind, Node::Kind::Not);
  EXPECT_EQ(f.root().b->a->kind, Node::Kind::Eq);
}

TEST(EqFormula, AndBindsTighterThanOr) {
  const auto f = eq::parse("x1=y1 | x1=y2 & x2!=y1");
  ASSERT_EQ(f.root().kind, Node::Kind::Or);
  EXPECT_EQ(f.root().b->kind, Node::Kind::And);
  EXPECT_EQ(f.root().b->b->kind, Node::Kind::Neq);
}

TEST(EqFormula, ParseErrors) {
  try {
    eq::parse("x1=");
    FAIL() << "expected a parse error";
  } catch (const eq::ParseError& e) {
    EXPECT_EQ(e.offset(), 3u);
    EXPECT_FALSE(e.expected().empty());
  }
  EXPECT_THROW(eq::parse("x1=y1 &"), eq::ParseError);
  EXPECT_THROW(eq::parse("(x1=y1"), eq::ParseError);
  EXPECT_THROW(eq::parse("z1=y1"), eq::ParseError);
  EXPECT_THROW(eq::parse("x1=y1 x2=y2"), eq::ParseError);
  EXPECT_THROW(eq::parse(""), eq::ParseError);
  EXPECT_THROW(eq::parse("x3=y1", 2, 1), std::invalid_argument);
}

TEST(EqFormula, PrintParseRoundTrip) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + rng() % 3, l = 1 + rng() % 3;
    const auto f = eq::random_formula(k, l, rng() % 8, rng);
    const auto g = eq::parse(f.to_string(), k, l);
    EXPECT_TRUE(eq::same_tree(f.root(), g.root())) << f.to_string();
    EXPECT_EQ(g.to_string(), f.to_string());
  }
}

TEST(EqFormula, MatrixExamples) {
  EXPECT_EQ(eq::build_matrix(eq::parse("x1=y1"), 4, 5), gfp::Matrix::identity(5, 4));
  const auto ones = eq::build_matrix(eq::parse("x1=x1 | y1!=y1", 1, 1), 3, 2);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(ones(a, b), 1u);
  const auto ne = eq::build_matrix(eq::parse("x1!=y1"), 3, 7);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(ne(a, b), a == b ? 0u : 1u);

  Caps tight;
  tight.matrix_entries = 100;
  EXPECT_THROW(eq::build_matrix(eq::parse("x1=y1 & x2=y2"), 4, 3, tight), ResourceCapError);
}

TEST(EqFormula, TupleEncoding) {
  for (std::uint64_t idx = 0; idx < 125; ++idx) EXPECT_EQ(eq::encode_tuple(eq::decode_tuple(idx, 5, 3), 5), idx);
  EXPECT_EQ(eq::decode_tuple(7, 3, 2), (std::vector<std::uint32_t>{2, 1}));
}

TEST(EqFormula, BellNumbers) {
  const std::size_t bell[] = {1, 1, 2, 5, 15, 52, 203};
  for (std::size_t vars = 1; vars <= 6; ++vars) EXPECT_EQ(eq::all_types(1, vars - 1).size(), bell[vars]) << vars;
  EXPECT_EQ(eq::all_types(3, 3).size(), 203u);
}

TEST(EqFormula, DecomposeExamples) {
  EXPECT_TRUE(eq::decompose(eq::parse("x1!=x1", 1, 1)).empty());
  const auto one = eq::decompose(eq::parse("x1=y1"));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].block, (std::vector<std::uint32_t>{0, 0}));
  EXPECT_EQ(eq::decompose(eq::parse("x1=x1", 1, 1)).size(), 2u);
}

TEST(EqFormula, DecomposeIsExactAndDisjoint) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t k = 1 + rng() % 2, l = 1 + rng() % 2;
    const auto f = eq::random_formula(k, l, 1 + rng() % 6, rng);
    const auto types = eq::decompose(f);
    for (const auto& v : assignments(k + l)) {
      std::size_t hits = 0;
      for (const auto& t : types) hits += t.matches(v);
      EXPECT_LE(hits, 1u);
      EXPECT_EQ(hits == 1, f.evaluate(v)) << f.to_string();
    }
    // Union of type matrices equals the formula's matrix.
    const std::size_t n = 3;
    const auto m = eq::build_matrix(f, n, 2);
    gfp::Matrix u(2, m.rows(), m.cols());
    for (const auto& t : types) {
      const auto tm = eq::type_matrix(t, n, 2);
      for (std::size_t a = 0; a < m.rows(); ++a)
        for (std::size_t b = 0; b < m.cols(); ++b)
          if (tm(a, b)) u.set(a, b, 1);
    }
    EXPECT_EQ(u, m) << f.to_string();
  }
}

TEST(EqFormula, MatrixIsSymmetricUnderSym) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t k = 1 + rng() % 2, l = 1 + rng() % 2, n = 4;
    const auto f = eq::random_formula(k, l, 1 + rng() % 5, rng);
    const auto m = eq::build_matrix(f, n, 3);
    std::vector<std::uint32_t> pi(n);
    std::iota(pi.begin(), pi.end(), 0u);
    std::shuffle(pi.begin(), pi.end(), rng);
    for (std::size_t a = 0; a < m.rows(); ++a)
      for (std::size_t b = 0; b < m.cols(); ++b) {
        auto ta = eq::decode_tuple(a, n, k), tb = eq::decode_tuple(b, n, l);
        for (auto& x : ta) x = pi[x];
        for (auto& x : tb) x = pi[x];
        ASSERT_EQ(m(eq::encode_tuple(ta, n), eq::encode_tuple(tb, n)), m(a, b));
      }
  }
}

TEST(EqFormula, TypeOf) {
  const std::uint32_t v[] = {5, 2, 5, 7};
  const auto t = eq::type_of(2, 2, v);
  EXPECT_EQ(t.block, (std::vector<std::uint32_t>{0, 1, 0, 2}));
  EXPECT_EQ(t.class_count(), 3u);
  EXPECT_TRUE(t.matches(std::vector<std::uint32_t>{1, 0, 1, 3}));
  EXPECT_FALSE(t.matches(std::vector<std::uint32_t>{1, 0, 1, 0}));
}
