#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "cfiforge/gfp.hpp"

using namespace cfiforge;
using gfp::Matrix;
using gfp::Vector;

namespace {

Matrix random_matrix(std::mt19937_64& rng, std::uint32_t p, std::size_t r, std::size_t c) {
  Matrix m(p, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, static_cast<gfp::Residue>(rng() % p));
  return m;
}

// Largest k with a nonzero k x k minor. Determinants of all minors come from
// Laplace expansion over column subsets, with no elimination involved.
std::size_t minor_rank(const Matrix& m) {
  const std::size_t r = m.rows(), c = m.cols();
  const std::uint32_t p = m.modulus();
  std::size_t best = 0;
  for (std::uint32_t rows = 1; rows < (1u << r); ++rows) {
    std::vector<std::size_t> rr;
    for (std::size_t i = 0; i < r; ++i)
      if (rows >> i & 1) rr.push_back(i);
    const std::size_t k = rr.size();
    if (k > c || k <= best) continue;
    // det[S] for |S| = t: determinant of rows rr[0..t) and columns S.
    std::vector<std::int64_t> det(1u << c, 0);
    det[0] = 1;
    bool nonzero = false;
    for (std::uint32_t s = 1; s < (1u << c); ++s) {
      const std::size_t t = __builtin_popcount(s);
      if (t > k) continue;
      std::int64_t acc = 0;
      std::size_t pos = 0;
      for (std::size_t col = 0; col < c; ++col) {
        if (!(s >> col & 1)) continue;
        const std::int64_t sign = ((t - 1 + pos) % 2 == 0) ? 1 : -1;
        acc += sign * static_cast<std::int64_t>(m(rr[t - 1], col)) * det[s & ~(1u << col)];
        acc %= static_cast<std::int64_t>(p);
        ++pos;
      }
      det[s] = acc;
      if (t == k && acc % static_cast<std::int64_t>(p) != 0) nonzero = true;
    }
    if (nonzero) best = k;
  }
  return best;
}

bool exhaustive_solvable(const gfp::LinearSystem& sys) {
  const std::uint32_t p = sys.modulus();
  const std::size_t n = sys.matrix().cols();
  Vector x(n, 0);
  while (true) {
    if (gfp::multiply(sys.matrix(), x) == sys.rhs()) return true;
    std::size_t i = 0;
    while (i < n && ++x[i] == p) x[i++] = 0;
    if (i == n) return false;
  }
}

}  // namespace

TEST(Gfp, RankExamples) {
  EXPECT_EQ(gfp::rank(Matrix::identity(3, 4)), 4u);
  EXPECT_EQ(gfp::rank(Matrix::from_rows(2, {{1, 1}, {1, 1}})), 1u);
}

TEST(Gfp, RankMatchesMinorOracle) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix m = random_matrix(rng, 5, 8, 8);
    // Zero out some rows and duplicate others so ranks spread below 8.
    for (std::size_t i = 0; i < trial % 5; ++i) {
      for (std::size_t j = 0; j < 8; ++j) m.set(7 - i, j, m(i, j));
    }
    EXPECT_EQ(gfp::rank(m), minor_rank(m)) << "trial " << trial;
  }
}

TEST(Gfp, SolveExamples) {
  const auto x = gfp::solve({Matrix::from_rows(3, {{1, 1}, {1, 2}}), {1, 1}});
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(*x, (Vector{1, 0}));
  // The solution is unique: no other vector of F_3^2 works.
  int count = 0;
  for (gfp::Residue a = 0; a < 3; ++a)
    for (gfp::Residue b = 0; b < 3; ++b) count += gfp::satisfies({Matrix::from_rows(3, {{1, 1}, {1, 2}}), {1, 1}}, Vector{a, b});
  EXPECT_EQ(count, 1);

  EXPECT_FALSE(gfp::solve({Matrix(2, 2, 2), {1, 0}}).has_value());
  const Vector b{4, 0, 3};
  EXPECT_EQ(*gfp::solve({Matrix::identity(5, 3), b}), b);
}

TEST(Gfp, SolvabilityExamples) {
  EXPECT_TRUE(gfp::is_solvable({Matrix::identity(7, 3), {1, 2, 3}}));
  EXPECT_TRUE(gfp::is_solvable(gfp::LinearSystem::all_ones(Matrix::from_rows(2, {{1, 1, 1}}))));
  EXPECT_FALSE(gfp::is_solvable({Matrix::from_rows(7, {{0}}), {3}}));
}

TEST(Gfp, SolvabilityEqualsRankCriterionExhaustively) {
  std::mt19937_64 rng(5);
  for (std::uint32_t p : {2u, 3u}) {
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t r = 1 + rng() % 6, c = 1 + rng() % (p == 2 ? 6 : 5);
      const Matrix m = random_matrix(rng, p, r, c);
      Vector rhs(r);
      for (auto& v : rhs) v = static_cast<gfp::Residue>(rng() % p);
      const gfp::LinearSystem sys(m, rhs);
      const bool solvable = gfp::is_solvable(sys);
      const auto aug = gfp::hconcat(m, gfp::from_columns(p, r, {rhs}));
      EXPECT_EQ(solvable, gfp::rank(m) == gfp::rank(aug));
      EXPECT_EQ(solvable, exhaustive_solvable(sys));
      const auto x = gfp::solve(sys);
      EXPECT_EQ(x.has_value(), solvable);
      if (x) EXPECT_TRUE(gfp::satisfies(sys, *x));
    }
  }
}

TEST(Gfp, KernelBasis) {
  EXPECT_TRUE(gfp::kernel_basis(Matrix::identity(2, 3)).empty());
  EXPECT_EQ(gfp::kernel_basis(Matrix(3, 1, 3)).size(), 3u);

  // Vertex-edge incidence matrix of K_5 over F_2.
  Matrix inc(2, 5, 10);
  std::size_t e = 0;
  for (std::size_t u = 0; u < 5; ++u)
    for (std::size_t v = u + 1; v < 5; ++v, ++e) {
      inc.set(u, e, 1);
      inc.set(v, e, 1);
    }
  EXPECT_EQ(gfp::rank(inc), 4u);
  EXPECT_EQ(gfp::kernel_basis(inc).size(), 6u);

  std::mt19937_64 rng(9);
  for (std::uint32_t p : {2u, 3u, 5u, 65521u}) {
    for (int trial = 0; trial < 40; ++trial) {
      const Matrix m = random_matrix(rng, p, 1 + rng() % 8, 1 + rng() % 10);
      const auto basis = gfp::kernel_basis(m);
      EXPECT_EQ(basis.size(), m.cols() - gfp::rank(m));
      for (const auto& v : basis) EXPECT_EQ(gfp::multiply(m, v), Vector(m.rows(), 0));
      if (!basis.empty()) EXPECT_EQ(gfp::rank(gfp::from_columns(p, m.cols(), basis)), basis.size());
    }
  }
}

TEST(Gfp, Permutations) {
  std::mt19937_64 rng(2);
  const Matrix id = Matrix::identity(3, 3);
  EXPECT_EQ(gfp::apply_row_permutation(id, identity_permutation(3)), id);
  const Matrix swapped = gfp::apply_row_permutation(id, Permutation{1, 0, 2});
  EXPECT_EQ(swapped, Matrix::from_rows(3, {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}));
  EXPECT_THROW(gfp::apply_row_permutation(id, Permutation{0, 0, 1}), std::invalid_argument);
  EXPECT_THROW(gfp::apply_col_permutation(id, Permutation{0, 1}), std::invalid_argument);

  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = random_matrix(rng, 5, 6, 7);
    Permutation rp(6), cp(7);
    std::iota(rp.begin(), rp.end(), 0u);
    std::iota(cp.begin(), cp.end(), 0u);
    std::shuffle(rp.begin(), rp.end(), rng);
    std::shuffle(cp.begin(), cp.end(), rng);
    const Matrix pm = gfp::apply_col_permutation(gfp::apply_row_permutation(m, rp), cp);
    for (std::size_t a = 0; a < 6; ++a)
      for (std::size_t b = 0; b < 7; ++b) EXPECT_EQ(pm(a, b), m(rp[a], cp[b]));
    EXPECT_EQ(gfp::apply_row_permutation(gfp::apply_row_permutation(m, rp), inverse(rp)), m);
    EXPECT_EQ(gfp::apply_col_permutation(gfp::apply_col_permutation(m, cp), inverse(cp)), m);
    EXPECT_EQ(gfp::rank(pm), gfp::rank(m));
  }
}

TEST(Gfp, Validation) {
  EXPECT_THROW(Matrix(4, 2, 2), std::invalid_argument);
  EXPECT_THROW(Matrix(1, 2, 2), std::invalid_argument);
  Matrix m(5, 2, 2);
  EXPECT_THROW(m.set(0, 0, 5), std::invalid_argument);
  EXPECT_THROW(m.set(2, 0, 1), std::out_of_range);
  EXPECT_THROW(gfp::LinearSystem(m, {1}), std::invalid_argument);
  EXPECT_THROW(gfp::LinearSystem(m, {1, 7}), std::invalid_argument);
  EXPECT_EQ(Matrix::from_rows(5, {{-1, 6}}), Matrix::from_rows(5, {{4, 1}}));
}

TEST(Gfp, Deterministic) {
  std::mt19937_64 rng(77);
  const Matrix m = random_matrix(rng, 3, 9, 9);
  const auto a = gfp::row_reduce(m), b = gfp::row_reduce(m);
  EXPECT_EQ(a.reduced, b.reduced);
  EXPECT_EQ(a.pivot_cols, b.pivot_cols);
}
