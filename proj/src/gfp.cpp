#include "cfiforge/gfp.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

namespace cfiforge::gfp {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint32_t require_prime(std::uint64_t p, const char* what) {
  if (p > kMaxModulus || !is_prime(p)) {
    throw std::invalid_argument(std::string(what) + " must be a prime below 2^31, got " +
                                std::to_string(p));
  }
  return static_cast<std::uint32_t>(p);
}

Residue reduce(std::int64_t value, std::uint32_t p) {
  std::int64_t r = value % static_cast<std::int64_t>(p);
  if (r < 0) r += p;
  return static_cast<Residue>(r);
}

Residue pow_mod(std::uint64_t base, std::uint64_t exp, std::uint32_t p) {
  std::uint64_t result = 1 % p;
  base %= p;
  while (exp > 0) {
    if (exp & 1) result = result * base % p;
    base = base * base % p;
    exp >>= 1;
  }
  return static_cast<Residue>(result);
}

Residue inv_mod(Residue a, std::uint32_t p) {
  if (a % p == 0) throw std::domain_error("inv_mod: zero has no inverse");
  return pow_mod(a, p - 2, p);
}

Matrix::Matrix(std::uint32_t p, std::size_t rows, std::size_t cols)
    : p_(require_prime(p)), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Matrix Matrix::from_rows(std::uint32_t p, const std::vector<std::vector<std::int64_t>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(p, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("from_rows: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m.data_[r * cols + c] = reduce(rows[r][c], p);
  }
  return m;
}

Matrix Matrix::identity(std::uint32_t p, std::size_t n) {
  Matrix m(p, n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
  return m;
}

void Matrix::set(std::size_t r, std::size_t c, Residue value) {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("Matrix::set: index out of range");
  if (value >= p_) throw std::invalid_argument("Matrix::set: entry not reduced mod p");
  data_[r * cols_ + c] = value;
}

Vector Matrix::column(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

LinearSystem::LinearSystem(Matrix matrix, Vector rhs)
    : matrix_(std::move(matrix)), rhs_(std::move(rhs)) {
  if (rhs_.size() != matrix_.rows()) {
    throw std::invalid_argument("LinearSystem: rhs length " + std::to_string(rhs_.size()) +
                                " does not match row count " + std::to_string(matrix_.rows()));
  }
  for (auto v : rhs_) {
    if (v >= matrix_.modulus()) throw std::invalid_argument("LinearSystem: rhs entry not reduced");
  }
}

LinearSystem LinearSystem::all_ones(Matrix matrix) {
  Vector ones(matrix.rows(), 1);
  return LinearSystem(std::move(matrix), std::move(ones));
}

Echelon row_reduce(Matrix m) {
  const auto& k = kernels::active();
  const std::uint32_t p = m.modulus();
  std::vector<std::size_t> pivots;
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < m.cols() && pivot_row < m.rows(); ++c) {
    std::size_t found = pivot_row;
    while (found < m.rows() && m(found, c) == 0) ++found;
    if (found == m.rows()) continue;
    if (found != pivot_row) {
      auto a = m.row(found);
      auto b = m.row(pivot_row);
      std::swap_ranges(a.begin(), a.end(), b.begin());
    }
    auto prow = m.row(pivot_row);
    const Residue lead = prow[c];
    if (lead != 1) k.scale(prow.subspan(c), inv_mod(lead, p), p);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == pivot_row) continue;
      const Residue f = m(r, c);
      if (f == 0) continue;
      // Columns left of c are zero in the pivot row.
      k.axpy(m.row(r).subspan(c), std::span<const Residue>(prow).subspan(c), p - f, p);
    }
    pivots.push_back(c);
    ++pivot_row;
  }
  return Echelon{std::move(m), std::move(pivots)};
}

std::size_t rank(const Matrix& m) { return row_reduce(m).pivot_cols.size(); }

namespace {

Matrix augment(const LinearSystem& sys) {
  const Matrix& a = sys.matrix();
  Matrix aug(a.modulus(), a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto dst = aug.row(r);
    auto src = a.row(r);
    std::copy(src.begin(), src.end(), dst.begin());
    dst[a.cols()] = sys.rhs()[r];
  }
  return aug;
}

}  // namespace

std::optional<Vector> solve(const LinearSystem& sys) {
  const std::size_t n = sys.matrix().cols();
  Echelon e = row_reduce(augment(sys));
  if (!e.pivot_cols.empty() && e.pivot_cols.back() == n) return std::nullopt;
  Vector x(n, 0);
  for (std::size_t i = 0; i < e.pivot_cols.size(); ++i) x[e.pivot_cols[i]] = e.reduced(i, n);
  if (!satisfies(sys, x)) throw std::logic_error("solve: round-trip check failed");
  return x;
}

bool is_solvable(const LinearSystem& sys) {
  const std::size_t n = sys.matrix().cols();
  Echelon e = row_reduce(augment(sys));
  return e.pivot_cols.empty() || e.pivot_cols.back() != n;
}

std::vector<Vector> kernel_basis(const Matrix& m) {
  const std::uint32_t p = m.modulus();
  Echelon e = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivot_cols) is_pivot[c] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(m.cols(), 0);
    v[f] = 1;
    for (std::size_t i = 0; i < e.pivot_cols.size(); ++i) {
      const Residue a = e.reduced(i, f);
      v[e.pivot_cols[i]] = a == 0 ? 0 : p - a;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

Matrix apply_row_permutation(const Matrix& m, std::span<const std::uint32_t> perm) {
  require_bijection(perm, m.rows(), "apply_row_permutation");
  Matrix out(m.modulus(), m.rows(), m.cols());
  for (std::size_t a = 0; a < m.rows(); ++a) {
    auto src = m.row(perm[a]);
    std::copy(src.begin(), src.end(), out.row(a).begin());
  }
  return out;
}

Matrix apply_col_permutation(const Matrix& m, std::span<const std::uint32_t> perm) {
  require_bijection(perm, m.cols(), "apply_col_permutation");
  Matrix out(m.modulus(), m.rows(), m.cols());
  for (std::size_t a = 0; a < m.rows(); ++a) {
    auto dst = out.row(a);
    auto src = m.row(a);
    for (std::size_t b = 0; b < m.cols(); ++b) dst[b] = src[perm[b]];
  }
  return out;
}

Vector multiply(const Matrix& m, std::span<const Residue> x) {
  if (x.size() != m.cols()) throw std::invalid_argument("multiply: vector length mismatch");
  const auto& k = kernels::active();
  Vector y(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) y[r] = k.dot(m.row(r), x, m.modulus());
  return y;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.modulus() != b.modulus() || a.cols() != b.rows()) {
    throw std::invalid_argument("multiply: shape or modulus mismatch");
  }
  const auto& k = kernels::active();
  Matrix out(a.modulus(), a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto dst = out.row(r);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const Residue f = a(r, i);
      if (f != 0) k.axpy(dst, b.row(i), f, a.modulus());
    }
  }
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.modulus(), m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) t.row(c)[r] = m(r, c);
  }
  return t;
}

Matrix hconcat(const Matrix& a, const Matrix& b) {
  if (a.modulus() != b.modulus() || a.rows() != b.rows()) {
    throw std::invalid_argument("hconcat: shape or modulus mismatch");
  }
  Matrix out(a.modulus(), a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto dst = out.row(r);
    std::copy(a.row(r).begin(), a.row(r).end(), dst.begin());
    std::copy(b.row(r).begin(), b.row(r).end(), dst.begin() + static_cast<std::ptrdiff_t>(a.cols()));
  }
  return out;
}

Matrix from_columns(std::uint32_t p, std::size_t rows, const std::vector<Vector>& columns) {
  Matrix out(p, rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw std::invalid_argument("from_columns: column length mismatch");
    for (std::size_t r = 0; r < rows; ++r) out.set(r, c, columns[c][r]);
  }
  return out;
}

bool satisfies(const LinearSystem& sys, std::span<const Residue> x) {
  if (x.size() != sys.matrix().cols()) return false;
  for (auto v : x) {
    if (v >= sys.modulus()) return false;
  }
  return multiply(sys.matrix(), x) == sys.rhs();
}

}  // namespace cfiforge::gfp
