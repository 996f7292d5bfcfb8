#pragma once

// Exact linear algebra over prime fields F_p.
//
// Matrices are dense and row-major with one residue per 32-bit word. Row
// reduction uses deterministic pivoting: columns left to right, and within a
// column the first row (top-down) below the current pivot row holding a
// nonzero entry. Identical inputs therefore produce identical echelon forms.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cfiforge/kernels/modular.hpp"
#include "cfiforge/perm.hpp"

namespace cfiforge::gfp {

using Residue = kernels::Residue;
using Vector = std::vector<Residue>;

/// Moduli are limited to primes below 2^31.
inline constexpr std::uint64_t kMaxModulus = (std::uint64_t{1} << 31) - 1;

bool is_prime(std::uint64_t n);

/// Returns p as a modulus or throws std::invalid_argument.
std::uint32_t require_prime(std::uint64_t p, const char* what = "modulus");

Residue reduce(std::int64_t value, std::uint32_t p);
Residue pow_mod(std::uint64_t base, std::uint64_t exp, std::uint32_t p);
/// Inverse of a nonzero residue.
Residue inv_mod(Residue a, std::uint32_t p);

class Matrix {
 public:
  /// Zero matrix. Throws std::invalid_argument if p is not a supported prime.
  Matrix(std::uint32_t p, std::size_t rows, std::size_t cols);

  /// Entries are reduced mod p (negative values allowed).
  static Matrix from_rows(std::uint32_t p, const std::vector<std::vector<std::int64_t>>& rows);
  static Matrix identity(std::uint32_t p, std::size_t n);

  std::uint32_t modulus() const { return p_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Residue operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  /// Throws std::out_of_range for bad indices and std::invalid_argument when
  /// value is not in [0, p).
  void set(std::size_t r, std::size_t c, Residue value);

  std::span<const Residue> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<Residue> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  Vector column(std::size_t c) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::uint32_t p_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Residue> data_;
};

/// An affine system matrix * x = rhs.
class LinearSystem {
 public:
  /// Throws std::invalid_argument if rhs has the wrong length or an
  /// unreduced entry.
  LinearSystem(Matrix matrix, Vector rhs);

  /// matrix * x = 1 (all-ones right-hand side).
  static LinearSystem all_ones(Matrix matrix);

  const Matrix& matrix() const { return matrix_; }
  const Vector& rhs() const { return rhs_; }
  std::uint32_t modulus() const { return matrix_.modulus(); }

 private:
  Matrix matrix_;
  Vector rhs_;
};

/// Reduced row echelon form together with the pivot columns, in order.
struct Echelon {
  Matrix reduced;
  std::vector<std::size_t> pivot_cols;
};

Echelon row_reduce(Matrix m);

std::size_t rank(const Matrix& m);

/// Some solution (free variables set to zero), or nullopt.
std::optional<Vector> solve(const LinearSystem& sys);

bool is_solvable(const LinearSystem& sys);

/// Basis of the right null space, one vector per free column in increasing
/// column order.
std::vector<Vector> kernel_basis(const Matrix& m);

/// (Pi * M)(a, b) = M(perm[a], b).
Matrix apply_row_permutation(const Matrix& m, std::span<const std::uint32_t> perm);
/// (M * Pi^-1)(a, b) = M(a, perm[b]).
Matrix apply_col_permutation(const Matrix& m, std::span<const std::uint32_t> perm);

Vector multiply(const Matrix& m, std::span<const Residue> x);
Matrix multiply(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);

/// [a | b]; both must have the same modulus and row count.
Matrix hconcat(const Matrix& a, const Matrix& b);

/// Matrix whose columns are the given vectors (each of length rows).
Matrix from_columns(std::uint32_t p, std::size_t rows, const std::vector<Vector>& columns);

bool satisfies(const LinearSystem& sys, std::span<const Residue> x);

}  // namespace cfiforge::gfp
