#pragma once

// Dense linear algebra for desk-scale problems (N up to ~12, M up to ~24).
// Real and complex scalars are handled natively; rank decisions are relative
// to the largest pivot.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "framephase/scalar.hpp"

namespace framephase {

template <FieldScalar T>
using Vector = std::vector<T>;

/// Numerical stand-ins for "nonzero" and "equal".
struct Tolerance {
  double rank_eps = 1e-10;      // singular-value cutoff relative to the largest pivot
  double residual_eps = 1e-8;   // membership / equality threshold

  /// Throws std::invalid_argument unless 0 < rank_eps < 1 and residual_eps > 0.
  void validate() const;
};

/// Row-major dense matrix over one field.
template <FieldScalar T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> row_major);
  Matrix(std::initializer_list<std::initializer_list<T>> rows);

  static Matrix identity(std::size_t n);
  /// Matrix whose j-th column is columns[j].
  static Matrix from_columns(std::span<const Vector<T>> columns, std::size_t rows);
  static Matrix diagonal(std::span<const T> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const T> data() const { return data_; }

  Vector<T> column(std::size_t c) const;
  Vector<T> row(std::size_t r) const;
  void set_column(std::size_t c, std::span<const T> values);

  /// Conjugate transpose.
  Matrix adjoint() const;
  Matrix transpose() const;
  /// Sub-matrix made of the listed columns, in order.
  Matrix select_columns(std::span<const std::size_t> idx) const;
  Matrix select_rows(std::span<const std::size_t> idx) const;
  /// First `count` columns.
  Matrix leading_columns(std::size_t count) const;

  double frobenius_norm() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(const T& s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <FieldScalar T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b);
template <FieldScalar T>
Vector<T> operator*(const Matrix<T>& a, std::span<const T> x);
template <FieldScalar T>
Vector<T> operator*(const Matrix<T>& a, const Vector<T>& x) {
  return a * std::span<const T>(x);
}
template <FieldScalar T>
Matrix<T> operator+(Matrix<T> a, const Matrix<T>& b) { return a += b; }
template <FieldScalar T>
Matrix<T> operator-(Matrix<T> a, const Matrix<T>& b) { return a -= b; }
template <FieldScalar T>
Matrix<T> operator*(Matrix<T> a, const T& s) { return a *= s; }

/// <x, y> = sum_k x_k conj(y_k): linear in the first slot, conjugate-linear in the second.
template <FieldScalar T>
T inner(std::span<const T> x, std::span<const T> y);
template <FieldScalar T>
double norm(std::span<const T> x);

// Vector arithmetic used throughout; all require equal lengths.
template <FieldScalar T>
Vector<T> add(std::span<const T> x, std::span<const T> y);
template <FieldScalar T>
Vector<T> subtract(std::span<const T> x, std::span<const T> y);
template <FieldScalar T>
Vector<T> scale(std::span<const T> x, const T& s);

/// Promote a real matrix to the complex field.
Matrix<Complex> to_complex(const Matrix<double>& a);

template <FieldScalar T>
struct QRResult {
  Matrix<T> q;                    // rows x rows, unitary
  Matrix<T> r;                    // rows x cols, upper triangular
  std::vector<std::size_t> perm;  // column j of q*r is column perm[j] of A
  std::size_t rank = 0;
};

/// Householder QR with column pivoting. rank counts |R_kk| > rank_eps * |R_00|.
/// The zero matrix has rank 0.
template <FieldScalar T>
QRResult<T> qr_column_pivot(const Matrix<T>& a, const Tolerance& tol = {});

/// Rank decision of qr_column_pivot without forming Q.
template <FieldScalar T>
std::size_t numerical_rank(const Matrix<T>& a, const Tolerance& tol = {});

/// Orthonormal basis (as columns) of {x : A x = 0}; width cols - rank.
template <FieldScalar T>
Matrix<T> null_space(const Matrix<T>& a, const Tolerance& tol = {});

/// Orthonormal basis (as columns) of the column space of A; width rank.
template <FieldScalar T>
Matrix<T> range_basis(const Matrix<T>& a, const Tolerance& tol = {});

template <FieldScalar T>
struct LeastSquaresResult {
  Vector<T> x;
  double residual = 0.0;     // ||A x - b||
  bool degenerate = false;   // A was rank deficient; x is the minimum-norm minimizer
};

template <FieldScalar T>
LeastSquaresResult<T> least_squares(const Matrix<T>& a, std::span<const T> b,
                                    const Tolerance& tol = {});

/// Inverse of a square matrix of full numerical rank; throws std::invalid_argument otherwise.
template <FieldScalar T>
Matrix<T> inverse(const Matrix<T>& a, const Tolerance& tol = {});

template <FieldScalar T>
struct EigenResult {
  std::vector<double> values;  // descending
  Matrix<T> vectors;           // column k pairs with values[k]
};

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Throws std::invalid_argument if A is not square or not Hermitian.
template <FieldScalar T>
EigenResult<T> sym_eig(const Matrix<T>& a, const Tolerance& tol = {});

/// f(A) = V diag(f(lambda)) V* for Hermitian A.
template <FieldScalar T, class Fn>
Matrix<T> hermitian_function(const EigenResult<T>& eig, Fn&& f) {
  const std::size_t n = eig.values.size();
  Matrix<T> out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = f(eig.values[k]);
    for (std::size_t i = 0; i < n; ++i) {
      const T vik = eig.vectors(i, k) * w;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * conj(eig.vectors(j, k));
    }
  }
  return out;
}

}  // namespace framephase
