#include "framephase/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace framephase {

void Tolerance::validate() const {
  if (!(rank_eps > 0.0 && rank_eps < 1.0))
    throw std::invalid_argument("rank_eps must lie in (0, 1), got " + std::to_string(rank_eps));
  if (!(residual_eps > 0.0))
    throw std::invalid_argument("residual_eps must be positive, got " +
                                std::to_string(residual_eps));
}

// ---------------------------------------------------------------------------
// Matrix

template <FieldScalar T>
Matrix<T>::Matrix(std::size_t rows, std::size_t cols, std::vector<T> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows * cols)
    throw std::invalid_argument("matrix data size does not match its shape");
}

template <FieldScalar T>
Matrix<T>::Matrix(std::initializer_list<std::initializer_list<T>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

template <FieldScalar T>
Matrix<T> Matrix<T>::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1.0);
  return m;
}

template <FieldScalar T>
Matrix<T> Matrix<T>::from_columns(std::span<const Vector<T>> columns, std::size_t rows) {
  Matrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) throw std::invalid_argument("column length mismatch");
    m.set_column(j, columns[j]);
  }
  return m;
}

template <FieldScalar T>
Matrix<T> Matrix<T>::diagonal(std::span<const T> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

template <FieldScalar T>
Vector<T> Matrix<T>::column(std::size_t c) const {
  Vector<T> v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
  return v;
}

template <FieldScalar T>
Vector<T> Matrix<T>::row(std::size_t r) const {
  return Vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

template <FieldScalar T>
void Matrix<T>::set_column(std::size_t c, std::span<const T> values) {
  if (values.size() != rows_) throw std::invalid_argument("column length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = values[i];
}

template <FieldScalar T>
Matrix<T> Matrix<T>::adjoint() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = conj((*this)(i, j));
  return out;
}

template <FieldScalar T>
Matrix<T> Matrix<T>::transpose() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

template <FieldScalar T>
Matrix<T> Matrix<T>::select_columns(std::span<const std::size_t> idx) const {
  Matrix out(rows_, idx.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = (*this)(i, idx[j]);
  return out;
}

template <FieldScalar T>
Matrix<T> Matrix<T>::select_rows(std::span<const std::size_t> idx) const {
  Matrix out(idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(idx[i], j);
  return out;
}

template <FieldScalar T>
Matrix<T> Matrix<T>::leading_columns(std::size_t count) const {
  Matrix out(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, j);
  return out;
}

template <FieldScalar T>
double Matrix<T>::frobenius_norm() const {
  double s = 0.0;
  for (const T& v : data_) s += abs2(v);
  return std::sqrt(s);
}

template <FieldScalar T>
Matrix<T>& Matrix<T>::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch in +");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

template <FieldScalar T>
Matrix<T>& Matrix<T>::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch in -");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

template <FieldScalar T>
Matrix<T>& Matrix<T>::operator*=(const T& s) {
  for (T& v : data_) v *= s;
  return *this;
}

template <FieldScalar T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("shape mismatch in matrix product");
  Matrix<T> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

template <FieldScalar T>
Vector<T> operator*(const Matrix<T>& a, std::span<const T> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("shape mismatch in matrix-vector product");
  Vector<T> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    T s{};
    for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * x[k];
    out[i] = s;
  }
  return out;
}

template <FieldScalar T>
T inner(std::span<const T> x, std::span<const T> y) {
  if (x.size() != y.size()) throw std::invalid_argument("inner product length mismatch");
  T s{};
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * conj(y[k]);
  return s;
}

template <FieldScalar T>
double norm(std::span<const T> x) {
  double s = 0.0;
  for (const T& v : x) s += abs2(v);
  return std::sqrt(s);
}

template <FieldScalar T>
Vector<T> add(std::span<const T> x, std::span<const T> y) {
  if (x.size() != y.size()) throw std::invalid_argument("vector length mismatch");
  Vector<T> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k] + y[k];
  return out;
}

template <FieldScalar T>
Vector<T> subtract(std::span<const T> x, std::span<const T> y) {
  if (x.size() != y.size()) throw std::invalid_argument("vector length mismatch");
  Vector<T> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k] - y[k];
  return out;
}

template <FieldScalar T>
Vector<T> scale(std::span<const T> x, const T& s) {
  Vector<T> out(x.begin(), x.end());
  for (T& v : out) v *= s;
  return out;
}

Matrix<Complex> to_complex(const Matrix<double>& a) {
  Matrix<Complex> out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  return out;
}

// ---------------------------------------------------------------------------
// Householder QR with column pivoting

namespace {

// Reflector H = I - 2 v v* with H x = alpha e_0. Returns false when x == 0.
template <FieldScalar T>
bool make_householder(std::span<const T> x, Vector<T>& v, T& alpha) {
  const double nx = norm(x);
  v.assign(x.begin(), x.end());
  if (nx == 0.0) {
    alpha = T{};
    return false;
  }
  alpha = -phase_of(x[0]) * nx;
  v[0] -= alpha;
  const double nv = norm<T>(v);
  if (nv == 0.0) return false;
  for (T& e : v) e /= nv;
  return true;
}

// Applies H = I - 2 v v* from the left to rows [k, k+len) and columns [c0, cols).
template <FieldScalar T>
void reflect_rows(Matrix<T>& a, std::size_t k, std::span<const T> v, std::size_t c0) {
  for (std::size_t j = c0; j < a.cols(); ++j) {
    T s{};
    for (std::size_t i = 0; i < v.size(); ++i) s += conj(v[i]) * a(k + i, j);
    s *= 2.0;
    for (std::size_t i = 0; i < v.size(); ++i) a(k + i, j) -= v[i] * s;
  }
}

// Applies H from the right to columns [k, k+len) of every row.
template <FieldScalar T>
void reflect_cols(Matrix<T>& q, std::size_t k, std::span<const T> v) {
  for (std::size_t i = 0; i < q.rows(); ++i) {
    T s{};
    for (std::size_t j = 0; j < v.size(); ++j) s += q(i, k + j) * v[j];
    s *= 2.0;
    for (std::size_t j = 0; j < v.size(); ++j) q(i, k + j) -= s * conj(v[j]);
  }
}

template <FieldScalar T>
QRResult<T> householder_qr(const Matrix<T>& a, const Tolerance& tol, bool want_q) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  QRResult<T> out;
  out.r = a;
  out.perm.resize(n);
  std::iota(out.perm.begin(), out.perm.end(), std::size_t{0});
  if (want_q) out.q = Matrix<T>::identity(m);

  Matrix<T>& r = out.r;
  const std::size_t steps = std::min(m, n);
  Vector<T> x;
  Vector<T> v;
  for (std::size_t k = 0; k < steps; ++k) {
    // Pivot on the largest trailing column norm.
    std::size_t best = k;
    double best_norm = -1.0;
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += abs2(r(i, j));
      if (s > best_norm) {
        best_norm = s;
        best = j;
      }
    }
    if (best != k) {
      for (std::size_t i = 0; i < m; ++i) std::swap(r(i, k), r(i, best));
      std::swap(out.perm[k], out.perm[best]);
    }
    x.resize(m - k);
    for (std::size_t i = k; i < m; ++i) x[i - k] = r(i, k);
    T alpha{};
    if (!make_householder<T>(x, v, alpha)) continue;
    reflect_rows<T>(r, k, v, k);
    r(k, k) = alpha;
    for (std::size_t i = k + 1; i < m; ++i) r(i, k) = T{};
    if (want_q) reflect_cols<T>(out.q, k, v);
  }

  const double lead = steps > 0 ? std::abs(r(0, 0)) : 0.0;
  std::size_t rank = 0;
  if (lead > 0.0) {
    for (std::size_t k = 0; k < steps; ++k)
      if (std::abs(r(k, k)) > tol.rank_eps * lead) ++rank;
  }
  out.rank = rank;
  return out;
}

}  // namespace

template <FieldScalar T>
QRResult<T> qr_column_pivot(const Matrix<T>& a, const Tolerance& tol) {
  if (a.rows() == 0 || a.cols() == 0) throw std::invalid_argument("qr_column_pivot: empty matrix");
  return householder_qr(a, tol, true);
}

template <FieldScalar T>
std::size_t numerical_rank(const Matrix<T>& a, const Tolerance& tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  return householder_qr(a, tol, false).rank;
}

template <FieldScalar T>
Matrix<T> null_space(const Matrix<T>& a, const Tolerance& tol) {
  const std::size_t n = a.cols();
  if (n == 0) throw std::invalid_argument("null_space: matrix has no columns");
  if (a.rows() == 0) return Matrix<T>::identity(n);
  // null(A) is the orthogonal complement of range(A*).
  const auto qr = householder_qr(a.adjoint(), tol, true);
  Matrix<T> basis(n, n - qr.rank);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = qr.rank; j < n; ++j) basis(i, j - qr.rank) = qr.q(i, j);
  return basis;
}

template <FieldScalar T>
Matrix<T> range_basis(const Matrix<T>& a, const Tolerance& tol) {
  if (a.rows() == 0 || a.cols() == 0) return Matrix<T>(a.rows(), 0);
  const auto qr = householder_qr(a, tol, true);
  return qr.q.leading_columns(qr.rank);
}

template <FieldScalar T>
LeastSquaresResult<T> least_squares(const Matrix<T>& a, std::span<const T> b,
                                    const Tolerance& tol) {
  if (a.rows() != b.size()) throw std::invalid_argument("least_squares: rows(A) != length(b)");
  const std::size_t n = a.cols();
  LeastSquaresResult<T> out;
  out.x.assign(n, T{});
  if (a.rows() == 0 || n == 0) {
    out.residual = norm(b);
    out.degenerate = n > 0;
    return out;
  }
  const auto qr = householder_qr(a, tol, true);
  const std::size_t r = qr.rank;
  const Vector<T> c = qr.q.adjoint() * b;

  Vector<T> y(n, T{});
  if (r == n) {
    for (std::size_t i = n; i-- > 0;) {
      T s = c[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= qr.r(i, j) * y[j];
      y[i] = s / qr.r(i, i);
    }
  } else if (r > 0) {
    // Complete orthogonal decomposition: [R11 R12] = T* Z1*, minimum-norm y = Z1 w.
    out.degenerate = true;
    Matrix<T> top(r, n);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = i; j < n; ++j) top(i, j) = qr.r(i, j);
    const auto cod = householder_qr(top.adjoint(), tol, true);
    // top* P2 = Z [Tri; 0]  =>  top = P2 Tri* Z1* (P2 permutes the r rows of top).
    Vector<T> rhs(r);
    for (std::size_t i = 0; i < r; ++i) rhs[i] = c[cod.perm[i]];
    // Tri* w = rhs, Tri* lower triangular.
    Vector<T> w(r, T{});
    for (std::size_t i = 0; i < r; ++i) {
      T s = rhs[i];
      for (std::size_t j = 0; j < i; ++j) s -= conj(cod.r(j, i)) * w[j];
      w[i] = s / conj(cod.r(i, i));
    }
    for (std::size_t i = 0; i < n; ++i) {
      T s{};
      for (std::size_t j = 0; j < r; ++j) s += cod.q(i, j) * w[j];
      y[i] = s;
    }
  } else {
    out.degenerate = true;
  }
  for (std::size_t j = 0; j < n; ++j) out.x[qr.perm[j]] = y[j];
  const Vector<T> ax = a * out.x;
  out.residual = norm<T>(subtract<T>(ax, b));
  return out;
}

template <FieldScalar T>
Matrix<T> inverse(const Matrix<T>& a, const Tolerance& tol) {
  const std::size_t n = a.rows();
  if (n != a.cols() || n == 0) throw std::invalid_argument("inverse: matrix is not square");
  if (numerical_rank(a, tol) != n) throw std::invalid_argument("inverse: matrix is singular");
  Matrix<T> out(n, n);
  Vector<T> e(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), T{});
    e[j] = T(1.0);
    out.set_column(j, least_squares<T>(a, e, tol).x);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi for Hermitian matrices

template <FieldScalar T>
EigenResult<T> sym_eig(const Matrix<T>& a, const Tolerance& tol) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("sym_eig: matrix is not square");
  const double anorm = a.frobenius_norm();
  if ((a - a.adjoint()).frobenius_norm() > tol.residual_eps * std::max(anorm, 1e-300))
    throw std::invalid_argument("sym_eig: matrix is not Hermitian");

  Matrix<T> w = a;
  for (std::size_t i = 0; i < n; ++i) w(i, i) = T(real_part(w(i, i)));
  Matrix<T> v = Matrix<T>::identity(n);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += abs2(w(i, j));
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  const double target = 1e-15 * std::max(anorm, 1e-300);
  for (int sweep = 0; sweep < kMaxSweeps && off_norm() > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const T apq = w(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-300) continue;
        const double app = real_part(w(p, p));
        const double aqq = real_part(w(q, q));
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // J = diag(1, conj(e)) * [[c, s], [-s, c]] on (p, q), e = apq / |apq|.
        const T ec = conj(apq / mag);
        const T jpp = T(c), jpq = T(s), jqp = -ec * s, jqq = ec * c;
        for (std::size_t k = 0; k < n; ++k) {  // W <- W J
          const T wkp = w(k, p), wkq = w(k, q);
          w(k, p) = wkp * jpp + wkq * jqp;
          w(k, q) = wkp * jpq + wkq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {  // W <- J* W
          const T wpk = w(p, k), wqk = w(q, k);
          w(p, k) = conj(jpp) * wpk + conj(jqp) * wqk;
          w(q, k) = conj(jpq) * wpk + conj(jqq) * wqk;
        }
        w(p, q) = T{};
        w(q, p) = T{};
        w(p, p) = T(real_part(w(p, p)));
        w(q, q) = T(real_part(w(q, q)));
        for (std::size_t k = 0; k < n; ++k) {  // V <- V J
          const T vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return real_part(w(i, i)) > real_part(w(j, j));
  });
  EigenResult<T> out;
  out.values.resize(n);
  out.vectors = Matrix<T>(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = real_part(w(order[k], order[k]));
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------

#define FRAMEPHASE_INSTANTIATE(T)                                                         \
  template class Matrix<T>;                                                              \
  template Matrix<T> operator*(const Matrix<T>&, const Matrix<T>&);                      \
  template Vector<T> operator*(const Matrix<T>&, std::span<const T>);                    \
  template T inner<T>(std::span<const T>, std::span<const T>);                           \
  template double norm<T>(std::span<const T>);                                           \
  template Vector<T> add<T>(std::span<const T>, std::span<const T>);                     \
  template Vector<T> subtract<T>(std::span<const T>, std::span<const T>);                \
  template Vector<T> scale<T>(std::span<const T>, const T&);                             \
  template QRResult<T> qr_column_pivot<T>(const Matrix<T>&, const Tolerance&);           \
  template std::size_t numerical_rank<T>(const Matrix<T>&, const Tolerance&);            \
  template Matrix<T> null_space<T>(const Matrix<T>&, const Tolerance&);                  \
  template Matrix<T> range_basis<T>(const Matrix<T>&, const Tolerance&);                 \
  template LeastSquaresResult<T> least_squares<T>(const Matrix<T>&, std::span<const T>,  \
                                                  const Tolerance&);                     \
  template Matrix<T> inverse<T>(const Matrix<T>&, const Tolerance&);                     \
  template EigenResult<T> sym_eig<T>(const Matrix<T>&, const Tolerance&);

FRAMEPHASE_INSTANTIATE(double)
FRAMEPHASE_INSTANTIATE(Complex)

#undef FRAMEPHASE_INSTANTIATE

}  // namespace framephase
