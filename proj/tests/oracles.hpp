#pragma once

// Reference computations for the tests. They go through Eigen's SVD rather
// than the library's own QR/Jacobi code, and use the direct definitions
// (sign-pattern enumeration, subspace intersection, determinants, the STFT
// double sum) instead of the library's pruned or structured algorithms.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "framephase/frame.hpp"

namespace oracle {

using framephase::Complex;

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

template <class T>
Mat<T> to_eigen(const framephase::Matrix<T>& a) {
  Mat<T> out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  return out;
}

template <class T>
Vec<T> to_eigen(const std::vector<T>& v) {
  Vec<T> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = v[i];
  return out;
}

template <class T>
std::vector<T> from_eigen(const Vec<T>& v) {
  return std::vector<T>(v.data(), v.data() + v.size());
}

/// Rank by singular values relative to the largest.
template <class T>
int svd_rank(const Mat<T>& a, double rel = 1e-10) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat<T>> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i) r += s(i) > rel * s(0);
  return r;
}

/// Orthonormal basis of the null space of a (columns).
template <class T>
Mat<T> svd_null(const Mat<T>& a, double rel = 1e-10) {
  Eigen::JacobiSVD<Mat<T>> svd(a, Eigen::ComputeFullV);
  const int r = svd_rank(a, rel);
  return svd.matrixV().rightCols(a.cols() - r);
}

/// Analysis matrix rows <., f_i>: row i is f_i^*.
template <class T>
Mat<T> analysis(const framephase::Frame<T>& f) {
  return to_eigen(f.synthesis_matrix()).adjoint();
}

struct RealInjectivity {
  bool injective = true;
  std::uint64_t first_failing_mask = 0;  // lowest failing mask with bit 0 set
  std::vector<double> x, y;              // ambiguous pair for that mask
};

/// Real injectivity from the coefficient-space picture: for each sign pattern sigma
/// (index 0 always flipped, so each pair {S, S^c} is visited once), K = W ∩ sigma W is sigma-invariant; the magnitudes are
/// ambiguous exactly when K has both a +1 and a -1 component under sigma. Then
/// c = c+ + c-, and x, y are the preimages of c and sigma c.
inline RealInjectivity real_injectivity(const framephase::RealFrame& f) {
  const Mat<double> a = analysis(f);
  const int m = static_cast<int>(a.rows());
  const Mat<double> pw = a * a.completeOrthogonalDecomposition().pseudoInverse();
  const Mat<double> perp = Mat<double>::Identity(m, m) - pw;
  RealInjectivity out;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << (m - 1)); ++k) {
    const std::uint64_t mask = (k << 1) | 1U;
    Vec<double> sigma = Vec<double>::Ones(m);
    for (int i = 0; i < m; ++i)
      if ((mask >> i) & 1U) sigma(i) = -1.0;
    Mat<double> stacked(2 * m, m);
    stacked << perp, perp * sigma.asDiagonal();
    // The blocks are projectors (norm 1 or 0), so an absolute cutoff is the right scale.
    Eigen::JacobiSVD<Mat<double>> svd(stacked, Eigen::ComputeFullV);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i) rank += svd.singularValues()(i) > 1e-9;
    const Mat<double> kernel = svd.matrixV().rightCols(m - rank);
    if (kernel.cols() == 0) continue;
    const Mat<double> plus = (kernel + sigma.asDiagonal() * kernel) / 2.0;
    const Mat<double> minus = (kernel - sigma.asDiagonal() * kernel) / 2.0;
    if (svd_rank(plus, 1e-9) == 0 || plus.norm() < 1e-9) continue;
    if (svd_rank(minus, 1e-9) == 0 || minus.norm() < 1e-9) continue;
    Eigen::JacobiSVD<Mat<double>> sp(plus, Eigen::ComputeThinU);
    Eigen::JacobiSVD<Mat<double>> sm(minus, Eigen::ComputeThinU);
    const Vec<double> c = sp.matrixU().col(0) + sm.matrixU().col(0);
    const Vec<double> sc = sigma.asDiagonal() * c;
    const auto solve = [&](const Vec<double>& coeffs) {
      return Vec<double>(a.completeOrthogonalDecomposition().solve(coeffs));
    };
    out.injective = false;
    out.first_failing_mask = mask;
    out.x = from_eigen(solve(c));
    out.y = from_eigen(solve(sc));
    return out;
  }
  return out;
}

/// Complement property straight from the definition, over all 2^M subsets.
template <class T>
bool complement_property(const framephase::Frame<T>& f, double rel = 1e-10) {
  const Mat<T> s = to_eigen(f.synthesis_matrix());
  const int n = static_cast<int>(s.rows());
  const int m = static_cast<int>(s.cols());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<int> in, out;
    for (int i = 0; i < m; ++i) ((mask >> i) & 1U ? in : out).push_back(i);
    Mat<T> a(n, in.size()), b(n, out.size());
    for (std::size_t j = 0; j < in.size(); ++j) a.col(j) = s.col(in[j]);
    for (std::size_t j = 0; j < out.size(); ++j) b.col(j) = s.col(out[j]);
    if (svd_rank(a, rel) < n && svd_rank(b, rel) < n) return false;
  }
  return true;
}

/// Every N-subset has nonzero determinant (relative to the product of column norms).
template <class T>
bool full_spark(const framephase::Frame<T>& f, double rel = 1e-10) {
  const Mat<T> s = to_eigen(f.synthesis_matrix());
  const int n = static_cast<int>(s.rows());
  const int m = static_cast<int>(s.cols());
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  for (;;) {
    Mat<T> sub(n, n);
    double scale = 1.0;
    for (int j = 0; j < n; ++j) {
      sub.col(j) = s.col(idx[j]);
      scale *= sub.col(j).norm();
    }
    if (std::abs(sub.determinant()) <= rel * scale) return false;
    int i = n;
    while (i > 0 && idx[i - 1] == m - n + i - 1) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (int j = i; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// All rays with magnitudes a, by trying every sign pattern and testing membership in W.
inline std::vector<std::vector<double>> all_real_preimages(const framephase::RealFrame& f,
                                                           const std::vector<double>& mags,
                                                           double tol = 1e-8) {
  const Mat<double> a = analysis(f);
  const int m = static_cast<int>(a.rows());
  const auto cod = a.completeOrthogonalDecomposition();
  const double bound = tol * (1.0 + to_eigen(mags).norm());
  std::vector<std::vector<double>> rays;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << (m - 1)); ++k) {
    Vec<double> c(m);
    for (int i = 0; i < m; ++i) c(i) = (i > 0 && ((k >> (i - 1)) & 1U)) ? -mags[i] : mags[i];
    const Vec<double> x = cod.solve(c);
    if ((a * x - c).norm() > bound) continue;
    bool seen = false;
    for (const auto& r : rays) {
      const Vec<double> rv = to_eigen(r);
      if ((rv - x).norm() <= 1e-6 * (1 + x.norm()) || (rv + x).norm() <= 1e-6 * (1 + x.norm()))
        seen = true;
    }
    if (!seen) rays.push_back(from_eigen(x));
  }
  return rays;
}

/// X(k, w) = sum_t g(t) x(t + k hop) e^{-2 pi i w t / L}.
inline std::vector<Complex> stft(const std::vector<double>& g, const std::vector<Complex>& x,
                                 std::size_t hop) {
  const std::size_t len = g.size();
  const std::size_t positions = (x.size() - len) / hop + 1;
  std::vector<Complex> out;
  for (std::size_t k = 0; k < positions; ++k) {
    for (std::size_t w = 0; w < len; ++w) {
      Complex sum = 0.0;
      for (std::size_t t = 0; t < len; ++t) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(w) *
                             static_cast<double>(t) / static_cast<double>(len);
        sum += g[t] * x[t + k * hop] * std::polar(1.0, angle);
      }
      out.push_back(sum);
    }
  }
  return out;
}

/// min over unimodular c of ||x - c y|| (closed form: ||x||^2 + ||y||^2 - 2|<x, y>|).
template <class T>
double ray_distance(const std::vector<T>& x, const std::vector<T>& y) {
  const Vec<T> a = to_eigen(x);
  const Vec<T> b = to_eigen(y);
  const double d2 = a.squaredNorm() + b.squaredNorm() - 2.0 * std::abs(b.dot(a));
  return std::sqrt(std::max(d2, 0.0));
}

template <class T>
std::vector<double> magnitudes(const framephase::Frame<T>& f, const std::vector<T>& x) {
  const Vec<T> c = analysis(f) * to_eigen(x);
  std::vector<double> out(c.size());
  for (int i = 0; i < c.size(); ++i) out[i] = std::abs(c(i));
  return out;
}

inline double distance(const std::vector<double>& a, const std::vector<double>& b) {
  return (to_eigen(a) - to_eigen(b)).norm();
}

}  // namespace oracle
