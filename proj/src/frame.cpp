#include "framephase/frame.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "framephase/random.hpp"
#include "framephase/subsets.hpp"

namespace framephase {

template <FieldScalar T>
Frame<T>::Frame(Matrix<T> synthesis, const Tolerance& tol)
    : vectors_(std::move(synthesis)), analysis_(vectors_.adjoint()) {
  const std::size_t n = vectors_.rows();
  const std::size_t m = vectors_.cols();
  if (n == 0) throw std::invalid_argument("frame dimension N must be at least 1");
  if (m < n)
    throw std::invalid_argument("M >= N required (got N=" + std::to_string(n) +
                                ", M=" + std::to_string(m) + ")");
  for (const T& v : vectors_.data())
    if (!is_finite(v)) throw std::invalid_argument("frame vectors must be finite");
  if (numerical_rank(vectors_, tol) != n)
    throw std::invalid_argument("frame vectors do not span the " + std::to_string(n) +
                                "-dimensional space");
}

template <FieldScalar T>
Frame<T> Frame<T>::from_vectors(std::span<const Vector<T>> vectors, const Tolerance& tol) {
  if (vectors.empty()) throw std::invalid_argument("frame needs at least one vector");
  return Frame(Matrix<T>::from_columns(vectors, vectors.front().size()), tol);
}

template <FieldScalar T>
std::vector<Vector<T>> Frame<T>::vectors() const {
  std::vector<Vector<T>> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(vector(i));
  return out;
}

template <FieldScalar T>
Vector<T> CoefficientRange<T>::project(std::span<const T> c) const {
  const Vector<T> coords = basis.adjoint() * c;
  return basis * coords;
}

template <FieldScalar T>
Vector<T> analysis(const Frame<T>& frame, std::span<const T> x) {
  if (x.size() != frame.dim())
    throw std::invalid_argument("analysis: signal length " + std::to_string(x.size()) +
                                " != N = " + std::to_string(frame.dim()));
  return frame.analysis_matrix() * x;
}

template <FieldScalar T>
Vector<T> synthesis(const Frame<T>& frame, std::span<const T> c) {
  if (c.size() != frame.size())
    throw std::invalid_argument("synthesis: coefficient length " + std::to_string(c.size()) +
                                " != M = " + std::to_string(frame.size()));
  return frame.synthesis_matrix() * c;
}

template <FieldScalar T>
FrameOperator<T> frame_operator(const Frame<T>& frame, const Tolerance& tol) {
  FrameOperator<T> out;
  out.s = frame.synthesis_matrix() * frame.analysis_matrix();
  // Symmetrize away rounding so the Hermitian check in sym_eig is exact.
  const Matrix<T> sa = out.s.adjoint();
  for (std::size_t i = 0; i < out.s.rows(); ++i)
    for (std::size_t j = 0; j < out.s.cols(); ++j) out.s(i, j) = (out.s(i, j) + sa(i, j)) * 0.5;
  const auto eig = sym_eig(out.s, tol);
  out.bounds.upper = eig.values.front();
  out.bounds.lower = eig.values.back();
  if (!(out.bounds.lower > tol.rank_eps * out.bounds.upper))
    throw std::invalid_argument("frame operator is numerically singular; not a frame");
  return out;
}

namespace {

template <FieldScalar T>
Matrix<T> frame_operator_power(const Frame<T>& frame, double power, const Tolerance& tol) {
  const auto op = frame_operator(frame, tol);
  const auto eig = sym_eig(op.s, tol);
  return hermitian_function(eig, [power](double lambda) { return std::pow(lambda, power); });
}

}  // namespace

template <FieldScalar T>
Frame<T> canonical_dual(const Frame<T>& frame, const Tolerance& tol) {
  return Frame<T>(frame_operator_power(frame, -1.0, tol) * frame.synthesis_matrix(), tol);
}

template <FieldScalar T>
Frame<T> canonical_parseval(const Frame<T>& frame, const Tolerance& tol) {
  return Frame<T>(frame_operator_power(frame, -0.5, tol) * frame.synthesis_matrix(), tol);
}

template <FieldScalar T>
CoefficientRange<T> coefficient_range(const Frame<T>& frame, const Tolerance& tol) {
  return {range_basis(frame.analysis_matrix(), tol)};
}

template <FieldScalar T>
double subspace_distance(const CoefficientRange<T>& a, const CoefficientRange<T>& b) {
  if (a.basis.rows() != b.basis.rows())
    throw std::invalid_argument("subspace_distance: ambient dimensions differ");
  if (a.basis.cols() != b.basis.cols()) return 1.0;
  auto one_way = [](const Matrix<T>& from, const Matrix<T>& onto) {
    const Matrix<T> residual = from - onto * (onto.adjoint() * from);
    return residual.frobenius_norm();
  };
  return std::max(one_way(a.basis, b.basis), one_way(b.basis, a.basis));
}

template <FieldScalar T>
Frame<T> apply_invertible(const Frame<T>& frame, const Matrix<T>& r, const Tolerance& tol) {
  const std::size_t n = frame.dim();
  if (r.rows() != n || r.cols() != n)
    throw std::invalid_argument("apply_invertible: R must be " + std::to_string(n) + "x" +
                                std::to_string(n));
  if (numerical_rank(r, tol) != n) throw std::invalid_argument("apply_invertible: R is singular");
  return Frame<T>(r * frame.synthesis_matrix(), tol);
}

// ---------------------------------------------------------------------------
// Generators

template <FieldScalar T>
Frame<T> gen_random(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("N >= 1 required");
  if (m < n) throw std::invalid_argument("M >= N required");
  Rng rng(seed);
  for (;;) {
    Matrix<T> vectors = gaussian_matrix<T>(rng, n, m);
    if (numerical_rank(vectors) == n) return Frame<T>(std::move(vectors));
  }
}

template <FieldScalar T>
Frame<T> gen_full_spark(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("N >= 1 required");
  if (m < n) throw std::invalid_argument("M >= N required");
  Rng rng(seed);

  std::vector<Vector<T>> chosen;
  chosen.reserve(m);
  {
    const auto qr = qr_column_pivot(gaussian_matrix<T>(rng, n, n));
    for (std::size_t j = 0; j < n; ++j) chosen.push_back(qr.q.column(j));
  }

  constexpr int kMaxAttempts = 10000;
  while (chosen.size() < m) {
    // Orthonormal bases of the spans of all (N-1)-subsets of the current vectors.
    std::vector<Matrix<T>> spans;
    const Matrix<T> current = Matrix<T>::from_columns(chosen, n);
    for_each_subset(chosen.size(), n - 1, [&](std::span<const std::size_t> idx) {
      spans.push_back(range_basis(current.select_columns(idx)));
      return true;
    });
    bool accepted = false;
    for (int attempt = 0; attempt < kMaxAttempts && !accepted; ++attempt) {
      Vector<T> candidate = unit_vector<T>(rng, n);
      accepted = std::all_of(spans.begin(), spans.end(), [&](const Matrix<T>& q) {
        const Vector<T> proj = q * (q.adjoint() * candidate);
        return norm<T>(subtract<T>(candidate, proj)) > kFullSparkMargin;
      });
      if (accepted) chosen.push_back(std::move(candidate));
    }
    if (!accepted) throw std::runtime_error("gen_full_spark: no admissible candidate found");
  }
  return Frame<T>::from_vectors(chosen);
}

template <FieldScalar T>
Frame<T> gen_repeated_tail(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 2 * n)
    throw std::invalid_argument("repeated-tail needs M >= 2N (got N=" + std::to_string(n) +
                                ", M=" + std::to_string(m) + ")");
  const Frame<T> head = gen_full_spark<T>(n, 2 * n - 1, seed);
  std::vector<Vector<T>> vectors = head.vectors();
  const Vector<T> last = vectors.back();
  while (vectors.size() < m) vectors.push_back(last);
  return Frame<T>::from_vectors(vectors);
}

std::size_t windowed_fourier_positions(std::size_t signal_len, std::size_t hop,
                                       std::size_t fft_size) {
  if (hop == 0) throw std::invalid_argument("hop must be at least 1");
  if (fft_size == 0 || fft_size > signal_len)
    throw std::invalid_argument("window size must lie in [1, T]");
  return (signal_len - fft_size) / hop + 1;
}

ComplexFrame gen_windowed_fourier(std::span<const double> window, std::size_t signal_len,
                                  std::size_t hop, std::size_t fft_size) {
  if (window.size() != fft_size)
    throw std::invalid_argument("window length must equal the FFT size");
  const std::size_t positions = windowed_fourier_positions(signal_len, hop, fft_size);

  std::vector<bool> covered(signal_len, false);
  for (std::size_t k = 0; k < positions; ++k)
    for (std::size_t t = 0; t < fft_size; ++t)
      if (window[t] != 0.0) covered[t + k * hop] = true;
  const auto gap = std::find(covered.begin(), covered.end(), false);
  if (gap != covered.end())
    throw std::invalid_argument("windows leave sample " +
                                std::to_string(gap - covered.begin()) +
                                " uncovered; not a frame");

  Matrix<Complex> vectors(signal_len, positions * fft_size);
  for (std::size_t k = 0; k < positions; ++k) {
    for (std::size_t w = 0; w < fft_size; ++w) {
      const std::size_t col = k * fft_size + w;
      for (std::size_t t = 0; t < fft_size; ++t) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>((w * t) % fft_size) /
                             static_cast<double>(fft_size);
        vectors(t + k * hop, col) = window[t] * std::polar(1.0, angle);
      }
    }
  }
  return ComplexFrame(std::move(vectors));
}

#define FRAMEPHASE_INSTANTIATE(T)                                                             \
  template class Frame<T>;                                                                   \
  template struct CoefficientRange<T>;                                                       \
  template Vector<T> analysis<T>(const Frame<T>&, std::span<const T>);                       \
  template Vector<T> synthesis<T>(const Frame<T>&, std::span<const T>);                      \
  template FrameOperator<T> frame_operator<T>(const Frame<T>&, const Tolerance&);            \
  template Frame<T> canonical_dual<T>(const Frame<T>&, const Tolerance&);                    \
  template Frame<T> canonical_parseval<T>(const Frame<T>&, const Tolerance&);                \
  template CoefficientRange<T> coefficient_range<T>(const Frame<T>&, const Tolerance&);      \
  template double subspace_distance<T>(const CoefficientRange<T>&, const CoefficientRange<T>&); \
  template Frame<T> apply_invertible<T>(const Frame<T>&, const Matrix<T>&, const Tolerance&); \
  template Frame<T> gen_random<T>(std::size_t, std::size_t, std::uint64_t);                  \
  template Frame<T> gen_full_spark<T>(std::size_t, std::size_t, std::uint64_t);              \
  template Frame<T> gen_repeated_tail<T>(std::size_t, std::size_t, std::uint64_t);

FRAMEPHASE_INSTANTIATE(double)
FRAMEPHASE_INSTANTIATE(Complex)

#undef FRAMEPHASE_INSTANTIATE

}  // namespace framephase
