#pragma once

// Finite frames: the analysis/synthesis/frame operators, canonical dual and
// Parseval frames, and the frame generators.

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "framephase/linalg.hpp"

namespace framephase {

/// An ordered family f_1..f_M spanning field^N. Immutable after construction.
template <FieldScalar T>
class Frame {
 public:
  using value_type = T;

  /// Columns of `synthesis` are the frame vectors. Throws std::invalid_argument
  /// unless the entries are finite, M >= N >= 1 and the vectors span (rank N).
  explicit Frame(Matrix<T> synthesis, const Tolerance& tol = {});
  static Frame from_vectors(std::span<const Vector<T>> vectors, const Tolerance& tol = {});

  static constexpr Field field() { return field_of<T>(); }
  std::size_t dim() const { return vectors_.rows(); }
  std::size_t size() const { return vectors_.cols(); }
  Vector<T> vector(std::size_t i) const { return vectors_.column(i); }
  std::vector<Vector<T>> vectors() const;

  /// N x M matrix with f_i as column i.
  const Matrix<T>& synthesis_matrix() const { return vectors_; }
  /// M x N matrix with row i equal to f_i*, so (T x)_i = <x, f_i>.
  const Matrix<T>& analysis_matrix() const { return analysis_; }

  /// Sub-matrix whose columns are the listed frame vectors.
  Matrix<T> columns(std::span<const std::size_t> idx) const { return vectors_.select_columns(idx); }

 private:
  Matrix<T> vectors_;
  Matrix<T> analysis_;
};

using RealFrame = Frame<double>;
using ComplexFrame = Frame<Complex>;
using AnyFrame = std::variant<RealFrame, ComplexFrame>;

struct FrameBounds {
  double lower = 0.0;  // A = lambda_min(S)
  double upper = 0.0;  // B = lambda_max(S)

  bool tight(double eps) const { return upper - lower <= eps; }
};

template <FieldScalar T>
struct FrameOperator {
  Matrix<T> s;  // S = T* T
  FrameBounds bounds;
};

/// Orthonormal M x N basis of W = T(field^N).
template <FieldScalar T>
struct CoefficientRange {
  Matrix<T> basis;

  /// Orthogonal projection of a coefficient vector onto W.
  Vector<T> project(std::span<const T> c) const;
};

/// (T x)_i = <x, f_i>.
template <FieldScalar T>
Vector<T> analysis(const Frame<T>& frame, std::span<const T> x);

/// T* c = sum_i c_i f_i.
template <FieldScalar T>
Vector<T> synthesis(const Frame<T>& frame, std::span<const T> c);

template <FieldScalar T>
FrameOperator<T> frame_operator(const Frame<T>& frame, const Tolerance& tol = {});

/// {S^-1 f_i}.
template <FieldScalar T>
Frame<T> canonical_dual(const Frame<T>& frame, const Tolerance& tol = {});

/// {S^-1/2 f_i}; a Parseval frame equivalent to the input.
template <FieldScalar T>
Frame<T> canonical_parseval(const Frame<T>& frame, const Tolerance& tol = {});

template <FieldScalar T>
CoefficientRange<T> coefficient_range(const Frame<T>& frame, const Tolerance& tol = {});

/// Largest principal-angle sine between two subspaces of equal dimension:
/// max over both directions of ||(I - P_b) basis_a||_2, estimated by Frobenius norm.
template <FieldScalar T>
double subspace_distance(const CoefficientRange<T>& a, const CoefficientRange<T>& b);

/// {R f_i}. Throws std::invalid_argument if R is not N x N of rank N.
template <FieldScalar T>
Frame<T> apply_invertible(const Frame<T>& frame, const Matrix<T>& r, const Tolerance& tol = {});

// ---------------------------------------------------------------------------
// Generators. All are deterministic functions of their arguments.

/// I.i.d. standard Gaussian entries; resamples in the (probability zero) rank-deficient case.
template <FieldScalar T>
Frame<T> gen_random(std::size_t n, std::size_t m, std::uint64_t seed);

/// Distance below which a candidate counts as lying in the span of an (N-1)-subset.
inline constexpr double kFullSparkMargin = 1e-6;

/// Every N-element subset is linearly independent. Starts from a random orthonormal
/// basis and greedily appends unit vectors that stay kFullSparkMargin away from the
/// span of every (N-1)-subset of the vectors chosen so far.
template <FieldScalar T>
Frame<T> gen_full_spark(std::size_t n, std::size_t m, std::uint64_t seed);

/// A full-spark frame of 2N-1 vectors followed by M-2N+1 copies of its last vector.
/// Throws std::invalid_argument unless M >= 2N.
template <FieldScalar T>
Frame<T> gen_repeated_tail(std::size_t n, std::size_t m, std::uint64_t seed);

/// Windowed Fourier (STFT) frame on C^signal_len: the vector indexed (k, w) carries
/// g(t) e^{2 pi i w t / fft_size} at sample t + k*hop, so that analysis() returns
/// X(k, w) = sum_t g(t) x(t + k hop) e^{-2 pi i w t / fft_size}. Vectors are ordered
/// with k outermost. Throws std::invalid_argument if the windows leave a sample uncovered.
ComplexFrame gen_windowed_fourier(std::span<const double> window, std::size_t signal_len,
                                  std::size_t hop, std::size_t fft_size);

/// Number of window positions floor((T - M_w) / hop) + 1.
std::size_t windowed_fourier_positions(std::size_t signal_len, std::size_t hop,
                                       std::size_t fft_size);

}  // namespace framephase
