#include "framephase/magnitude.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace framephase {

void MagnitudeVector::validate() const {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!(std::isfinite(values[i]) && values[i] >= 0.0))
      throw std::invalid_argument("magnitude " + std::to_string(i) +
                                  " must be a nonnegative finite number");
}

template <FieldScalar T>
MagnitudeVector magnitude_map(const Frame<T>& frame, std::span<const T> x) {
  const Vector<T> coeffs = analysis(frame, x);
  MagnitudeVector out;
  out.values.reserve(coeffs.size());
  for (const T& c : coeffs) out.values.push_back(std::abs(c));
  return out;
}

template <FieldScalar T>
Ray<T>::Ray(Vector<T> x, const Tolerance& tol) : rep_(std::move(x)) {
  for (const T& v : rep_) {
    if (std::abs(v) > tol.residual_eps) {
      const T c = conj(phase_of(v));
      for (T& e : rep_) e *= c;
      zero_ = false;
      return;
    }
  }
}

template <FieldScalar T>
bool ray_equal(std::span<const T> x, std::span<const T> y, const Tolerance& tol) {
  if (x.size() != y.size()) throw std::invalid_argument("ray_equal: length mismatch");
  const double bound = tol.residual_eps * std::max(norm(x), 1.0);
  double best;
  if constexpr (is_complex_v<T>) {
    const T c = phase_of(inner(x, y));
    best = norm<T>(subtract<T>(x, scale<T>(y, c)));
  } else {
    best = std::min(norm<T>(subtract<T>(x, y)), norm<T>(add<T>(x, y)));
  }
  return best <= bound;
}

SignPattern::SignPattern(std::size_t m, std::uint64_t mask) : m_(m), mask_(mask) {
  if (m > 64) throw std::invalid_argument("sign patterns support at most 64 coordinates");
  if (m < 64 && (mask >> m) != 0) throw std::invalid_argument("sign pattern mask exceeds size");
}

SignPattern SignPattern::from_indices(std::size_t m, std::span<const std::size_t> indices) {
  std::uint64_t mask = 0;
  for (std::size_t i : indices) {
    if (i >= m) throw std::invalid_argument("sign pattern index out of range");
    mask |= std::uint64_t{1} << i;
  }
  return {m, mask};
}

std::vector<std::size_t> SignPattern::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m_; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

SignPattern SignPattern::complement() const {
  const std::uint64_t full = m_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m_) - 1;
  return {m_, full & ~mask_};
}

std::size_t SignPattern::count() const { return static_cast<std::size_t>(std::popcount(mask_)); }

template <FieldScalar T>
Vector<T> apply_sign_pattern(const SignPattern& s, std::span<const T> a) {
  if (a.size() != s.size()) throw std::invalid_argument("sign pattern length mismatch");
  Vector<T> out(a.begin(), a.end());
  for (std::size_t i = 0; i < out.size(); ++i)
    if (s.contains(i)) out[i] = -out[i];
  return out;
}

template <FieldScalar T>
Vector<T> project_off(const SignPattern& s, std::span<const T> u) {
  Vector<T> out = add<T>(u, apply_sign_pattern(s, u));
  for (T& e : out) e *= 0.5;
  return out;
}

template <FieldScalar T>
Vector<T> project_on(const SignPattern& s, std::span<const T> u) {
  Vector<T> out = subtract<T>(u, apply_sign_pattern(s, u));
  for (T& e : out) e *= 0.5;
  return out;
}

double magnitude_distance(const MagnitudeVector& a, const MagnitudeVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("magnitude vectors differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    s += d * d;
  }
  return std::sqrt(s);
}

#define FRAMEPHASE_INSTANTIATE(T)                                                    \
  template MagnitudeVector magnitude_map<T>(const Frame<T>&, std::span<const T>);    \
  template class Ray<T>;                                                            \
  template bool ray_equal<T>(std::span<const T>, std::span<const T>, const Tolerance&); \
  template Vector<T> apply_sign_pattern<T>(const SignPattern&, std::span<const T>); \
  template Vector<T> project_off<T>(const SignPattern&, std::span<const T>);        \
  template Vector<T> project_on<T>(const SignPattern&, std::span<const T>);

FRAMEPHASE_INSTANTIATE(double)
FRAMEPHASE_INSTANTIATE(Complex)

#undef FRAMEPHASE_INSTANTIATE

}  // namespace framephase
