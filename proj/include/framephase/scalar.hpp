#pragma once

#include <cmath>
#include <complex>
#include <string_view>
#include <type_traits>

namespace framephase {

using Complex = std::complex<double>;

enum class Field { Real, Complex };

constexpr std::string_view field_name(Field f) {
  return f == Field::Real ? "real" : "complex";
}

template <class T>
struct is_complex : std::false_type {};
template <class R>
struct is_complex<std::complex<R>> : std::true_type {};

template <class T>
inline constexpr bool is_complex_v = is_complex<T>::value;

/// The two scalar fields the toolkit works over.
template <class T>
concept FieldScalar = std::is_same_v<T, double> || std::is_same_v<T, Complex>;

template <FieldScalar T>
constexpr Field field_of() {
  return is_complex_v<T> ? Field::Complex : Field::Real;
}

inline double conj(double x) { return x; }
inline Complex conj(const Complex& z) { return std::conj(z); }

inline double abs2(double x) { return x * x; }
inline double abs2(const Complex& z) { return std::norm(z); }

inline double real_part(double x) { return x; }
inline double real_part(const Complex& z) { return z.real(); }

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Unit-modulus scalar with the phase of z (z / |z|); 1 when z == 0.
template <FieldScalar T>
T phase_of(const T& z) {
  const double m = std::abs(z);
  if (m == 0.0) return T(1.0);
  return z / m;
}

}  // namespace framephase
