#pragma once

#include <cstdint>
#include <random>

#include "framephase/linalg.hpp"

namespace framephase {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent per-trial seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return mix_seed(mix_seed(mix_seed(seed) ^ a) ^ b);
}

/// Standard Gaussian scalar; complex draws have independent N(0,1) real and imaginary parts.
template <FieldScalar T>
T gaussian(Rng& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  if constexpr (is_complex_v<T>) {
    const double re = d(rng);
    const double im = d(rng);
    return T(re, im);
  } else {
    return d(rng);
  }
}

template <FieldScalar T>
Vector<T> gaussian_vector(Rng& rng, std::size_t n) {
  Vector<T> v(n);
  for (auto& e : v) e = gaussian<T>(rng);
  return v;
}

/// Uniform on the unit sphere of the field^n.
template <FieldScalar T>
Vector<T> unit_vector(Rng& rng, std::size_t n) {
  for (;;) {
    Vector<T> v = gaussian_vector<T>(rng, n);
    const double nv = norm<T>(v);
    if (nv > 1e-12) {
      for (auto& e : v) e /= nv;
      return v;
    }
  }
}

template <FieldScalar T>
Matrix<T> gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix<T> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = gaussian<T>(rng);
  return m;
}

/// Random unimodular scalar: a random sign (real) or a uniform phase (complex).
template <FieldScalar T>
T unimodular(Rng& rng) {
  if constexpr (is_complex_v<T>) {
    std::uniform_real_distribution<double> d(0.0, 2.0 * 3.14159265358979323846);
    return std::polar(1.0, d(rng));
  } else {
    return std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
  }
}

}  // namespace framephase
