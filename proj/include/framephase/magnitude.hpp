#pragma once

// The magnitude map x -> (|<x, f_i>|)_i, rays (vectors modulo a unimodular
// scalar), and sign-pattern bookkeeping on coefficient vectors.

#include <cstdint>
#include <span>
#include <vector>

#include "framephase/frame.hpp"

namespace framephase {

struct MagnitudeVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  /// Throws std::invalid_argument on a negative or non-finite entry.
  void validate() const;
};

template <FieldScalar T>
MagnitudeVector magnitude_map(const Frame<T>& frame, std::span<const T> x);

/// A vector up to a global unimodular factor, stored in canonical form: the first
/// entry with modulus above residual_eps is a positive real. The zero vector is its own ray.
template <FieldScalar T>
class Ray {
 public:
  explicit Ray(Vector<T> x, const Tolerance& tol = {});

  const Vector<T>& representative() const { return rep_; }
  bool is_zero() const { return zero_; }

 private:
  Vector<T> rep_;
  bool zero_ = true;
};

/// min over unimodular c of ||x - c y|| <= residual_eps * max(||x||, 1).
template <FieldScalar T>
bool ray_equal(std::span<const T> x, std::span<const T> y, const Tolerance& tol = {});

/// A subset S of {0..M-1} as a bit mask; acts on coefficient vectors by flipping the sign of
/// entries in S.
class SignPattern {
 public:
  SignPattern(std::size_t m, std::uint64_t mask);
  static SignPattern from_indices(std::size_t m, std::span<const std::size_t> indices);

  std::size_t size() const { return m_; }
  std::uint64_t mask() const { return mask_; }
  bool contains(std::size_t i) const { return (mask_ >> i) & 1U; }
  std::vector<std::size_t> indices() const;
  SignPattern complement() const;
  std::size_t count() const;

  friend bool operator==(const SignPattern&, const SignPattern&) = default;

 private:
  std::size_t m_;
  std::uint64_t mask_;
};

/// sigma_S: negates the entries indexed by S.
template <FieldScalar T>
Vector<T> apply_sign_pattern(const SignPattern& s, std::span<const T> a);

/// (u + sigma_S u) / 2: the component of u vanishing on S (in L^S).
template <FieldScalar T>
Vector<T> project_off(const SignPattern& s, std::span<const T> u);

/// (u - sigma_S u) / 2: the component of u supported on S (in L^{S complement}).
template <FieldScalar T>
Vector<T> project_on(const SignPattern& s, std::span<const T> u);

/// Euclidean distance between two magnitude vectors of equal length.
double magnitude_distance(const MagnitudeVector& a, const MagnitudeVector& b);

}  // namespace framephase
