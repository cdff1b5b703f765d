#pragma once

// Injectivity of the magnitude map on rays. For real frames the complement
// property (for every S, {f_i}_{i in S} or {f_i}_{i not in S} spans) is an exact
// characterization; for complex frames it is only necessary, and M >= 2N is
// required. Every negative verdict carries an explicit ambiguous pair.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "framephase/magnitude.hpp"

namespace framephase {

enum class Verdict { Injective, NotInjective, NecessaryConditionsPass };

std::string_view verdict_name(Verdict v);

/// Two signals with equal magnitudes that are not the same ray.
template <FieldScalar T>
struct Witness {
  Vector<T> x;
  Vector<T> y;
};

template <FieldScalar T>
struct InjectivityCertificate {
  Verdict verdict = Verdict::NotInjective;
  std::optional<SignPattern> failing_subset;
  std::optional<Witness<T>> witness;
  std::uint64_t checked_subsets = 0;
  std::string reason;
};

struct CertifierOptions {
  std::size_t max_m = 24;                     // complement check enumerates 2^(M-1) pairs
  std::uint64_t max_spark_subsets = 5000000;  // C(M, N) cap for full_spark_test
};

/// Exhaustive complement-property check over the 2^(M-1) pairs {S, S^c}, with index 0
/// always in S. The lowest failing mask wins regardless of thread scheduling, and
/// checked_subsets counts pairs up to and including it. Real pass: Injective. Complex
/// pass: NecessaryConditionsPass. Throws std::invalid_argument when M > opts.max_m.
template <FieldScalar T>
InjectivityCertificate<T> complement_property(const Frame<T>& frame, const Tolerance& tol = {},
                                              const CertifierOptions& opts = {});

struct FullSparkResult {
  bool full_spark = true;
  std::optional<std::vector<std::size_t>> dependent_subset;  // lexicographically first
  std::uint64_t checked_subsets = 0;
};

/// Every N-subset of the frame is linearly independent.
template <FieldScalar T>
FullSparkResult full_spark_test(const Frame<T>& frame, const Tolerance& tol = {},
                                const CertifierOptions& opts = {});

/// (u + v, u - v) with unit u orthogonal to {f_i}_{i in S} and unit v orthogonal to
/// {f_i}_{i not in S}. Throws std::invalid_argument if either family spans.
template <FieldScalar T>
Witness<T> witness_pair(const Frame<T>& frame, const SignPattern& s, const Tolerance& tol = {});

/// Equal magnitudes within residual_eps * max(1, ||M(x)||) and distinct rays.
template <FieldScalar T>
bool verify_witness(const Frame<T>& frame, const Witness<T>& w, const Tolerance& tol = {});

/// For M <= 2N-2: the split S = {0..M-N} leaves both S and its complement with fewer
/// than N vectors, so this pattern always fails the complement property.
SignPattern short_frame_split(std::size_t n, std::size_t m);

/// Random real frame with M = 2N-2 certified NotInjective through the split above.
InjectivityCertificate<double> sharpness_check(std::size_t n, std::uint64_t seed,
                                               const Tolerance& tol = {});

/// False when M <= 2N-1 (certainly not injective). True means only that the size
/// requirement holds.
bool complex_size_check(const ComplexFrame& frame);

enum class ComplexRegime {
  TooSmall,          // M < 2N: never injective
  Unknown,           // 2N <= M < 4N-2: may or may not be injective
  GenericInjective,  // M >= 4N-2: injective for generic frames
};

ComplexRegime complex_regime(std::size_t n, std::size_t m);
std::string_view complex_regime_name(ComplexRegime r);

/// Ambiguous pair for a complex frame with M = 2N-1, built from two range elements
/// supported on {0..N-1} and {N-1..M-1}. Throws std::invalid_argument for other M.
Witness<Complex> complex_size_witness(const ComplexFrame& frame, const Tolerance& tol = {});

/// Full decision used by the CLI. Real frames: complement_property. Complex frames:
/// size bound first (with witness), then the complement check.
template <FieldScalar T>
InjectivityCertificate<T> certify(const Frame<T>& frame, const Tolerance& tol = {},
                                  const CertifierOptions& opts = {});

struct SpanEquivalenceReport {
  FullSparkResult spark;
  InjectivityCertificate<double> certificate;
  bool consistent = false;  // full spark <=> Injective
};

/// At M = 2N-1 full spark and injectivity coincide; runs both and reports whether they
/// agree. Throws std::invalid_argument unless M = 2N-1.
SpanEquivalenceReport necessary_condition_for_M_2N_minus_1(const RealFrame& frame,
                                                     const Tolerance& tol = {},
                                                     const CertifierOptions& opts = {});

}  // namespace framephase
