#include "framephase/injectivity.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <string>

#include "framephase/parallel.hpp"
#include "framephase/random.hpp"
#include "framephase/subsets.hpp"

namespace framephase {

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Injective: return "Injective";
    case Verdict::NotInjective: return "NotInjective";
    case Verdict::NecessaryConditionsPass: return "NecessaryConditionsPass";
  }
  return "?";
}

namespace {

template <FieldScalar T>
bool spans(const Frame<T>& frame, std::span<const std::size_t> idx, const Tolerance& tol) {
  if (idx.size() < frame.dim()) return false;
  return numerical_rank(frame.columns(idx), tol) == frame.dim();
}

// Pair index k <-> subset mask (k << 1) | 1, so index 0 is always in S.
constexpr std::uint64_t pair_mask(std::uint64_t k) { return (k << 1) | 1U; }

template <FieldScalar T>
bool pair_fails(const Frame<T>& frame, std::uint64_t mask, const Tolerance& tol,
                std::vector<std::size_t>& in, std::vector<std::size_t>& out) {
  in.clear();
  out.clear();
  for (std::size_t i = 0; i < frame.size(); ++i) ((mask >> i) & 1U ? in : out).push_back(i);
  return !spans<T>(frame, in, tol) && !spans<T>(frame, out, tol);
}

template <FieldScalar T>
Vector<T> unit_orthogonal_to(const Frame<T>& frame, std::span<const std::size_t> idx,
                             const Tolerance& tol) {
  const Matrix<T> rows = frame.columns(idx).adjoint();  // rows f_i*, so rows * u = (<u, f_i>)
  const Matrix<T> basis = idx.empty() ? Matrix<T>::identity(frame.dim()) : null_space(rows, tol);
  if (basis.cols() == 0) throw std::invalid_argument("witness_pair: subset spans the space");
  return basis.column(0);
}

}  // namespace

template <FieldScalar T>
InjectivityCertificate<T> complement_property(const Frame<T>& frame, const Tolerance& tol,
                                              const CertifierOptions& opts) {
  const std::size_t m = frame.size();
  if (m > opts.max_m || m > 63)
    throw std::invalid_argument("complement check enumerates 2^(M-1) subset pairs; M = " +
                                std::to_string(m) + " exceeds the budget of " +
                                std::to_string(std::min<std::size_t>(opts.max_m, 63)));
  const std::uint64_t pairs = std::uint64_t{1} << (m - 1);

  constexpr std::uint64_t kChunk = 1024;
  const std::uint64_t chunks = (pairs + kChunk - 1) / kChunk;
  std::atomic<std::uint64_t> lowest_fail{pairs};
  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(pairs, begin + kChunk);
    std::vector<std::size_t> in, out;
    for (std::uint64_t k = begin; k < end; ++k) {
      if (k >= lowest_fail.load(std::memory_order_relaxed)) return;
      if (pair_fails(frame, pair_mask(k), tol, in, out)) {
        std::uint64_t cur = lowest_fail.load();
        while (k < cur && !lowest_fail.compare_exchange_weak(cur, k)) {
        }
        return;
      }
    }
  });

  InjectivityCertificate<T> cert;
  const std::uint64_t fail = lowest_fail.load();
  if (fail == pairs) {
    cert.checked_subsets = pairs;
    if constexpr (is_complex_v<T>) {
      cert.verdict = Verdict::NecessaryConditionsPass;
      cert.reason =
          "every subset pair has a spanning side; this is necessary but not sufficient for "
          "complex frames";
    } else {
      cert.verdict = Verdict::Injective;
      cert.reason = "every subset pair has a spanning side (complement property)";
    }
    return cert;
  }
  cert.checked_subsets = fail + 1;
  cert.verdict = Verdict::NotInjective;
  cert.failing_subset = SignPattern(m, pair_mask(fail));
  cert.witness = witness_pair(frame, *cert.failing_subset, tol);
  cert.reason = "neither the subset nor its complement spans";
  return cert;
}

template <FieldScalar T>
FullSparkResult full_spark_test(const Frame<T>& frame, const Tolerance& tol,
                                const CertifierOptions& opts) {
  const std::size_t n = frame.dim();
  const std::size_t m = frame.size();
  const std::uint64_t total = binomial(m, n);
  if (total > opts.max_spark_subsets)
    throw std::invalid_argument("full spark test would check C(" + std::to_string(m) + "," +
                                std::to_string(n) + ") subsets, over the budget of " +
                                std::to_string(opts.max_spark_subsets));
  FullSparkResult out;
  for_each_subset(m, n, [&](std::span<const std::size_t> idx) {
    ++out.checked_subsets;
    if (numerical_rank(frame.columns(idx), tol) < n) {
      out.full_spark = false;
      out.dependent_subset.emplace(idx.begin(), idx.end());
      return false;
    }
    return true;
  });
  return out;
}

template <FieldScalar T>
Witness<T> witness_pair(const Frame<T>& frame, const SignPattern& s, const Tolerance& tol) {
  if (s.size() != frame.size()) throw std::invalid_argument("witness_pair: pattern size != M");
  const std::vector<std::size_t> in = s.indices();
  const std::vector<std::size_t> out = s.complement().indices();
  const Vector<T> u = unit_orthogonal_to(frame, in, tol);
  const Vector<T> v = unit_orthogonal_to(frame, out, tol);
  return {add<T>(u, v), subtract<T>(u, v)};
}

template <FieldScalar T>
bool verify_witness(const Frame<T>& frame, const Witness<T>& w, const Tolerance& tol) {
  const MagnitudeVector a = magnitude_map<T>(frame, w.x);
  const MagnitudeVector b = magnitude_map<T>(frame, w.y);
  const double scale_a = norm<double>(a.values);
  if (magnitude_distance(a, b) > tol.residual_eps * std::max(1.0, scale_a)) return false;
  return !ray_equal<T>(w.x, w.y, tol);
}

SignPattern short_frame_split(std::size_t n, std::size_t m) {
  if (m + 2 > 2 * n) throw std::invalid_argument("split requires M <= 2N-2");
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i + n <= m; ++i) mask |= std::uint64_t{1} << i;  // {0..M-N}
  return {m, mask};
}

InjectivityCertificate<double> sharpness_check(std::size_t n, std::uint64_t seed,
                                               const Tolerance& tol) {
  if (n < 2) throw std::invalid_argument("sharpness_check needs N >= 2");
  const RealFrame frame = gen_random<double>(n, 2 * n - 2, seed);
  InjectivityCertificate<double> cert;
  cert.verdict = Verdict::NotInjective;
  cert.failing_subset = short_frame_split(n, frame.size());
  cert.witness = witness_pair(frame, *cert.failing_subset, tol);
  cert.checked_subsets = 1;
  cert.reason = "M <= 2N-2: both halves of the split have fewer than N vectors";
  if (!verify_witness(frame, *cert.witness, tol))
    throw std::logic_error("sharpness_check: witness failed verification");
  return cert;
}

bool complex_size_check(const ComplexFrame& frame) {
  // On C^1 every ray is fixed by its modulus, so one vector suffices.
  return frame.dim() == 1 || frame.size() >= 2 * frame.dim();
}

ComplexRegime complex_regime(std::size_t n, std::size_t m) {
  if (n == 1) return ComplexRegime::GenericInjective;
  if (m < 2 * n) return ComplexRegime::TooSmall;
  if (m + 2 < 4 * n) return ComplexRegime::Unknown;
  return ComplexRegime::GenericInjective;
}

std::string_view complex_regime_name(ComplexRegime r) {
  switch (r) {
    case ComplexRegime::TooSmall: return "too-small";
    case ComplexRegime::Unknown: return "unknown";
    case ComplexRegime::GenericInjective: return "generic-injective";
  }
  return "?";
}

namespace {

// Unit element of W vanishing on the listed coordinates.
Vector<Complex> range_element_vanishing_on(const Matrix<Complex>& basis,
                                           std::span<const std::size_t> rows,
                                           const Tolerance& tol) {
  const Matrix<Complex> kernel = null_space(basis.select_rows(rows), tol);
  if (kernel.cols() == 0) throw std::logic_error("expected a nontrivial range element");
  Vector<Complex> w = basis * kernel.column(0);
  const double nw = norm<Complex>(w);
  for (auto& e : w) e /= nw;
  for (std::size_t r : rows) w[r] = 0.0;
  return w;
}

}  // namespace

Witness<Complex> complex_size_witness(const ComplexFrame& frame, const Tolerance& tol) {
  const std::size_t n = frame.dim();
  const std::size_t m = frame.size();
  if (m + 1 != 2 * n) throw std::invalid_argument("complex_size_witness requires M = 2N-1");
  const Matrix<Complex>& t = frame.analysis_matrix();
  const Matrix<Complex> basis = coefficient_range(frame, tol).basis;
  const std::size_t pivot = n - 1;

  std::vector<std::size_t> tail, head;
  for (std::size_t i = n; i < m; ++i) tail.push_back(i);
  for (std::size_t i = 0; i < pivot; ++i) head.push_back(i);
  const Vector<Complex> x = range_element_vanishing_on(basis, tail, tol);  // support {0..N-1}
  const Vector<Complex> y = range_element_vanishing_on(basis, head, tol);  // support {N-1..M-1}

  const double small = tol.residual_eps;
  Vector<Complex> c1, c2;
  const bool x_only_pivot =
      std::all_of(head.begin(), head.end(), [&](std::size_t i) { return std::abs(x[i]) <= small; });
  if (std::abs(x[pivot]) <= small || std::abs(y[pivot]) <= small) {
    // Disjoint supports already.
    c1 = add<Complex>(x, y);
    c2 = subtract<Complex>(x, y);
  } else if (x_only_pivot) {
    Vector<Complex> yc = subtract<Complex>(y, scale<Complex>(x, y[pivot] / x[pivot]));
    yc[pivot] = 0.0;
    if (norm<Complex>(yc) <= small) {
      // W contains the pivot coordinate vector; any range element orthogonal to it
      // vanishes at the pivot.
      for (std::size_t j = 0; j < basis.cols() && norm<Complex>(yc) <= small; ++j) {
        const Vector<Complex> b = basis.column(j);
        yc = subtract<Complex>(b, scale<Complex>(x, inner<Complex>(b, x)));
        yc[pivot] = 0.0;
      }
    }
    c1 = add<Complex>(x, yc);
    c2 = subtract<Complex>(x, yc);
  } else {
    // z(pivot) = 1, w(pivot) = i: |z + w| = |z - w| entrywise, yet no unimodular c
    // maps one to the other since z is nonzero off the pivot.
    const Vector<Complex> z = scale<Complex>(x, 1.0 / x[pivot]);
    const Vector<Complex> w = scale<Complex>(y, Complex(0.0, 1.0) / y[pivot]);
    c1 = add<Complex>(z, w);
    c2 = subtract<Complex>(z, w);
  }
  return {least_squares<Complex>(t, c1, tol).x, least_squares<Complex>(t, c2, tol).x};
}

template <FieldScalar T>
InjectivityCertificate<T> certify(const Frame<T>& frame, const Tolerance& tol,
                                  const CertifierOptions& opts) {
  const std::size_t n = frame.dim();
  const std::size_t m = frame.size();
  if constexpr (is_complex_v<T>) {
    if (!complex_size_check(frame)) {
      InjectivityCertificate<T> cert;
      cert.verdict = Verdict::NotInjective;
      cert.reason = "complex frames need M >= 2N (got N=" + std::to_string(n) +
                    ", M=" + std::to_string(m) + ")";
      if (m + 1 == 2 * n) {
        cert.witness = complex_size_witness(frame, tol);
      } else {
        cert.failing_subset = short_frame_split(n, m);
        cert.witness = witness_pair(frame, *cert.failing_subset, tol);
        cert.checked_subsets = 1;
      }
      return cert;
    }
    auto cert = complement_property(frame, tol, opts);
    if (cert.verdict == Verdict::NecessaryConditionsPass)
      cert.reason += "; regime " + std::string(complex_regime_name(complex_regime(n, m)));
    return cert;
  } else {
    return complement_property(frame, tol, opts);
  }
}

SpanEquivalenceReport necessary_condition_for_M_2N_minus_1(const RealFrame& frame,
                                                     const Tolerance& tol,
                                                     const CertifierOptions& opts) {
  if (frame.size() + 1 != 2 * frame.dim())
    throw std::invalid_argument("full spark is equivalent to injectivity only at M = 2N-1");
  SpanEquivalenceReport out;
  out.spark = full_spark_test(frame, tol, opts);
  out.certificate = complement_property(frame, tol, opts);
  out.consistent = out.spark.full_spark == (out.certificate.verdict == Verdict::Injective);
  return out;
}

#define FRAMEPHASE_INSTANTIATE(T)                                                            \
  template InjectivityCertificate<T> complement_property<T>(const Frame<T>&, const Tolerance&, \
                                                            const CertifierOptions&);        \
  template FullSparkResult full_spark_test<T>(const Frame<T>&, const Tolerance&,             \
                                              const CertifierOptions&);                      \
  template Witness<T> witness_pair<T>(const Frame<T>&, const SignPattern&, const Tolerance&); \
  template bool verify_witness<T>(const Frame<T>&, const Witness<T>&, const Tolerance&);     \
  template InjectivityCertificate<T> certify<T>(const Frame<T>&, const Tolerance&,           \
                                                const CertifierOptions&);

FRAMEPHASE_INSTANTIATE(double)
FRAMEPHASE_INSTANTIATE(Complex)

#undef FRAMEPHASE_INSTANTIATE

}  // namespace framephase
