#include "framephase/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "framephase/random.hpp"

namespace framephase {

std::string_view status_name(ReconstructionStatus s) {
  switch (s) {
    case ReconstructionStatus::Unique: return "Unique";
    case ReconstructionStatus::Ambiguous: return "Ambiguous";
    case ReconstructionStatus::NoSolution: return "NoSolution";
    case ReconstructionStatus::HeuristicSuccess: return "HeuristicSuccess";
    case ReconstructionStatus::HeuristicFail: return "HeuristicFail";
  }
  return "?";
}

template <FieldScalar T>
bool ray_less(const Ray<T>& a, const Ray<T>& b) {
  const auto& x = a.representative();
  const auto& y = b.representative();
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (real_part(x[i]) != real_part(y[i])) return real_part(x[i]) < real_part(y[i]);
    if constexpr (is_complex_v<T>) {
      if (x[i].imag() != y[i].imag()) return x[i].imag() < y[i].imag();
    }
  }
  return x.size() < y.size();
}

namespace {

template <FieldScalar T>
void check_measurement(const Frame<T>& frame, const MagnitudeVector& a) {
  if (a.size() != frame.size())
    throw std::invalid_argument("measurement has " + std::to_string(a.size()) +
                                " magnitudes but the frame has M = " +
                                std::to_string(frame.size()));
  a.validate();
}

template <FieldScalar T>
void sort_rays(ReconstructionResult<T>& r) {
  std::vector<std::size_t> order(r.rays.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return ray_less(r.rays[i], r.rays[j]); });
  std::vector<Ray<T>> rays;
  std::vector<double> residuals;
  for (std::size_t i : order) {
    rays.push_back(r.rays[i]);
    residuals.push_back(r.residuals[i]);
  }
  r.rays = std::move(rays);
  r.residuals = std::move(residuals);
}

class SignSearch {
 public:
  SignSearch(const RealFrame& frame, const MagnitudeVector& a, const Tolerance& tol,
             const RealSearchOptions& opts)
      : frame_(frame), a_(a.values), tol_(tol), opts_(opts) {
    const double scale = norm<double>(a_);
    threshold_ = tol.residual_eps * (1.0 + scale);
    order_.resize(a_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t i, std::size_t j) { return a_[i] > a_[j]; });
    sign_free_.resize(a_.size());
    for (std::size_t i = 0; i < a_.size(); ++i)
      sign_free_[i] = a_[i] <= tol.residual_eps * scale;
    // prefix_bases_[d]: orthonormal basis of the span of analysis rows order_[0..d].
    const Matrix<double>& t = frame.analysis_matrix();
    for (std::size_t d = 0; d < order_.size(); ++d) {
      const std::span<const std::size_t> rows(order_.data(), d + 1);
      prefix_bases_.push_back(range_basis(t.select_rows(rows), tol));
    }
    signed_.assign(a_.size(), 0.0);
  }

  ReconstructionResult<double> run() {
    descend(0);
    result_.status = result_.rays.empty()       ? ReconstructionStatus::NoSolution
                     : result_.rays.size() == 1 ? ReconstructionStatus::Unique
                                                : ReconstructionStatus::Ambiguous;
    sort_rays(result_);
    return std::move(result_);
  }

 private:
  // Least-squares residual of the signed prefix of length depth+1.
  double prefix_residual(std::size_t depth) const {
    const Matrix<double>& q = prefix_bases_[depth];
    coords_.assign(q.cols(), 0.0);
    for (std::size_t j = 0; j < q.cols(); ++j)
      for (std::size_t i = 0; i <= depth; ++i) coords_[j] += q(i, j) * signed_[i];
    double r2 = 0.0;
    for (std::size_t i = 0; i <= depth; ++i) {
      double proj = 0.0;
      for (std::size_t j = 0; j < q.cols(); ++j) proj += q(i, j) * coords_[j];
      const double d = signed_[i] - proj;
      r2 += d * d;
    }
    return std::sqrt(r2);
  }

  void descend(std::size_t depth) {
    if (result_.truncated) return;
    if (depth == order_.size()) {
      accept_leaf();
      return;
    }
    const std::size_t idx = order_[depth];
    const int branches = (depth == 0 || sign_free_[idx]) ? 1 : 2;
    for (int b = 0; b < branches; ++b) {
      if (result_.patterns_explored >= opts_.max_patterns) {
        result_.truncated = true;
        return;
      }
      ++result_.patterns_explored;
      signed_[depth] = b == 0 ? a_[idx] : -a_[idx];
      if (prefix_residual(depth) > threshold_) continue;
      descend(depth + 1);
    }
  }

  void accept_leaf() {
    std::vector<double> target(a_.size());
    for (std::size_t d = 0; d < order_.size(); ++d) target[order_[d]] = signed_[d];
    const auto ls = least_squares<double>(frame_.analysis_matrix(), target, tol_);
    const MagnitudeVector got = magnitude_map<double>(frame_, ls.x);
    const double residual = magnitude_distance(got, MagnitudeVector{a_});
    if (residual > threshold_) return;
    for (const auto& r : result_.rays)
      if (ray_equal<double>(r.representative(), ls.x, tol_)) return;
    result_.rays.emplace_back(ls.x, tol_);
    result_.residuals.push_back(residual);
  }

  const RealFrame& frame_;
  std::vector<double> a_;
  Tolerance tol_;
  RealSearchOptions opts_;
  double threshold_ = 0.0;
  std::vector<std::size_t> order_;
  std::vector<bool> sign_free_;
  std::vector<Matrix<double>> prefix_bases_;
  std::vector<double> signed_;  // signed magnitudes in search order
  mutable std::vector<double> coords_;
  ReconstructionResult<double> result_;
};

}  // namespace

ReconstructionResult<double> reconstruct_real(const RealFrame& frame, const MagnitudeVector& a,
                                              const Tolerance& tol,
                                              const RealSearchOptions& opts) {
  check_measurement(frame, a);
  if (norm<double>(a.values) <= tol.residual_eps) {
    ReconstructionResult<double> out;
    out.status = ReconstructionStatus::Unique;
    out.rays.emplace_back(Vector<double>(frame.dim(), 0.0), tol);
    out.residuals.push_back(norm<double>(a.values));
    return out;
  }
  return SignSearch(frame, a, tol, opts).run();
}

ReconstructionResult<Complex> reconstruct_complex(const ComplexFrame& frame,
                                                  const MagnitudeVector& a,
                                                  const ComplexSearchOptions& opts,
                                                  const Tolerance& tol,
                                                  std::vector<ErrorReductionTrace>* traces) {
  check_measurement(frame, a);
  const std::size_t m = frame.size();
  const double scale = norm<double>(a.values);
  const double threshold = tol.residual_eps * (1.0 + scale);
  ReconstructionResult<Complex> out;
  if (scale <= tol.residual_eps) {
    out.status = ReconstructionStatus::HeuristicSuccess;
    out.rays.emplace_back(Vector<Complex>(frame.dim(), 0.0), tol);
    out.residuals.push_back(scale);
    return out;
  }

  const Matrix<Complex> basis = coefficient_range(frame, tol).basis;
  const Matrix<Complex> basis_adj = basis.adjoint();
  out.best_residual = std::numeric_limits<double>::infinity();
  Vector<Complex> c(m), p(m);
  for (std::size_t restart = 0; restart < opts.restarts; ++restart) {
    out.restarts_used = restart + 1;
    Rng rng(derive_seed(opts.seed, restart));
    for (std::size_t i = 0; i < m; ++i) c[i] = a.values[i] * unimodular<Complex>(rng);
    ErrorReductionTrace trace;
    for (std::size_t iter = 0; iter < opts.max_iters; ++iter) {
      p = basis * (basis_adj * c);
      ++out.patterns_explored;
      double dist2 = 0.0, meas2 = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        dist2 += std::norm(p[i] - c[i]);
        const double d = std::abs(p[i]) - a.values[i];
        meas2 += d * d;
      }
      trace.distances.push_back(std::sqrt(dist2));
      const double meas = std::sqrt(meas2);
      out.best_residual = std::min(out.best_residual, meas);
      if (meas <= threshold) {
        const auto ls = least_squares<Complex>(frame.analysis_matrix(), p, tol);
        const double verified =
            magnitude_distance(magnitude_map<Complex>(frame, ls.x), a);
        if (verified <= threshold) {
          out.status = ReconstructionStatus::HeuristicSuccess;
          out.rays.emplace_back(ls.x, tol);
          out.residuals.push_back(verified);
          out.best_residual = verified;
          if (traces) traces->push_back(std::move(trace));
          return out;
        }
      }
      for (std::size_t i = 0; i < m; ++i) {
        const double mag = std::abs(p[i]);
        if (mag > tol.residual_eps) c[i] = p[i] * (a.values[i] / mag);
      }
    }
    if (traces) traces->push_back(std::move(trace));
  }
  out.status = ReconstructionStatus::HeuristicFail;
  return out;
}

std::vector<Ray<double>> enumerate_ambiguities(const RealFrame& frame, std::span<const double> x,
                                               const Tolerance& tol) {
  return reconstruct_real(frame, magnitude_map<double>(frame, x), tol).rays;
}

template bool ray_less<double>(const Ray<double>&, const Ray<double>&);
template bool ray_less<Complex>(const Ray<Complex>&, const Ray<Complex>&);

}  // namespace framephase
