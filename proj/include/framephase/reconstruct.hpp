#pragma once

// Recovering a ray from magnitude-only measurements. Real frames: exact
// depth-first search over sign patterns, pruned by least-squares consistency
// with the coefficient range. Complex frames: error-reduction alternating
// projections with random restarts.

#include <cstdint>
#include <string_view>
#include <vector>

#include "framephase/magnitude.hpp"

namespace framephase {

enum class ReconstructionStatus { Unique, Ambiguous, NoSolution, HeuristicSuccess, HeuristicFail };

std::string_view status_name(ReconstructionStatus s);

template <FieldScalar T>
struct ReconstructionResult {
  ReconstructionStatus status = ReconstructionStatus::NoSolution;
  std::vector<Ray<T>> rays;          // sorted by canonical representative
  std::vector<double> residuals;     // ||M(ray) - a|| per ray
  std::uint64_t patterns_explored = 0;
  std::size_t restarts_used = 0;     // complex only
  bool truncated = false;            // search budget exhausted; rays are partial
  double best_residual = 0.0;        // complex: smallest measurement residual reached
};

struct RealSearchOptions {
  std::uint64_t max_patterns = std::uint64_t{1} << 24;  // DFS node budget
};

/// Every ray whose magnitudes match a. The sign of the largest entry is fixed (global
/// sign); entries with a_i <= residual_eps * ||a|| are sign-free. A branch is pruned once
/// its signed prefix has least-squares residual above residual_eps * (1 + ||a||) against
/// the matching rows of the analysis matrix. Throws std::invalid_argument if the frame
/// and measurement sizes differ or a has a negative entry.
ReconstructionResult<double> reconstruct_real(const RealFrame& frame, const MagnitudeVector& a,
                                              const Tolerance& tol = {},
                                              const RealSearchOptions& opts = {});

struct ComplexSearchOptions {
  std::size_t restarts = 20;
  std::size_t max_iters = 2000;
  std::uint64_t seed = 0;
};

/// Per-restart trace of ||P_W c_k - c_k||, the quantity error reduction never increases.
struct ErrorReductionTrace {
  std::vector<double> distances;
};

ReconstructionResult<Complex> reconstruct_complex(const ComplexFrame& frame,
                                                  const MagnitudeVector& a,
                                                  const ComplexSearchOptions& opts = {},
                                                  const Tolerance& tol = {},
                                                  std::vector<ErrorReductionTrace>* traces = nullptr);

/// All rays sharing the magnitudes of x (always includes x itself).
std::vector<Ray<double>> enumerate_ambiguities(const RealFrame& frame, std::span<const double> x,
                                               const Tolerance& tol = {});

/// Lexicographic order on canonical representatives (real part, then imaginary part).
template <FieldScalar T>
bool ray_less(const Ray<T>& a, const Ray<T>& b);

}  // namespace framephase
