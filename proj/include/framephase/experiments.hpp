#pragma once

// Monte-Carlo harness for the genericity, sharpness, dense-interior and
// equivalence statements. Trials use per-trial seeds derived from the
// configured seed, so reports are reproducible regardless of thread count.
// A 100% rate is evidence consistent with a generic statement, not a proof.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "framephase/injectivity.hpp"
#include "framephase/io.hpp"
#include "framephase/reconstruct.hpp"

namespace framephase {

struct ExperimentCell {
  std::size_t n = 0;
  std::size_t m = 0;
  std::string rule;        // e.g. "2N-1"
  std::size_t trials = 0;  // 0: use ExperimentConfig::trials
};

/// Cells (N, a*N + b) for N in [n_min, n_max], labelled like "2N-1".
std::vector<ExperimentCell> cells_from_rule(std::size_t n_min, std::size_t n_max, int a, int b);

struct ExperimentConfig {
  Field field = Field::Real;
  std::vector<ExperimentCell> cells;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  Tolerance tol;
  std::size_t restarts = 20;       // complex reconstruction
  std::size_t max_iters = 2000;    // complex reconstruction
  std::size_t transforms = 5;      // equivalence: invertible maps per frame
  std::size_t constructions = 10;  // dense interior: thin-set witnesses
  bool record_timing = false;      // wall-clock timings make reports non-reproducible

  /// Throws std::invalid_argument if a cell has M < N or N = 0.
  void validate() const;
};

struct CellReport {
  Field field = Field::Real;
  std::size_t n = 0;
  std::size_t m = 0;
  std::string rule;
  std::size_t trials = 0;

  std::size_t injective = 0;              // certified Injective (real) / not ruled out (complex)
  std::size_t not_injective = 0;          // NotInjective verdicts
  std::size_t witnesses_verified = 0;     // NotInjective verdicts whose witness re-verified
  std::size_t recovery_trials = 0;
  std::size_t recovered = 0;              // reconstruction returned the true ray (uniquely, real)
  std::size_t ambiguous = 0;              // real: more than one ray found
  std::size_t agreements = 0;             // equivalence: verdict comparisons that matched
  std::size_t comparisons = 0;

  std::optional<double> inj_rate;
  std::optional<double> rec_rate;
  std::optional<double> agreement_rate;
  std::optional<double> mean_ms;
};

/// Adversarial ambiguous pair built from the thin-set recipe.
struct ThinSetWitness {
  Matrix<double> frame;                    // synthesis matrix of the random frame used
  std::vector<std::size_t> basis_indices;  // frame vectors mapped to the canonical basis
  std::size_t k0 = 0;                      // non-basis vector with all entries nonzero
  std::vector<std::size_t> flipped;        // S: coordinates negated by D_S
  Vector<double> x;                        // signals for the original frame
  Vector<double> y;
  bool verified = false;                   // equal magnitudes, distinct rays
  std::size_t rays_found = 0;              // enumerate_ambiguities at x
};

struct ExperimentReport {
  std::string name;
  ExperimentConfig config;
  std::vector<CellReport> cells;
  std::vector<ThinSetWitness> thin_set;
};

/// Real frames per cell: certified-Injective rate, NotInjective witnesses re-verified,
/// and the unique-recovery rate of one random signal per trial.
ExperimentReport run_real_genericity(const ExperimentConfig& cfg);

/// Requires N < M < 2N-1. Random (frame, x) unique-recovery rate, plus cfg.constructions
/// thin-set pairs (x, D_S x) built in canonical-basis coordinates and mapped back.
ExperimentReport run_dense_interior_real(std::size_t n, std::size_t m, const ExperimentConfig& cfg);

/// Complex frames: cells with M < 2N report the size-check failure rate (inj_rate 0 means
/// every frame was ruled out); other cells report heuristic recovery of random signals.
ExperimentReport run_complex_genericity(const ExperimentConfig& cfg);

/// Verdicts of F, R F (cfg.transforms random R), the canonical dual and canonical Parseval
/// frames must agree; NotInjective witnesses are pushed through R^{-*} and re-verified.
ExperimentReport run_equivalence_invariance(const ExperimentConfig& cfg);

io::Json report_to_json(const ExperimentReport& report);
/// Header field,N,M,trials,inj_rate,rec_rate,mean_ms,seed; unmeasured rates are left empty.
std::string report_to_csv(const ExperimentReport& report);

/// Named presets used by the CLI: real-genericity, sharpness, dense-interior, complex,
/// equivalence. Throws std::invalid_argument on an unknown name.
ExperimentReport run_preset(const std::string& preset, std::uint64_t seed,
                            std::optional<std::size_t> trials = std::nullopt,
                            bool record_timing = false);

const std::vector<std::string>& preset_names();

}  // namespace framephase
