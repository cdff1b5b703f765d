#include "framephase/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "framephase/parallel.hpp"
#include "framephase/random.hpp"

namespace framephase {

std::vector<ExperimentCell> cells_from_rule(std::size_t n_min, std::size_t n_max, int a, int b) {
  std::string label = std::to_string(a) + "N";
  if (b > 0) label += "+" + std::to_string(b);
  if (b < 0) label += std::to_string(b);
  std::vector<ExperimentCell> cells;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    const long m = a * static_cast<long>(n) + b;
    if (m < 1) throw std::invalid_argument("rule " + label + " gives M < 1");
    cells.push_back({n, static_cast<std::size_t>(m), label, 0});
  }
  return cells;
}

void ExperimentConfig::validate() const {
  tol.validate();
  for (const auto& c : cells) {
    if (c.n == 0) throw std::invalid_argument("experiment cell with N = 0");
    if (c.m < c.n)
      throw std::invalid_argument("experiment cell (N=" + std::to_string(c.n) +
                                  ", M=" + std::to_string(c.m) + ") violates M >= N");
  }
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::size_t cell_trials(const ExperimentCell& cell, const ExperimentConfig& cfg) {
  return cell.trials != 0 ? cell.trials : cfg.trials;
}

CellReport blank_cell(const ExperimentCell& cell, const ExperimentConfig& cfg) {
  CellReport r;
  r.field = cfg.field;
  r.n = cell.n;
  r.m = cell.m;
  r.rule = cell.rule;
  r.trials = cell_trials(cell, cfg);
  return r;
}

double rate(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// Per-trial outcome; aggregated by summation so the report is independent of scheduling.
struct TrialOutcome {
  bool injective = false;
  bool not_injective = false;
  bool witness_verified = false;
  bool recovery_attempted = false;
  bool recovered = false;
  bool ambiguous = false;
  std::size_t comparisons = 0;
  std::size_t agreements = 0;
  std::size_t witnesses_verified = 0;
  double ms = 0.0;
};

void accumulate(CellReport& r, const std::vector<TrialOutcome>& outcomes, bool timing) {
  double total_ms = 0.0;
  for (const auto& o : outcomes) {
    r.injective += o.injective;
    r.not_injective += o.not_injective;
    r.witnesses_verified += o.witness_verified + o.witnesses_verified;
    r.recovery_trials += o.recovery_attempted;
    r.recovered += o.recovered;
    r.ambiguous += o.ambiguous;
    r.comparisons += o.comparisons;
    r.agreements += o.agreements;
    total_ms += o.ms;
  }
  if (timing && !outcomes.empty()) r.mean_ms = total_ms / static_cast<double>(outcomes.size());
}

template <class Fn>
std::vector<TrialOutcome> run_trials(std::size_t trials, bool timing, Fn&& trial) {
  std::vector<TrialOutcome> outcomes(trials);
  parallel_for(trials, [&](std::size_t t) {
    const auto start = Clock::now();
    outcomes[t] = trial(t);
    if (timing) outcomes[t].ms = elapsed_ms(start);
  });
  return outcomes;
}

}  // namespace

ExperimentReport run_real_genericity(const ExperimentConfig& cfg) {
  if (cfg.field != Field::Real) throw std::invalid_argument("run_real_genericity: real field only");
  cfg.validate();
  ExperimentReport report{"real-genericity", cfg, {}, {}};
  for (std::size_t ci = 0; ci < cfg.cells.size(); ++ci) {
    const ExperimentCell& cell = cfg.cells[ci];
    CellReport r = blank_cell(cell, cfg);
    if (r.trials == 0) {
      report.cells.push_back(r);
      continue;
    }
    const auto outcomes = run_trials(r.trials, cfg.record_timing, [&](std::size_t t) {
      TrialOutcome o;
      const std::uint64_t seed = derive_seed(cfg.seed, ci, t);
      const RealFrame frame = gen_random<double>(cell.n, cell.m, seed);
      const auto cert = certify(frame, cfg.tol);
      if (cert.verdict == Verdict::Injective) {
        o.injective = true;
      } else {
        o.not_injective = true;
        o.witness_verified = cert.witness && verify_witness(frame, *cert.witness, cfg.tol);
      }
      Rng rng(derive_seed(seed, 1));
      const Vector<double> x = gaussian_vector<double>(rng, cell.n);
      const auto rec = reconstruct_real(frame, magnitude_map<double>(frame, x), cfg.tol);
      o.recovery_attempted = true;
      o.ambiguous = rec.status == ReconstructionStatus::Ambiguous;
      o.recovered = rec.status == ReconstructionStatus::Unique &&
                    ray_equal<double>(rec.rays.front().representative(), x, cfg.tol);
      return o;
    });
    accumulate(r, outcomes, cfg.record_timing);
    r.inj_rate = rate(r.injective, r.trials);
    r.rec_rate = rate(r.recovered, r.recovery_trials);
    report.cells.push_back(r);
  }
  return report;
}

namespace {

// One thin-set construction on a fresh random frame. Returns nullopt when the frame has
// no non-basis vector with all entries nonzero in canonical-basis coordinates.
std::optional<ThinSetWitness> build_thin_set_pair(std::size_t n, std::size_t m, std::uint64_t seed,
                                                  const Tolerance& tol) {
  Rng rng(seed);
  const RealFrame frame = gen_random<double>(n, m, derive_seed(seed, 7));

  ThinSetWitness w;
  w.frame = frame.synthesis_matrix();
  w.basis_indices.resize(n);
  std::iota(w.basis_indices.begin(), w.basis_indices.end(), std::size_t{0});
  const Matrix<double> basis_block = frame.columns(w.basis_indices);
  if (numerical_rank(basis_block, tol) < n) return std::nullopt;
  const Matrix<double> r = inverse(basis_block, tol);
  const RealFrame similar = apply_invertible(frame, r, tol);  // contains e_1..e_N

  std::vector<std::size_t> others;
  for (std::size_t k = n; k < m; ++k) others.push_back(k);
  const auto k0 = std::find_if(others.begin(), others.end(), [&](std::size_t k) {
    const Vector<double> g = similar.vector(k);
    const double scale = norm<double>(g);
    return std::all_of(g.begin(), g.end(), [&](double e) { return std::abs(e) > 1e-6 * scale; });
  });
  if (k0 == others.end()) return std::nullopt;
  w.k0 = *k0;

  // |S| in [M-N+1, N-1]: enough flipped coordinates for x_S to survive the M-N
  // orthogonality constraints, and at least one unflipped coordinate.
  const std::size_t lo = m - n + 1;
  const std::size_t hi = n - 1;
  const std::size_t size = std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  std::vector<std::size_t> coords(n);
  std::iota(coords.begin(), coords.end(), std::size_t{0});
  std::shuffle(coords.begin(), coords.end(), rng);
  w.flipped.assign(coords.begin(), coords.begin() + static_cast<std::ptrdiff_t>(size));
  std::sort(w.flipped.begin(), w.flipped.end());
  std::vector<double> d(n, 1.0);
  for (std::size_t i : w.flipped) d[i] = -1.0;

  // x orthogonal to (I - D_S) g_k for every non-basis g_k, so <x, g_k> = <D_S x, g_k>.
  Matrix<double> constraints(others.size(), n);
  for (std::size_t row = 0; row < others.size(); ++row) {
    const Vector<double> g = similar.vector(others[row]);
    for (std::size_t i = 0; i < n; ++i) constraints(row, i) = (1.0 - d[i]) * g[i];
  }
  const Matrix<double> kernel = null_space(constraints, tol);
  const Vector<double> xg = kernel * gaussian_vector<double>(rng, kernel.cols());
  Vector<double> yg(n);
  for (std::size_t i = 0; i < n; ++i) yg[i] = d[i] * xg[i];

  // M^G(x) = M^F(R^T x).
  const Matrix<double> rt = r.transpose();
  w.x = rt * xg;
  w.y = rt * yg;
  w.verified = verify_witness(frame, Witness<double>{w.x, w.y}, tol);
  w.rays_found = enumerate_ambiguities(frame, w.x, tol).size();
  return w;
}

}  // namespace

ExperimentReport run_dense_interior_real(std::size_t n, std::size_t m, const ExperimentConfig& cfg) {
  if (!(n < m && m + 1 < 2 * n))
    throw std::invalid_argument("dense-interior experiment needs N < M < 2N-1 (got N=" +
                                std::to_string(n) + ", M=" + std::to_string(m) + ")");
  ExperimentConfig used = cfg;
  used.field = Field::Real;
  used.cells = {{n, m, "fixed", 0}};
  used.validate();
  ExperimentReport report{"dense-interior", used, {}, {}};

  CellReport r = blank_cell(used.cells.front(), used);
  const auto outcomes = run_trials(r.trials, used.record_timing, [&](std::size_t t) {
    TrialOutcome o;
    const std::uint64_t seed = derive_seed(used.seed, 0, t);
    const RealFrame frame = gen_random<double>(n, m, seed);
    Rng rng(derive_seed(seed, 1));
    const Vector<double> x = gaussian_vector<double>(rng, n);
    const auto rays = enumerate_ambiguities(frame, x, used.tol);
    o.recovery_attempted = true;
    o.ambiguous = rays.size() > 1;
    o.recovered = rays.size() == 1 && ray_equal<double>(rays.front().representative(), x, used.tol);
    return o;
  });
  accumulate(r, outcomes, used.record_timing);
  r.rec_rate = rate(r.recovered, r.recovery_trials);
  report.cells.push_back(r);

  std::vector<std::optional<ThinSetWitness>> built(used.constructions);
  parallel_for(used.constructions, [&](std::size_t c) {
    for (std::uint64_t attempt = 0; !built[c]; ++attempt)
      built[c] = build_thin_set_pair(n, m, derive_seed(used.seed, 1000 + c, attempt), used.tol);
  });
  for (auto& w : built) report.thin_set.push_back(std::move(*w));
  return report;
}

ExperimentReport run_complex_genericity(const ExperimentConfig& cfg) {
  if (cfg.field != Field::Complex)
    throw std::invalid_argument("run_complex_genericity: complex field only");
  cfg.validate();
  ExperimentReport report{"complex", cfg, {}, {}};
  Tolerance compare = cfg.tol;
  compare.residual_eps = std::max(cfg.tol.residual_eps, 1e-6);

  for (std::size_t ci = 0; ci < cfg.cells.size(); ++ci) {
    const ExperimentCell& cell = cfg.cells[ci];
    CellReport r = blank_cell(cell, cfg);
    const bool too_small = complex_regime(cell.n, cell.m) == ComplexRegime::TooSmall;
    const auto outcomes = run_trials(r.trials, cfg.record_timing, [&](std::size_t t) {
      TrialOutcome o;
      const std::uint64_t seed = derive_seed(cfg.seed, ci, t);
      const ComplexFrame frame = gen_random<Complex>(cell.n, cell.m, seed);
      if (too_small) {
        const auto cert = certify(frame, cfg.tol);
        o.not_injective = cert.verdict == Verdict::NotInjective;
        o.witness_verified = cert.witness && verify_witness(frame, *cert.witness, cfg.tol);
        return o;
      }
      const auto cert = certify(frame, cfg.tol);
      o.injective = cert.verdict != Verdict::NotInjective;
      o.not_injective = !o.injective;
      if (o.not_injective)
        o.witness_verified = cert.witness && verify_witness(frame, *cert.witness, cfg.tol);
      Rng rng(derive_seed(seed, 1));
      const Vector<Complex> x = gaussian_vector<Complex>(rng, cell.n);
      const MagnitudeVector a = magnitude_map<Complex>(frame, x);
      const auto rec = reconstruct_complex(
          frame, a, {cfg.restarts, cfg.max_iters, derive_seed(seed, 2)}, cfg.tol);
      o.recovery_attempted = true;
      if (rec.status == ReconstructionStatus::HeuristicSuccess) {
        const auto& ray = rec.rays.front().representative();
        const double remeasured =
            magnitude_distance(magnitude_map<Complex>(frame, ray), a);
        o.recovered = remeasured <= compare.residual_eps * (1.0 + norm<double>(a.values)) &&
                      ray_equal<Complex>(ray, x, compare);
      }
      return o;
    });
    accumulate(r, outcomes, cfg.record_timing);
    r.inj_rate = rate(r.injective, r.trials);
    if (!too_small) r.rec_rate = rate(r.recovered, r.recovery_trials);
    report.cells.push_back(r);
  }
  return report;
}

ExperimentReport run_equivalence_invariance(const ExperimentConfig& cfg) {
  if (cfg.field != Field::Real)
    throw std::invalid_argument("run_equivalence_invariance: real field only");
  cfg.validate();
  ExperimentReport report{"equivalence", cfg, {}, {}};
  for (std::size_t ci = 0; ci < cfg.cells.size(); ++ci) {
    const ExperimentCell& cell = cfg.cells[ci];
    CellReport r = blank_cell(cell, cfg);
    const auto outcomes = run_trials(r.trials, cfg.record_timing, [&](std::size_t t) {
      TrialOutcome o;
      const std::uint64_t seed = derive_seed(cfg.seed, ci, t);
      const RealFrame frame = gen_random<double>(cell.n, cell.m, seed);
      const auto base = certify(frame, cfg.tol);
      o.injective = base.verdict == Verdict::Injective;
      o.not_injective = !o.injective;
      if (o.not_injective)
        o.witness_verified = base.witness && verify_witness(frame, *base.witness, cfg.tol);

      auto compare = [&](const RealFrame& other) {
        ++o.comparisons;
        if (certify(other, cfg.tol).verdict == base.verdict) ++o.agreements;
      };
      Rng rng(derive_seed(seed, 1));
      for (std::size_t k = 0; k < cfg.transforms; ++k) {
        Matrix<double> rmat = gaussian_matrix<double>(rng, cell.n, cell.n);
        while (numerical_rank(rmat, cfg.tol) < cell.n) rmat = gaussian_matrix<double>(rng, cell.n, cell.n);
        const RealFrame moved = apply_invertible(frame, rmat, cfg.tol);
        compare(moved);
        if (base.witness) {
          // <x', R f> = <R^T x', f>, so x' = R^{-T} x reproduces the magnitudes.
          const Matrix<double> back = inverse(rmat, cfg.tol).transpose();
          const Witness<double> mapped{back * base.witness->x, back * base.witness->y};
          if (verify_witness(moved, mapped, cfg.tol)) ++o.witnesses_verified;
        }
      }
      compare(canonical_dual(frame, cfg.tol));
      compare(canonical_parseval(frame, cfg.tol));
      return o;
    });
    accumulate(r, outcomes, cfg.record_timing);
    r.inj_rate = rate(r.injective, r.trials);
    r.agreement_rate = rate(r.agreements, r.comparisons);
    report.cells.push_back(r);
  }
  return report;
}

io::Json report_to_json(const ExperimentReport& report) {
  using io::Json;
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  Json j;
  j["experiment"] = report.name;
  j["seed"] = report.config.seed;
  j["trials"] = report.config.trials;
  j["tolerance"] = {{"rank_eps", report.config.tol.rank_eps},
                    {"residual_eps", report.config.tol.residual_eps}};
  Json cells = Json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"field", std::string(field_name(c.field))},
                     {"n", c.n},
                     {"m", c.m},
                     {"rule", c.rule},
                     {"trials", c.trials},
                     {"injective", c.injective},
                     {"not_injective", c.not_injective},
                     {"witnesses_verified", c.witnesses_verified},
                     {"recovery_trials", c.recovery_trials},
                     {"recovered", c.recovered},
                     {"ambiguous", c.ambiguous},
                     {"comparisons", c.comparisons},
                     {"agreements", c.agreements},
                     {"inj_rate", opt(c.inj_rate)},
                     {"rec_rate", opt(c.rec_rate)},
                     {"agreement_rate", opt(c.agreement_rate)},
                     {"mean_ms", opt(c.mean_ms)}});
  }
  j["cells"] = cells;
  Json thin = Json::array();
  for (const auto& w : report.thin_set) {
    Json flipped = Json::array();
    for (std::size_t i : w.flipped) flipped.push_back(i + 1);
    Json basis = Json::array();
    for (std::size_t i : w.basis_indices) basis.push_back(i + 1);
    thin.push_back({{"basis_indices", basis},
                    {"k0", w.k0 + 1},
                    {"flipped", flipped},
                    {"x", w.x},
                    {"y", w.y},
                    {"verified", w.verified},
                    {"rays_found", w.rays_found}});
  }
  j["thin_set"] = thin;
  return j;
}

std::string report_to_csv(const ExperimentReport& report) {
  auto opt = [](const std::optional<double>& v) { return v ? io::format_double(*v) : std::string(); };
  std::ostringstream out;
  out << "field,N,M,trials,inj_rate,rec_rate,mean_ms,seed\n";
  for (const auto& c : report.cells) {
    out << field_name(c.field) << ',' << c.n << ',' << c.m << ',' << c.trials << ','
        << opt(c.inj_rate) << ',' << opt(c.rec_rate) << ',' << opt(c.mean_ms) << ','
        << report.config.seed << '\n';
  }
  return out.str();
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"real-genericity", "sharpness", "dense-interior",
                                                 "complex", "equivalence"};
  return names;
}

ExperimentReport run_preset(const std::string& preset, std::uint64_t seed,
                            std::optional<std::size_t> trials, bool record_timing) {
  ExperimentConfig cfg;
  cfg.seed = seed;
  cfg.record_timing = record_timing;
  if (preset == "real-genericity" || preset == "sharpness") {
    cfg.cells = preset == "sharpness" ? cells_from_rule(2, 5, 2, -2) : cells_from_rule(2, 5, 2, -1);
    cfg.trials = trials.value_or(100);
    auto report = run_real_genericity(cfg);
    report.name = preset;
    return report;
  }
  if (preset == "dense-interior") {
    cfg.trials = trials.value_or(500);
    return run_dense_interior_real(3, 4, cfg);
  }
  if (preset == "complex") {
    cfg.field = Field::Complex;
    cfg.trials = trials.value_or(100);
    const std::size_t big = trials.value_or(200);
    cfg.cells = {{2, 3, "2N-1", 0}, {3, 5, "2N-1", 0}, {2, 4, "2N", big}, {2, 6, "4N-2", big}};
    return run_complex_genericity(cfg);
  }
  if (preset == "equivalence") {
    cfg.trials = trials.value_or(50);
    cfg.cells = {{3, 5, "2N-1", 0}, {3, 4, "2N-2", 0}};
    return run_equivalence_invariance(cfg);
  }
  throw std::invalid_argument("unknown preset \"" + preset + "\"");
}

}  // namespace framephase
