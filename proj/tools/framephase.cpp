// framephase: file-based front end for frame generation, injectivity
// certification, magnitude measurement, reconstruction and experiments.
//
// Exit codes: 0 success, 1 error, 2 NotInjective, 3 Ambiguous,
// 4 NoSolution / HeuristicFail / no witness.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "framephase/experiments.hpp"
#include "framephase/io.hpp"

namespace fp = framephase;
namespace io = framephase::io;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kNotInjective = 2;
constexpr int kAmbiguous = 3;
constexpr int kNoSolution = 4;

struct GenArgs {
  std::string field = "real";
  std::size_t n = 0;
  std::size_t m = 0;
  std::string kind = "random";
  std::uint64_t seed = 0;
  std::string out;
  std::string window;
  std::size_t hop = 2;
  std::size_t fft_size = 4;
};

struct CertifyArgs {
  std::string frame;
  double tol = 1e-8;
};

struct MeasureArgs {
  std::string frame;
  std::string x;
  std::string x_file;
  std::string out;
};

struct ReconstructArgs {
  std::string frame;
  std::string measurement;
  std::size_t restarts = 20;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  std::size_t max_iters = 2000;
};

struct WitnessArgs {
  std::string frame;
  std::vector<std::size_t> subset;
  double tol = 1e-8;
};

struct ExperimentArgs {
  std::string preset;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::optional<std::size_t> trials;
  bool timing = false;
};

fp::Tolerance tolerance(double residual_eps) {
  fp::Tolerance tol;
  tol.residual_eps = residual_eps;
  tol.validate();
  return tol;
}

void print_json(const io::Json& j) { std::cout << j.dump(2) << '\n'; }

// Sine-squared window without zero endpoints, so every sample under it is covered.
std::vector<double> default_window(std::size_t len) {
  std::vector<double> g(len);
  for (std::size_t t = 0; t < len; ++t) {
    const double s = std::sin(std::numbers::pi * (static_cast<double>(t) + 0.5) / static_cast<double>(len));
    g[t] = s * s;
  }
  return g;
}

template <fp::FieldScalar T>
fp::AnyFrame generate(const GenArgs& a) {
  if (a.m < a.n)
    throw std::invalid_argument("M >= N required (got N=" + std::to_string(a.n) +
                                ", M=" + std::to_string(a.m) + ")");
  if (a.kind == "random") return fp::gen_random<T>(a.n, a.m, a.seed);
  if (a.kind == "full-spark") return fp::gen_full_spark<T>(a.n, a.m, a.seed);
  if (a.kind == "repeated-tail") return fp::gen_repeated_tail<T>(a.n, a.m, a.seed);
  throw std::invalid_argument("unknown kind \"" + a.kind + "\"");
}

int cmd_gen(const GenArgs& a) {
  if (a.n == 0) throw std::invalid_argument("N >= 1 required");
  auto make = [&]() -> fp::AnyFrame {
    if (a.kind != "gabor") {
      if (a.field == "real") return generate<double>(a);
      return generate<fp::Complex>(a);
    }
    if (a.field != "complex") throw std::invalid_argument("gabor frames are complex; pass --field complex");
    const std::vector<double> window = a.window.empty()
                                           ? default_window(a.fft_size)
                                           : io::require_real(io::parse_signal_list(a.window), "--window");
    fp::ComplexFrame f = fp::gen_windowed_fourier(window, a.n, a.hop, a.fft_size);
    if (a.m != 0 && a.m != f.size())
      throw std::invalid_argument("gabor frame has M = " + std::to_string(f.size()) + ", not --m " +
                                  std::to_string(a.m));
    return f;
  };
  const fp::AnyFrame frame = make();

  const fp::FrameBounds b =
      std::visit([](const auto& f) { return fp::frame_operator(f).bounds; }, frame);
  if (a.out.empty()) {
    print_json(io::frame_to_json(frame));
  } else {
    io::write_frame_file(a.out, frame);
  }
  std::cerr << "frame bounds: A = " << io::format_double(b.lower)
            << ", B = " << io::format_double(b.upper) << '\n';
  return kOk;
}

int cmd_certify(const CertifyArgs& a) {
  const fp::Tolerance tol = tolerance(a.tol);
  const fp::AnyFrame frame = io::read_frame_file(a.frame, tol);
  return std::visit(
      [&](const auto& f) {
        const auto cert = fp::certify(f, tol);
        print_json(io::certificate_to_json(cert));
        std::cerr << fp::verdict_name(cert.verdict) << ": " << cert.reason << '\n';
        return cert.verdict == fp::Verdict::NotInjective ? kNotInjective : kOk;
      },
      frame);
}

int cmd_measure(const MeasureArgs& a) {
  const fp::AnyFrame frame = io::read_frame_file(a.frame);
  fp::Vector<fp::Complex> x;
  if (!a.x_file.empty()) {
    io::Json j = io::read_json_file(a.x_file);
    if (j.is_object() && j.contains("x")) j = j["x"];
    x = io::complex_vector_from_json(j, a.x_file);
  } else {
    x = io::parse_signal_list(a.x);
  }
  const fp::MagnitudeVector mags = std::visit(
      [&](const auto& f) {
        using T = typename std::decay_t<decltype(f)>::value_type;
        if (x.size() != f.dim())
          throw std::invalid_argument("signal has length " + std::to_string(x.size()) +
                                      " but the frame lives in dimension " + std::to_string(f.dim()));
        if constexpr (fp::is_complex_v<T>) {
          return fp::magnitude_map<T>(f, x);
        } else {
          const auto xr = io::require_real(x, "signal");
          return fp::magnitude_map<T>(f, xr);
        }
      },
      frame);
  if (a.out.empty()) {
    print_json(io::measurement_to_json(mags));
  } else {
    io::write_measurement_file(a.out, mags);
  }
  return kOk;
}

int cmd_reconstruct(const ReconstructArgs& a) {
  const fp::Tolerance tol = tolerance(a.tol);
  const fp::AnyFrame frame = io::read_frame_file(a.frame, tol);
  const fp::MagnitudeVector mags = io::read_measurement_file(a.measurement);
  return std::visit(
      [&](const auto& f) {
        using T = typename std::decay_t<decltype(f)>::value_type;
        fp::ReconstructionStatus status;
        if constexpr (fp::is_complex_v<T>) {
          const auto r = fp::reconstruct_complex(f, mags, {a.restarts, a.max_iters, a.seed}, tol);
          print_json(io::result_to_json(r));
          status = r.status;
        } else {
          const auto r = fp::reconstruct_real(f, mags, tol);
          print_json(io::result_to_json(r));
          status = r.status;
        }
        std::cerr << fp::status_name(status) << '\n';
        switch (status) {
          case fp::ReconstructionStatus::Unique:
          case fp::ReconstructionStatus::HeuristicSuccess:
            return kOk;
          case fp::ReconstructionStatus::Ambiguous:
            return kAmbiguous;
          default:
            return kNoSolution;
        }
      },
      frame);
}

int cmd_witness(const WitnessArgs& a) {
  const fp::Tolerance tol = tolerance(a.tol);
  const fp::AnyFrame frame = io::read_frame_file(a.frame, tol);
  return std::visit(
      [&](const auto& f) {
        using T = typename std::decay_t<decltype(f)>::value_type;
        std::optional<fp::SignPattern> subset;
        std::optional<fp::Witness<T>> w;
        if (!a.subset.empty()) {
          std::vector<std::size_t> idx;
          for (std::size_t i : a.subset) {
            if (i == 0 || i > f.size())
              throw std::invalid_argument("subset index " + std::to_string(i) + " outside 1.." +
                                          std::to_string(f.size()));
            idx.push_back(i - 1);
          }
          subset = fp::SignPattern::from_indices(f.size(), idx);
          w = fp::witness_pair(f, *subset, tol);
        } else {
          const auto cert = fp::certify(f, tol);
          if (!cert.witness) {
            std::cerr << "no witness: " << cert.reason << '\n';
            return kNoSolution;
          }
          subset = cert.failing_subset;
          w = cert.witness;
        }
        io::Json j;
        if (subset) {
          io::Json idx = io::Json::array();
          for (std::size_t i : subset->indices()) idx.push_back(i + 1);
          j["subset"] = idx;
        } else {
          j["subset"] = nullptr;
        }
        j["x"] = io::vector_to_json<T>(w->x);
        j["y"] = io::vector_to_json<T>(w->y);
        j["verified"] = fp::verify_witness(f, *w, tol);
        print_json(j);
        return kOk;
      },
      frame);
}

std::string rate_cell(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", *v);
  return buf;
}

int cmd_experiment(const ExperimentArgs& a) {
  const fp::ExperimentReport report = fp::run_preset(a.preset, a.seed, a.trials, a.timing);
  std::filesystem::create_directories(a.out_dir);
  const std::filesystem::path base = std::filesystem::path(a.out_dir) / a.preset;
  io::write_json_file(base.string() + ".json", fp::report_to_json(report));
  io::write_text_file(base.string() + ".csv", fp::report_to_csv(report));

  std::fprintf(stderr, "%-8s %3s %3s %6s %8s %8s %8s %10s\n", "field", "N", "M", "trials",
               "inj", "rec", "agree", "witnesses");
  for (const auto& c : report.cells) {
    std::fprintf(stderr, "%-8s %3zu %3zu %6zu %8s %8s %8s %10zu\n",
                 std::string(fp::field_name(c.field)).c_str(), c.n, c.m, c.trials,
                 rate_cell(c.inj_rate).c_str(), rate_cell(c.rec_rate).c_str(),
                 rate_cell(c.agreement_rate).c_str(), c.witnesses_verified);
  }
  if (!report.thin_set.empty()) {
    std::size_t verified = 0;
    for (const auto& w : report.thin_set) verified += w.verified;
    std::fprintf(stderr, "thin-set pairs verified: %zu/%zu\n", verified, report.thin_set.size());
  }
  std::cerr << "wrote " << base.string() << ".json and .csv\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase retrieval with finite frames"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a frame file");
  g->add_option("--field", gen.field)->check(CLI::IsMember({"real", "complex"}));
  g->add_option("--n", gen.n, "Dimension (signal length for gabor)")->required();
  g->add_option("--m", gen.m, "Number of vectors (derived for gabor)");
  g->add_option("--kind", gen.kind)
      ->check(CLI::IsMember({"random", "full-spark", "repeated-tail", "gabor"}));
  g->add_option("--seed", gen.seed);
  g->add_option("--out", gen.out, "Output file (stdout if omitted)");
  g->add_option("--window", gen.window, "gabor: comma-separated window, length --fft-size");
  g->add_option("--hop", gen.hop, "gabor: shift between windows")->check(CLI::PositiveNumber);
  g->add_option("--fft-size", gen.fft_size, "gabor: DFT length")->check(CLI::PositiveNumber);

  CertifyArgs cert;
  auto* c = app.add_subcommand("certify", "Decide injectivity of the magnitude map");
  c->add_option("frame", cert.frame)->required();
  c->add_option("--tol", cert.tol, "Residual tolerance")->check(CLI::PositiveNumber);

  MeasureArgs meas;
  auto* ms = app.add_subcommand("measure", "Compute magnitudes |<x, f_i>|");
  ms->add_option("frame", meas.frame)->required();
  auto* xo = ms->add_option("--x", meas.x, "Signal as a comma list, e.g. 1,-2 or 1+2i,3");
  auto* xf = ms->add_option("--x-file", meas.x_file, "JSON array signal file");
  xo->excludes(xf);
  xf->excludes(xo);
  ms->add_option("--out", meas.out);

  ReconstructArgs rec;
  auto* r = app.add_subcommand("reconstruct", "Recover rays from magnitudes");
  r->add_option("frame", rec.frame)->required();
  r->add_option("measurement", rec.measurement)->required();
  r->add_option("--restarts", rec.restarts)->check(CLI::PositiveNumber);
  r->add_option("--seed", rec.seed);
  r->add_option("--tol", rec.tol)->check(CLI::PositiveNumber);
  r->add_option("--max-iters", rec.max_iters)->check(CLI::PositiveNumber);

  WitnessArgs wit;
  auto* w = app.add_subcommand("witness", "Print an ambiguous pair");
  w->add_option("frame", wit.frame)->required();
  w->add_option("--subset", wit.subset, "1-based indices of S")->delimiter(',');
  w->add_option("--tol", wit.tol)->check(CLI::PositiveNumber);

  ExperimentArgs exp;
  auto* e = app.add_subcommand("experiment", "Run a Monte-Carlo preset");
  e->add_option("--preset", exp.preset)->required();
  e->add_option("--seed", exp.seed);
  e->add_option("--out-dir", exp.out_dir);
  e->add_option("--trials", exp.trials, "Override the preset trial count");
  e->add_flag("--timing", exp.timing, "Record mean wall time per trial (not reproducible)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kError;
  }

  try {
    if (g->parsed()) return cmd_gen(gen);
    if (c->parsed()) return cmd_certify(cert);
    if (ms->parsed()) {
      if (meas.x.empty() && meas.x_file.empty()) throw std::invalid_argument("pass --x or --x-file");
      return cmd_measure(meas);
    }
    if (r->parsed()) return cmd_reconstruct(rec);
    if (w->parsed()) return cmd_witness(wit);
    if (e->parsed()) return cmd_experiment(exp);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kError;
  }
  return kError;
}
