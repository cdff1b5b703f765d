#include "doctest.h"

#include "framephase/injectivity.hpp"
#include "framephase/random.hpp"
#include "framephase/reconstruct.hpp"
#include "oracles.hpp"

using namespace framephase;

namespace {

// Every oracle ray appears among ours and vice versa.
void check_same_rays(const std::vector<Ray<double>>& ours, const std::vector<std::vector<double>>& ref) {
  CHECK(ours.size() == ref.size());
  for (const auto& r : ref) {
    bool found = false;
    for (const auto& o : ours) found = found || oracle::ray_distance(o.representative(), r) < 1e-6 * (1 + oracle::to_eigen(r).norm());
    CHECK(found);
  }
}

}  // namespace

TEST_CASE("injective real frames recover the signal uniquely") {
  Rng rng(4);
  for (std::size_t n = 1; n <= 5; ++n) {
    const RealFrame f = gen_random<double>(n, 2 * n - 1 + n % 2, n);
    REQUIRE(certify(f).verdict == Verdict::Injective);
    for (int t = 0; t < 10; ++t) {
      const Vector<double> x = gaussian_vector<double>(rng, n);
      const auto r = reconstruct_real(f, magnitude_map<double>(f, x));
      CHECK(r.status == ReconstructionStatus::Unique);
      REQUIRE(r.rays.size() == 1);
      CHECK(ray_equal<double>(r.rays[0].representative(), x));
      CHECK(r.residuals[0] <= 1e-8);
      CHECK_FALSE(r.truncated);
    }
  }
}

TEST_CASE("pruned search finds exactly the rays of exhaustive sign enumeration") {
  Rng rng(12);
  for (std::size_t n = 2; n <= 4; ++n) {
    for (std::size_t m = n; m <= 2 * n + 1; ++m) {
      const RealFrame f = gen_random<double>(n, m, 31 * n + m);
      for (int t = 0; t < 5; ++t) {
        const Vector<double> x = gaussian_vector<double>(rng, n);
        const auto a = magnitude_map<double>(f, x);
        const auto r = reconstruct_real(f, a);
        const auto ref = oracle::all_real_preimages(f, a.values);
        check_same_rays(r.rays, ref);
        CHECK(r.status == (ref.size() == 1 ? ReconstructionStatus::Unique : ReconstructionStatus::Ambiguous));
      }
    }
  }
}

TEST_CASE("standard basis measurements are ambiguous") {
  const RealFrame f(Matrix<double>::identity(2));
  const auto r = reconstruct_real(f, MagnitudeVector{{1.0, 1.0}});
  CHECK(r.status == ReconstructionStatus::Ambiguous);
  REQUIRE(r.rays.size() == 2);
  CHECK(ray_less(r.rays[0], r.rays[1]));
  CHECK(r.rays[0].representative() == Vector<double>{1.0, -1.0});
  CHECK(r.rays[1].representative() == Vector<double>{1.0, 1.0});
}

TEST_CASE("doctored magnitudes have no preimage") {
  Rng rng(6);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RealFrame f = gen_random<double>(3, 6, seed);
    const Vector<double> x = gaussian_vector<double>(rng, 3);
    MagnitudeVector a = magnitude_map<double>(f, x);
    a.values[seed % 6] += 1.0;
    CHECK(oracle::all_real_preimages(f, a.values).empty());
    const auto r = reconstruct_real(f, a);
    CHECK(r.status == ReconstructionStatus::NoSolution);
    CHECK(r.rays.empty());
  }
}

TEST_CASE("zero entries are sign-free and the zero signal is its own ray") {
  // x orthogonal to f_3 = (1, -1): a_3 = 0.
  const RealFrame f(Matrix<double>{{1, 0, 1, 2}, {0, 1, -1, 1}});
  const Vector<double> x{1, 1};
  const auto r = reconstruct_real(f, magnitude_map<double>(f, x));
  CHECK(r.status == ReconstructionStatus::Unique);
  CHECK(ray_equal<double>(r.rays[0].representative(), x));

  const auto z = reconstruct_real(f, MagnitudeVector{{0, 0, 0, 0}});
  CHECK(z.status == ReconstructionStatus::Unique);
  CHECK(z.rays[0].is_zero());
}

TEST_CASE("reconstruction input validation") {
  const RealFrame f = gen_random<double>(2, 3, 0);
  CHECK_THROWS_AS(reconstruct_real(f, MagnitudeVector{{1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(reconstruct_real(f, MagnitudeVector{{1, -1, 1}}), std::invalid_argument);
  const ComplexFrame g = gen_random<Complex>(2, 6, 0);
  CHECK_THROWS_AS(reconstruct_complex(g, MagnitudeVector{{1, 1}}), std::invalid_argument);
}

TEST_CASE("search budget truncates") {
  const RealFrame f = gen_random<double>(3, 5, 0);
  Rng rng(0);
  const Vector<double> x = gaussian_vector<double>(rng, 3);
  RealSearchOptions opts;
  opts.max_patterns = 2;
  const auto r = reconstruct_real(f, magnitude_map<double>(f, x), {}, opts);
  CHECK(r.truncated);
}

TEST_CASE("enumerate_ambiguities always contains the signal") {
  Rng rng(2);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RealFrame f = gen_random<double>(3, 4, seed);
    const Vector<double> x = gaussian_vector<double>(rng, 3);
    const auto rays = enumerate_ambiguities(f, x);
    bool found = false;
    for (const auto& r : rays) found = found || ray_equal<double>(r.representative(), x);
    CHECK(found);
  }
}

TEST_CASE("complex error reduction recovers generic signals at M = 4N-2") {
  Rng rng(9);
  int recovered = 0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    const ComplexFrame f = gen_random<Complex>(2, 6, 100 + t);
    const Vector<Complex> x = gaussian_vector<Complex>(rng, 2);
    const auto a = magnitude_map<Complex>(f, x);
    std::vector<ErrorReductionTrace> traces;
    const auto r = reconstruct_complex(f, a, {20, 2000, static_cast<std::uint64_t>(t)}, {}, &traces);
    CHECK(r.restarts_used >= 1);
    CHECK(traces.size() == r.restarts_used);
    for (const auto& tr : traces)
      for (std::size_t k = 1; k < tr.distances.size(); ++k)
        CHECK(tr.distances[k] <= tr.distances[k - 1] + 1e-12);
    if (r.status == ReconstructionStatus::HeuristicSuccess) {
      const auto& y = r.rays[0].representative();
      CHECK(oracle::distance(oracle::magnitudes(f, y), a.values) <= 1e-6);
      recovered += oracle::ray_distance(y, x) < 1e-6;
    }
  }
  CHECK(recovered >= trials * 9 / 10);
}

TEST_CASE("complex reconstruction is deterministic in the seed") {
  const ComplexFrame f = gen_random<Complex>(2, 5, 1);
  Rng rng(1);
  const auto a = magnitude_map<Complex>(f, gaussian_vector<Complex>(rng, 2));
  const auto r1 = reconstruct_complex(f, a, {5, 500, 7});
  const auto r2 = reconstruct_complex(f, a, {5, 500, 7});
  CHECK(r1.status == r2.status);
  CHECK(r1.best_residual == r2.best_residual);
  if (!r1.rays.empty()) CHECK(r1.rays[0].representative() == r2.rays[0].representative());
}

TEST_CASE("complex zero measurement") {
  const ComplexFrame f = gen_random<Complex>(2, 6, 0);
  const auto r = reconstruct_complex(f, MagnitudeVector{std::vector<double>(6, 0.0)});
  CHECK(r.status == ReconstructionStatus::HeuristicSuccess);
  CHECK(r.rays[0].is_zero());
}

TEST_CASE("status names") {
  CHECK(status_name(ReconstructionStatus::Unique) == "Unique");
  CHECK(status_name(ReconstructionStatus::HeuristicFail) == "HeuristicFail");
}
