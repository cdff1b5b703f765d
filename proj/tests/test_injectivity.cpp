#include "doctest.h"

#include "framephase/injectivity.hpp"
#include "framephase/random.hpp"
#include "oracles.hpp"

using namespace framephase;

namespace {

RealFrame standard_basis(std::size_t n) { return RealFrame(Matrix<double>::identity(n)); }

// Frame whose first `copies` vectors are e_1 and the rest are random.
RealFrame clustered(std::size_t n, std::size_t m, std::size_t copies, std::uint64_t seed) {
  Matrix<double> s = gen_random<double>(n, m, seed).synthesis_matrix();
  for (std::size_t i = 0; i < copies; ++i)
    for (std::size_t k = 0; k < n; ++k) s(k, i) = k == 0 ? 1.0 : 0.0;
  return RealFrame(s);
}

void check_witness_independently(const RealFrame& f, const Witness<double>& w) {
  CHECK(oracle::distance(oracle::magnitudes(f, w.x), oracle::magnitudes(f, w.y)) < 1e-8);
  CHECK(oracle::ray_distance(w.x, w.y) > 1e-6);
}

}  // namespace

TEST_CASE("standard basis is not injective; the witness is verified") {
  const auto cert = complement_property(standard_basis(2));
  CHECK(cert.verdict == Verdict::NotInjective);
  REQUIRE(cert.failing_subset);
  CHECK(cert.failing_subset->indices() == std::vector<std::size_t>{0});
  CHECK(cert.checked_subsets == 1);
  REQUIRE(cert.witness);
  CHECK(verify_witness(standard_basis(2), *cert.witness));
  check_witness_independently(standard_basis(2), *cert.witness);
}

TEST_CASE("hand-built injective frame in R^2") {
  const RealFrame f(Matrix<double>{{1, 0, 1}, {0, 1, 1}});
  const auto cert = certify(f);
  CHECK(cert.verdict == Verdict::Injective);
  CHECK_FALSE(cert.witness);
  CHECK(cert.checked_subsets == 4);
}

TEST_CASE("complement check agrees with the subspace-intersection oracle") {
  std::size_t disagreements = 0;
  std::size_t frames = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t m = n; m <= 6; ++m) {
      for (std::uint64_t seed = 0; seed < 4; ++seed) {
        for (const RealFrame& f : {gen_random<double>(n, m, seed), clustered(n, m, std::min(m - n + 1, m - 1), seed)}) {
          if (f.dim() == 1 && f.size() == 1) continue;
          ++frames;
          const auto cert = complement_property(f);
          const auto ref = oracle::real_injectivity(f);
          const bool ours = cert.verdict == Verdict::Injective;
          disagreements += ours != ref.injective;
          CHECK(ours == oracle::complement_property(f));
          if (!ours) {
            REQUIRE(cert.witness);
            check_witness_independently(f, *cert.witness);
            CHECK(cert.failing_subset->mask() == ref.first_failing_mask);
          }
        }
      }
    }
  }
  CHECK(frames > 50);
  CHECK(disagreements == 0);
}

TEST_CASE("lowest failing subset wins and the count includes it") {
  // e1, e2, e2, e1: the first pair with both sides on a line is S = {1, 4}, the fifth checked.
  const RealFrame f(Matrix<double>{{1, 0, 0, 1}, {0, 1, 1, 0}});
  const auto cert = complement_property(f);
  CHECK(cert.verdict == Verdict::NotInjective);
  CHECK(cert.failing_subset->indices() == std::vector<std::size_t>{0, 3});
  CHECK(cert.checked_subsets == 5);
  CHECK(cert.failing_subset->mask() == oracle::real_injectivity(f).first_failing_mask);
}

TEST_CASE("certifier budget") {
  CertifierOptions opts;
  opts.max_m = 4;
  const RealFrame f = gen_random<double>(2, 5, 0);
  CHECK_THROWS_AS(complement_property(f, {}, opts), std::invalid_argument);
}

TEST_CASE("full spark test") {
  const auto fs = full_spark_test(gen_full_spark<double>(3, 5, 1));
  CHECK(fs.full_spark);
  CHECK(fs.checked_subsets == 10);
  const auto rt = full_spark_test(gen_repeated_tail<double>(2, 5, 1));
  CHECK_FALSE(rt.full_spark);
  REQUIRE(rt.dependent_subset);
  CHECK(*rt.dependent_subset == std::vector<std::size_t>{2, 3});
  CertifierOptions opts;
  opts.max_spark_subsets = 5;
  CHECK_THROWS_AS(full_spark_test(gen_random<double>(3, 6, 0), {}, opts), std::invalid_argument);
}

TEST_CASE("full spark at M = 2N-1 gives injectivity; repeated tail is injective without full spark") {
  for (std::size_t n = 2; n <= 3; ++n) {
    const RealFrame fs = gen_full_spark<double>(n, 2 * n - 1, n);
    CHECK(certify(fs).verdict == Verdict::Injective);
    for (std::size_t m = 2 * n; m <= 2 * n + 2; ++m) {
      const RealFrame rt = gen_repeated_tail<double>(n, m, m);
      CHECK(certify(rt).verdict == Verdict::Injective);
      CHECK_FALSE(full_spark_test(rt).full_spark);
    }
  }
}

TEST_CASE("necessary condition at M = 2N-1") {
  const auto ok = necessary_condition_for_M_2N_minus_1(gen_random<double>(3, 5, 0));
  CHECK(ok.consistent);
  CHECK(ok.spark.full_spark);
  CHECK(ok.certificate.verdict == Verdict::Injective);
  // {e1, e2, e2}: the pair {2, 3} is dependent and S = {1} fails.
  const RealFrame dep(Matrix<double>{{1, 0, 0}, {0, 1, 1}});
  const auto bad = necessary_condition_for_M_2N_minus_1(dep);
  CHECK(bad.consistent);
  CHECK_FALSE(bad.spark.full_spark);
  CHECK(bad.certificate.verdict == Verdict::NotInjective);
  CHECK(*bad.spark.dependent_subset == std::vector<std::size_t>{1, 2});
  CHECK(bad.certificate.failing_subset->indices() == std::vector<std::size_t>{0});
  CHECK_THROWS_AS(necessary_condition_for_M_2N_minus_1(gen_random<double>(3, 6, 0)), std::invalid_argument);
}

TEST_CASE("short frames fail on the canonical split") {
  for (std::size_t n = 2; n <= 5; ++n) {
    const SignPattern s = short_frame_split(n, 2 * n - 2);
    CHECK(s.count() == n - 1);
    CHECK(s.complement().count() == n - 1);
    const auto cert = sharpness_check(n, 10 + n);
    CHECK(cert.verdict == Verdict::NotInjective);
    REQUIRE(cert.witness);
    check_witness_independently(gen_random<double>(n, 2 * n - 2, 10 + n), *cert.witness);
  }
  CHECK_THROWS_AS(short_frame_split(3, 5), std::invalid_argument);
}

TEST_CASE("witness_pair rejects spanning sides") {
  const RealFrame f(Matrix<double>{{1, 0, 1}, {0, 1, 1}});
  CHECK_THROWS_AS(witness_pair(f, SignPattern(3, 0b001)), std::invalid_argument);
  const Witness<double> w = witness_pair(standard_basis(2), SignPattern(2, 0b01));
  CHECK(verify_witness(standard_basis(2), w));
  CHECK_FALSE(verify_witness(standard_basis(2), Witness<double>{{1, 0}, {-1, 0}}));
  CHECK_FALSE(verify_witness(standard_basis(2), Witness<double>{{1, 0}, {0, 1}}));
}

TEST_CASE("complex size bound") {
  CHECK(complex_regime(2, 3) == ComplexRegime::TooSmall);
  CHECK(complex_regime(2, 4) == ComplexRegime::Unknown);
  CHECK(complex_regime(2, 5) == ComplexRegime::Unknown);
  CHECK(complex_regime(2, 6) == ComplexRegime::GenericInjective);
  CHECK(complex_regime_name(ComplexRegime::GenericInjective) == "generic-injective");

  for (std::size_t n = 2; n <= 4; ++n) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const ComplexFrame f = gen_random<Complex>(n, 2 * n - 1, seed);
      CHECK_FALSE(complex_size_check(f));
      const auto cert = certify(f);
      CHECK(cert.verdict == Verdict::NotInjective);
      CHECK(cert.reason.find("M >= 2N") != std::string::npos);
      REQUIRE(cert.witness);
      CHECK(verify_witness(f, *cert.witness));
      CHECK(oracle::distance(oracle::magnitudes(f, cert.witness->x),
                             oracle::magnitudes(f, cert.witness->y)) < 1e-8);
      CHECK(oracle::ray_distance(cert.witness->x, cert.witness->y) > 1e-6);
    }
  }
  CHECK_THROWS_AS(complex_size_witness(gen_random<Complex>(2, 4, 0)), std::invalid_argument);
}

TEST_CASE("complex frames above the size bound only pass necessary conditions") {
  const auto cert = certify(gen_random<Complex>(2, 6, 3));
  CHECK(cert.verdict == Verdict::NecessaryConditionsPass);
  CHECK(cert.reason.find("generic-injective") != std::string::npos);
  const auto few = certify(gen_random<Complex>(3, 4, 3));
  CHECK(few.verdict == Verdict::NotInjective);
  REQUIRE(few.witness);
  CHECK(verify_witness(gen_random<Complex>(3, 4, 3), *few.witness));
}

TEST_CASE("verdict names") {
  CHECK(verdict_name(Verdict::Injective) == "Injective");
  CHECK(verdict_name(Verdict::NotInjective) == "NotInjective");
  CHECK(verdict_name(Verdict::NecessaryConditionsPass) == "NecessaryConditionsPass");
}
