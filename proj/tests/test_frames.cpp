#include "doctest.h"

#include <cmath>
#include <numbers>

#include "framephase/frame.hpp"
#include "framephase/random.hpp"
#include "oracles.hpp"

using namespace framephase;

namespace {

// Three unit vectors at 120 degrees in R^2: a tight frame with bound 3/2.
RealFrame mercedes() {
  Matrix<double> s(2, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const double angle = std::numbers::pi / 2 + 2 * std::numbers::pi * static_cast<double>(i) / 3;
    s(0, i) = std::cos(angle);
    s(1, i) = std::sin(angle);
  }
  return RealFrame(s);
}

template <class T>
double max_abs_diff(const Matrix<T>& a, const Matrix<T>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

}  // namespace

TEST_CASE("frame construction validates shape, finiteness and span") {
  CHECK_THROWS_AS(RealFrame(Matrix<double>(2, 1)), std::invalid_argument);
  CHECK_THROWS_AS(RealFrame(Matrix<double>(0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(RealFrame(Matrix<double>{{1, 2, 3}, {2, 4, 6}}), std::invalid_argument);
  CHECK_THROWS_AS(RealFrame(Matrix<double>{{1, NAN}, {0, 1}}), std::invalid_argument);
  try {
    RealFrame(Matrix<double>(2, 1));
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("M >= N") != std::string::npos);
  }
  const RealFrame f(Matrix<double>{{1, 0, 1}, {0, 1, 1}});
  CHECK(f.dim() == 2);
  CHECK(f.size() == 3);
  CHECK(f.vector(2) == Vector<double>{1, 1});
  CHECK(RealFrame::field() == Field::Real);
}

TEST_CASE("analysis and synthesis on a hand-computed frame") {
  const RealFrame f(Matrix<double>{{1, 0, 1}, {0, 1, 1}});
  const Vector<double> x{1, 2};
  CHECK(analysis<double>(f, x) == Vector<double>{1, 2, 3});
  const Vector<double> c{1, 1, 1};
  CHECK(synthesis<double>(f, c) == Vector<double>{2, 2});
  CHECK_THROWS_AS(analysis<double>(f, c), std::invalid_argument);
  CHECK_THROWS_AS(synthesis<double>(f, x), std::invalid_argument);

  // Complex: <x, f> = sum x_k conj(f_k).
  const ComplexFrame g(Matrix<Complex>{{Complex(0, 1), 1.0}, {0.0, 1.0}});
  const Vector<Complex> z{1.0, Complex(0, 1)};
  const Vector<Complex> tz = analysis<Complex>(g, z);
  CHECK(std::abs(tz[0] - Complex(0, -1)) < 1e-15);
  CHECK(std::abs(tz[1] - Complex(1, 1)) < 1e-15);
}

TEST_CASE("frame operator bounds") {
  const auto op = frame_operator(mercedes());
  CHECK(op.bounds.lower == doctest::Approx(1.5));
  CHECK(op.bounds.upper == doctest::Approx(1.5));
  CHECK(op.bounds.tight(1e-12));

  const RealFrame f(Matrix<double>{{1, 0, 1}, {0, 1, 1}});
  const auto fo = frame_operator(f);
  // S = [[2,1],[1,2]] has eigenvalues 1 and 3.
  CHECK(fo.bounds.lower == doctest::Approx(1.0));
  CHECK(fo.bounds.upper == doctest::Approx(3.0));
  CHECK(fo.s == Matrix<double>{{2, 1}, {1, 2}});
}

TEST_CASE_TEMPLATE("canonical dual reconstructs and Parseval frame is tight", T, double, Complex) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Frame<T> f = gen_random<T>(3, 5 + seed % 3, seed);
    const Frame<T> dual = canonical_dual(f);
    Rng rng(seed + 100);
    const Vector<T> x = gaussian_vector<T>(rng, 3);
    // x = sum <x, f_i> S^-1 f_i
    const Vector<T> back = synthesis<T>(dual, analysis<T>(f, x));
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(back[k] - x[k]) < 1e-10);

    const Frame<T> p = canonical_parseval(f);
    const auto op = frame_operator(p);
    CHECK(max_abs_diff(op.s, Matrix<T>::identity(3)) < 1e-10);
    CHECK(op.bounds.lower == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE_TEMPLATE("coefficient range is invariant under invertible maps", T, double, Complex) {
  const Frame<T> f = gen_random<T>(3, 6, 4);
  Rng rng(9);
  const Matrix<T> r = gaussian_matrix<T>(rng, 3, 3);
  const Frame<T> g = apply_invertible(f, r);
  CHECK(g.vector(1) == r * f.vector(1));
  const auto wf = coefficient_range(f);
  const auto wg = coefficient_range(g);
  CHECK(wf.basis.cols() == 3);
  CHECK(subspace_distance(wf, wg) < 1e-10);
  CHECK(subspace_distance(wf, coefficient_range(canonical_dual(f))) < 1e-10);

  // Elements of W project to themselves; the projection is idempotent.
  const Vector<T> c = analysis<T>(f, gaussian_vector<T>(rng, 3));
  const Vector<T> pc = wf.project(c);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(pc[i] - c[i]) < 1e-10);
  const Vector<T> d = gaussian_vector<T>(rng, 6);
  const Vector<T> pd = wf.project(d);
  const Vector<T> ppd = wf.project(pd);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(std::abs(ppd[i] - pd[i]) < 1e-12);

  // A different random frame has a different range.
  CHECK(subspace_distance(wf, coefficient_range(gen_random<T>(3, 6, 5))) > 1e-3);
}

TEST_CASE("apply_invertible rejects singular or misshapen maps") {
  const RealFrame f = gen_random<double>(2, 3, 1);
  CHECK_THROWS_AS(apply_invertible(f, Matrix<double>{{1, 2}, {2, 4}}), std::invalid_argument);
  CHECK_THROWS_AS(apply_invertible(f, Matrix<double>::identity(3)), std::invalid_argument);
  CHECK(apply_invertible(f, Matrix<double>::identity(2)).synthesis_matrix() == f.synthesis_matrix());
}

TEST_CASE_TEMPLATE("generators are deterministic in the seed", T, double, Complex) {
  CHECK(gen_random<T>(3, 5, 42).synthesis_matrix() == gen_random<T>(3, 5, 42).synthesis_matrix());
  CHECK(gen_random<T>(3, 5, 42).synthesis_matrix() != gen_random<T>(3, 5, 43).synthesis_matrix());
  CHECK(gen_full_spark<T>(3, 6, 7).synthesis_matrix() == gen_full_spark<T>(3, 6, 7).synthesis_matrix());
}

TEST_CASE_TEMPLATE("full-spark generator passes the determinant oracle", T, double, Complex) {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::size_t m = n; m <= 2 * n + 2; ++m) {
      const Frame<T> f = gen_full_spark<T>(n, m, n * 100 + m);
      CHECK(f.size() == m);
      CHECK(oracle::full_spark(f));
    }
  }
}

TEST_CASE("repeated-tail generator") {
  const RealFrame f = gen_repeated_tail<double>(3, 8, 2);
  CHECK(f.size() == 8);
  for (std::size_t i = 5; i < 8; ++i) CHECK(f.vector(i) == f.vector(4));
  CHECK_FALSE(oracle::full_spark(f));
  CHECK(oracle::complement_property(f));
  CHECK_THROWS_AS(gen_repeated_tail<double>(3, 5, 0), std::invalid_argument);
  try {
    gen_repeated_tail<double>(2, 3, 0);
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("M >= 2N") != std::string::npos);
  }
}

TEST_CASE("windowed Fourier frame analysis equals the STFT double sum") {
  Rng rng(77);
  const std::vector<double> g{0.5, 1.0, 1.0, 0.5};
  for (std::size_t len : {4u, 8u, 10u, 16u}) {
    const ComplexFrame f = gen_windowed_fourier(g, len, 2, 4);
    CHECK(f.size() == windowed_fourier_positions(len, 2, 4) * 4);
    const Vector<Complex> x = gaussian_vector<Complex>(rng, len);
    const Vector<Complex> got = analysis<Complex>(f, x);
    const auto want = oracle::stft(g, x, 2);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-10);
  }
  CHECK(windowed_fourier_positions(10, 2, 4) == 4);
}

TEST_CASE("windowed Fourier frame rejects bad layouts") {
  const std::vector<double> g{1.0, 1.0};
  CHECK_THROWS_AS(gen_windowed_fourier(g, 8, 2, 4), std::invalid_argument);  // window length
  const std::vector<double> gap{1.0, 0.0, 0.0, 1.0};
  CHECK_THROWS_AS(gen_windowed_fourier(gap, 8, 4, 4), std::invalid_argument);  // samples 1,2 uncovered
  const std::vector<double> ones{1.0, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(gen_windowed_fourier(ones, 9, 4, 4), std::invalid_argument);  // last sample uncovered
}
