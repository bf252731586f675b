#include <doctest.h>

#include <chrono>
#include <vector>

#include "so3ft/experiments.hpp"
#include "so3ft/fourier.hpp"
#include "so3ft/wigner_transform.hpp"
#include "support/eig.hpp"

using namespace so3ft;

namespace {

// the master oracle: direct summation of the harmonic series
cplx evaluate_direct(const HarmonicCoefficients& fhat, const EulerAngles& r) {
  cplx total{0.0, 0.0};
  for (int n = 0; n <= fhat.bandwidth; ++n)
    for (int k = -n; k <= n; ++k)
      for (int l = -n; l <= n; ++l) total += fhat.at(n, k, l) * wigner_D(n, k, l, r);
  return total;
}

cplx dot(const HarmonicCoefficients& a, const HarmonicCoefficients& b) {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * std::conj(b.data[i]);
  return s;
}

cplx dot(const FourierCube& a, const FourierCube& b) {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * std::conj(b.data[i]);
  return s;
}

}  // namespace

TEST_CASE("forward at bandwidth zero") {
  WignerTransformPlan plan(0);
  HarmonicCoefficients fhat(0);
  fhat.at(0, 0, 0) = cplx{0.7, -0.3};
  const FourierCube cube = forward(plan, fhat);
  CHECK(cube.at(0, 0, 0) == cplx{0.7, -0.3});

  const HarmonicCoefficients back = adjoint(plan, cube);
  CHECK(back.at(0, 0, 0) == cplx{0.7, -0.3});
}

TEST_CASE("forward of a single degree-one coefficient") {
  WignerTransformPlan plan(1);
  HarmonicCoefficients fhat(1);
  fhat.at(1, 0, 0) = cplx{1.0, 0.0};
  const FourierCube cube = forward(plan, fhat);

  // ghat_{0,j,0} = sqrt(3) d^1_{j,0}(0)^2: zero at j = 0, sqrt(3)/2 at j = +-1
  CHECK(std::abs(cube.at(0, 0, 0)) == 0.0);
  CHECK(cube.at(0, 1, 0).real() == doctest::Approx(std::sqrt(3.0) * 0.5).epsilon(1e-15));
  CHECK(cube.at(0, -1, 0).real() == doctest::Approx(std::sqrt(3.0) * 0.5).epsilon(1e-15));
  for (int k = -1; k <= 1; ++k)
    for (int j = -1; j <= 1; ++j)
      for (int l = -1; l <= 1; ++l)
        if (k != 0 || l != 0) CHECK(std::abs(cube.at(k, j, l)) == 0.0);
}

TEST_CASE("pointwise oracle at N = 8") {
  const int N = 8;
  WignerTransformPlan plan(N);
  RandomStream rng(21);
  const HarmonicCoefficients fhat = random_coefficients(N, rng);
  const FourierCube cube = forward(plan, fhat);

  RotationList nodes;
  for (int i = 0; i < 50; ++i) nodes.push_back(rng.rotation());
  const std::vector<cplx> values = synthesize_at(cube, nodes);

  double scale = 0.0;
  for (std::size_t m = 0; m < nodes.size(); ++m)
    scale = std::max(scale, std::abs(values[m]));
  for (std::size_t m = 0; m < nodes.size(); ++m) {
    const cplx direct = evaluate_direct(fhat, nodes[m]);
    CHECK(std::abs(direct - values[m]) <= 1e-11 * scale);
  }
}

TEST_CASE("bandwidth mismatch raises") {
  WignerTransformPlan plan(3);
  HarmonicCoefficients fhat(2);
  CHECK_THROWS_AS((void)forward(plan, fhat), std::invalid_argument);
  FourierCube cube(2);
  CHECK_THROWS_AS((void)adjoint(plan, cube), std::invalid_argument);
}

TEST_CASE("adjointness") {
  RandomStream rng(22);
  for (int N : {1, 2, 5, 9, 16}) {
    WignerTransformPlan plan(N);
    for (int trial = 0; trial < 4; ++trial) {
      const HarmonicCoefficients x = random_coefficients(N, rng);
      FourierCube y(N);
      for (auto& v : y.data) v = rng.unit_disk();

      const cplx lhs = dot(forward(plan, x), y);
      const cplx rhs = dot(x, adjoint(plan, y));
      double xn = 0.0, yn = 0.0;
      for (const auto& v : x.data) xn += std::norm(v);
      for (const auto& v : y.data) yn += std::norm(v);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::sqrt(xn * yn));
    }
  }
}

TEST_CASE("degree locality of single-coefficient input") {
  const int N = 4;
  WignerTransformPlan plan(N);
  for (int n0 = 0; n0 <= N; ++n0)
    for (int k0 = -n0; k0 <= n0; ++k0)
      for (int l0 = -n0; l0 <= n0; ++l0) {
        HarmonicCoefficients fhat(N);
        fhat.at(n0, k0, l0) = cplx{1.0, 0.0};
        const FourierCube cube = forward(plan, fhat);
        for (int k = -N; k <= N; ++k)
          for (int j = -N; j <= N; ++j)
            for (int l = -N; l <= N; ++l) {
              const bool allowed = (k == -k0) && (l == -l0) && (std::abs(j) <= n0);
              if (!allowed) CHECK(std::abs(cube.at(k, j, l)) == 0.0);
            }
      }
}

TEST_CASE("BMC output symmetry is structural") {
  RandomStream rng(23);
  for (int N : {1, 3, 8}) {
    WignerTransformPlan plan(N);
    const HarmonicCoefficients fhat = random_coefficients(N, rng);
    const FourierCube cube = forward(plan, fhat);
    for (int k = -N; k <= N; ++k)
      for (int j = -N; j <= N; ++j)
        for (int l = -N; l <= N; ++l) {
          const cplx expect = parity(k + l) * cube.at(k, -j, l);
          CHECK(cube.at(k, j, l).real() == expect.real());
          CHECK(cube.at(k, j, l).imag() == expect.imag());
        }
  }
}

TEST_CASE("extended_forward") {
  const int N = 8;
  WignerTransformPlan plan(N);
  RandomStream rng(24);
  const HarmonicCoefficients fhat = random_coefficients(N, rng);

  SUBCASE("full truncation equals forward") {
    const FourierCube a = forward(plan, fhat);
    const FourierCube b = extended_forward(plan, fhat, N);
    for (std::size_t i = 0; i < a.data.size(); ++i) CHECK(a.data[i] == b.data[i]);
  }

  SUBCASE("degree-zero truncation is a point mass") {
    const FourierCube cube = extended_forward(plan, fhat, 0);
    for (int k = -N; k <= N; ++k)
      for (int j = -N; j <= N; ++j)
        for (int l = -N; l <= N; ++l)
          if (k != 0 || j != 0 || l != 0) CHECK(std::abs(cube.at(k, j, l)) == 0.0);
    CHECK(cube.at(0, 0, 0) == fhat.at(0, 0, 0));
  }

  SUBCASE("out of range truncation throws") {
    CHECK_THROWS_AS((void)extended_forward(plan, fhat, N + 1), std::out_of_range);
    CHECK_THROWS_AS((void)extended_forward(plan, fhat, -1), std::out_of_range);
  }
}

TEST_CASE("extended_forward tail decay for Sobolev-decaying coefficients") {
  const int N = 32;
  WignerTransformPlan plan(N);
  RandomStream rng(25);
  HarmonicCoefficients fhat(N);
  const double s_decay = 3.0;
  for (int n = 0; n <= N; ++n) {
    const double w = std::pow(1.0 + static_cast<double>(n) * (n + 1), -s_decay);
    for (int k = -n; k <= n; ++k)
      for (int l = -n; l <= n; ++l) fhat.at(n, k, l) = w * rng.unit_disk();
  }

  auto tail = [&](int upto) {
    const FourierCube hi = extended_forward(plan, fhat, upto);
    const FourierCube lo = extended_forward(plan, fhat, upto / 2);
    double s = 0.0;
    for (std::size_t i = 0; i < hi.data.size(); ++i) s += std::norm(hi.data[i] - lo.data[i]);
    return std::sqrt(s);
  };

  const double t8 = tail(8), t16 = tail(16), t32 = tail(32);
  CHECK(t16 < t8);
  CHECK(t32 < t16);
}

TEST_CASE("materialized matrix") {
  SUBCASE("bandwidth zero is the 1x1 identity") {
    WignerTransformPlan plan(0);
    const DenseMatrix m = materialize_matrix(plan);
    CHECK(m.rows == 1);
    CHECK(m.cols == 1);
    CHECK(m.at(0, 0) == cplx{1.0, 0.0});
  }

  SUBCASE("matrix action equals forward") {
    RandomStream rng(26);
    for (int N : {1, 3, 6}) {
      WignerTransformPlan plan(N);
      const DenseMatrix m = materialize_matrix(plan);
      double scale = 0.0, worst = 0.0;
      for (int trial = 0; trial < 3; ++trial) {
        const HarmonicCoefficients fhat = random_coefficients(N, rng);
        const FourierCube cube = forward(plan, fhat);
        for (std::int64_t r = 0; r < m.rows; ++r) {
          cplx s{0.0, 0.0};
          for (std::int64_t c = 0; c < m.cols; ++c)
            s += m.at(r, c) * fhat.data[static_cast<std::size_t>(c)];
          scale = std::max(scale, std::abs(s));
          worst = std::max(worst, std::abs(s - cube.data[static_cast<std::size_t>(r)]));
        }
      }
      CHECK(worst <= 1e-13 * std::max(1.0, scale));
    }
  }

  SUBCASE("guard on oversized bandwidth") {
    WignerTransformPlan plan(17);
    CHECK_THROWS_AS((void)materialize_matrix(plan), std::invalid_argument);
  }
}

TEST_CASE("results are bitwise independent of the thread count") {
  const int N = 6;
  WignerTransformPlan plan(N);
  RandomStream rng(27);
  const HarmonicCoefficients fhat = random_coefficients(N, rng);

  set_thread_count(1);
  const FourierCube serial = forward(plan, fhat);
  const HarmonicCoefficients serial_adj = adjoint(plan, serial);
  set_thread_count(4);
  const FourierCube threaded = forward(plan, fhat);
  const HarmonicCoefficients threaded_adj = adjoint(plan, threaded);
  set_thread_count(0);

  for (std::size_t i = 0; i < serial.data.size(); ++i) {
    CHECK(serial.data[i].real() == threaded.data[i].real());
    CHECK(serial.data[i].imag() == threaded.data[i].imag());
  }
  for (std::size_t i = 0; i < serial_adj.data.size(); ++i) {
    CHECK(serial_adj.data[i].real() == threaded_adj.data[i].real());
    CHECK(serial_adj.data[i].imag() == threaded_adj.data[i].imag());
  }
}

TEST_CASE("extra threads do not noticeably slow the transform") {
  // timing sanity from the bench contract; min-of-7 keeps scheduler noise out
  const int N = 64;
  WignerTransformPlan plan(N);
  RandomStream rng(28);
  const HarmonicCoefficients fhat = random_coefficients(N, rng);

  auto timed = [&](int threads) {
    set_thread_count(threads);
    const auto t0 = std::chrono::steady_clock::now();
    const FourierCube cube = forward(plan, fhat);
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count() + 0.0 * cube.data[0].real();
  };
  // interleaved min-of-7 cancels background-load drift
  double t1 = 1e300, t2 = 1e300;
  for (int rep = 0; rep < 7; ++rep) {
    t1 = std::min(t1, timed(1));
    t2 = std::min(t2, timed(2));
  }
  set_thread_count(0);
  CHECK(t2 <= 1.10 * t1 + 0.005);
}

TEST_CASE("singular extremes of small transforms") {
  // frozen from the hand-computed block spectrum at N = 1:
  // eigenvalues {3/4 (x4), 1, 9/8 (x4), 3/2}
  WignerTransformPlan plan(1);
  const DenseMatrix m = materialize_matrix(plan);
  const auto ext = testsupport::wigner_matrix_extremes(m, 1);
  CHECK(ext.smin == doctest::Approx(std::sqrt(0.75)).epsilon(1e-13));
  CHECK(ext.smax == doctest::Approx(std::sqrt(1.5)).epsilon(1e-13));
}
