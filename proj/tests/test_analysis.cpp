#include <doctest.h>

#include <vector>

#include "so3ft/analysis.hpp"
#include "so3ft/experiments.hpp"
#include "so3ft/quadrature.hpp"
#include "so3ft/wigner_transform.hpp"
#include "support/quad_oracle.hpp"

using namespace so3ft;

TEST_CASE("sobolev_norm basics") {
  HarmonicCoefficients unit0(3);
  unit0.at(0, 0, 0) = cplx{1.0, 0.0};
  CHECK(sobolev_norm(unit0, 0.0) == 1.0);
  CHECK(sobolev_norm(unit0, 2.7) == 1.0);

  HarmonicCoefficients unit1(3);
  unit1.at(1, 0, 0) = cplx{1.0, 0.0};
  CHECK(sobolev_norm(unit1, 1.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));

  CHECK_THROWS_AS((void)sobolev_norm(unit0, -0.5), std::invalid_argument);
}

TEST_CASE("sobolev_norm at s = 0 is the L2 norm by Parseval") {
  RandomStream rng(71);
  const int N = 6;
  const HarmonicCoefficients fhat = random_coefficients(N, rng);

  // quadrature oracle for the L2 norm: sample |f|^2 on a rule of double
  // bandwidth and integrate
  const QuadratureRule rule = gauss_legendre_rule(2 * N);
  const WignerTransformPlan plan(N);
  HarmonicCoefficients padded(2 * N);
  for (int n = 0; n <= N; ++n)
    for (int k = -n; k <= n; ++k)
      for (int l = -n; l <= n; ++l) padded.at(n, k, l) = fhat.at(n, k, l);
  const WignerTransformPlan plan2(2 * N);
  const auto samples = synthesize_grid(forward(plan2, padded), rule.grid());
  double l2sq = 0.0;
  std::size_t i = 0;
  for (int a = 0; a < rule.alpha_count; ++a)
    for (int b = 0; b < rule.beta_count(); ++b)
      for (int c = 0; c < rule.gamma_count; ++c)
        l2sq += rule.node_weight(b) * std::norm(samples[i++]);
  CHECK(sobolev_norm(fhat, 0.0) == doctest::Approx(std::sqrt(l2sq)).epsilon(1e-12));
}

TEST_CASE("sobolev_norm is monotone in s") {
  RandomStream rng(72);
  const HarmonicCoefficients fhat = random_coefficients(5, rng);
  double prev = sobolev_norm(fhat, 0.0);
  for (double s : {0.25, 0.5, 1.0, 1.5, 2.0}) {
    const double cur = sobolev_norm(fhat, s);
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("counterexample coefficients") {
  const int N = 12;
  const HarmonicCoefficients fhat = counterexample_coefficients(N);

  SUBCASE("support is the (0,0) order pair, odd degrees vanish") {
    for (int n = 0; n <= N; ++n)
      for (int k = -n; k <= n; ++k)
        for (int l = -n; l <= n; ++l)
          if (k != 0 || l != 0 || n % 2 == 1) CHECK(std::abs(fhat.at(n, k, l)) == 0.0);
    CHECK(fhat.at(0, 0, 0).real() > 0.0);
    CHECK(fhat.at(2, 0, 0).real() > 0.0);
  }

  SUBCASE("closed form matches numerical integration") {
    // I_n = Int_{-1}^{1} P_n(t) (1 - t^2)^{-1/4} dt via tanh-sinh
    for (int n : {0, 2, 4, 8, 16, 40, 96, 200}) {
      const double numeric = testsupport::tanh_sinh([n](double t) {
        return testsupport::legendre_value(n, t) * std::pow(1.0 - t * t, -0.25);
      });
      const double closed = detail::counterexample_integral(n);
      CHECK(closed == doctest::Approx(numeric).epsilon(1e-8));
    }
    // frozen: I_2 and the n = 2 coefficient
    CHECK(detail::counterexample_integral(2) == doctest::Approx(0.2396280469).epsilon(1e-9));
    CHECK(fhat.at(2, 0, 0).real() ==
          doctest::Approx(0.5 * std::sqrt(5.0) * 0.2396280469).epsilon(1e-9));
  }
}

TEST_CASE("regularity report") {
  const RegularityReport rep =
      counterexample_regularity_report(400, {0.25, 0.4, 0.5, 0.55});

  SUBCASE("xi_n lies in (7/8, 1) for even n in [2, 400]") {
    CHECK(rep.even_n.front() == 2);
    CHECK(rep.even_n.back() == 400);
    for (std::size_t i = 0; i < rep.xi.size(); ++i) {
      CHECK(rep.xi[i] > 0.875);
      CHECK(rep.xi[i] < 1.0);
    }
  }

  SUBCASE("partial norms stabilize below s = 1/2") {
    // s = 0.4: every additional term beyond n = 200 contributes < 1e-3, and
    // the doubling increments of the squared norm shrink (the series is
    // summable); measured norm increment over [200, 400] is about 1.8e-2
    const std::size_t si = 1;
    for (int n = 200; n <= 400; n += 2) CHECK(rep.term(si, n) < 1e-3);
    const double at100 = rep.partial_norm(si, 100);
    const double at200 = rep.partial_norm(si, 200);
    const double at400 = rep.partial_norm(si, 400);
    CHECK(at400 - at200 < at200 - at100);
    CHECK(at400 - at200 < 2e-2);
    CHECK(at400 >= at200);
  }

  SUBCASE("terms follow the n^{2s-2} power law") {
    const std::size_t si = 0;  // s = 0.25
    const double ratio = rep.term(si, 256) / rep.term(si, 128);
    CHECK(ratio == doctest::Approx(std::pow(2.0, 2.0 * 0.25 - 2.0)).epsilon(0.05));
  }

  SUBCASE("squared-norm doubling increments separate s < 1/2 from s >= 1/2") {
    // increment ratio tends to 2^{2s-1}: below one iff s < 1/2
    auto doubling_ratio = [&](std::size_t si) {
      const auto& c = rep.partial_norm_sq[si];
      const double inc1 = c[200] - c[100];
      const double inc2 = c[400] - c[200];
      return inc2 / inc1;
    };
    CHECK(doubling_ratio(0) < 1.0);  // s = 0.25
    CHECK(doubling_ratio(1) < 1.0);  // s = 0.40
    CHECK(doubling_ratio(3) > 1.0);  // s = 0.55 diverges
    CHECK(doubling_ratio(1) == doctest::Approx(std::pow(2.0, 2.0 * 0.40 - 1.0)).epsilon(0.05));
    CHECK(doubling_ratio(3) == doctest::Approx(std::pow(2.0, 2.0 * 0.55 - 1.0)).epsilon(0.05));
  }
}

TEST_CASE("series estimate check") {
  SUBCASE("bound holds for I_n(0,0) up to 256") {
    const SeriesEstimateReport rep = series_estimate_check(0, 0, 256, 0.8);
    CHECK(rep.bound_ok);
    CHECK(rep.worst_bound_ratio < 1.0);
    CHECK(rep.partial_sum > 0.0);
  }

  SUBCASE("I_n equals the Parseval integral") {
    // (1/2pi) Int |d^n_{k,l}(cos b)|^2 db by the periodic trapezoid rule
    for (const auto [k, l] : std::vector<std::pair<int, int>>{{0, 0}, {1, -2}, {3, 3}}) {
      const SeriesEstimateReport rep = series_estimate_check(k, l, 48, 0.8);
      for (int n : {4, 17, 48}) {
        if (n < std::max(std::abs(k), std::abs(l))) continue;
        const int M = 4 * n + 8;
        double integral = 0.0;
        for (int m = 0; m < M; ++m) {
          const double d = wigner_d(n, k, l, std::cos(two_pi * m / M));
          integral += d * d;
        }
        integral /= M;
        CHECK(rep.I[static_cast<std::size_t>(n)] == doctest::Approx(integral).epsilon(1e-10));
      }
    }
  }

  SUBCASE("partial sums are Cauchy at s = 0.8") {
    const SeriesEstimateReport a = series_estimate_check(0, 0, 128, 0.8);
    const SeriesEstimateReport b = series_estimate_check(0, 0, 256, 0.8);
    const SeriesEstimateReport c = series_estimate_check(0, 0, 512, 0.8);
    const double inc1 = b.partial_sum - a.partial_sum;
    const double inc2 = c.partial_sum - b.partial_sum;
    CHECK(inc1 > 0.0);
    CHECK(inc2 > 0.0);
    CHECK(inc2 < inc1);
  }
}

TEST_CASE("bounded extension: |W fhat|_2 <= C |fhat|_{H^s}") {
  // C^2 = 4^s * sup_{k,l} sum_n (2n+1)^{1-2s} I_n(k,l); the supremum over the
  // orders present in a band-limited vector is attained at (0,0)
  const double s = 0.8;
  const int N = 16;
  const SeriesEstimateReport rep = series_estimate_check(0, 0, 512, s);
  const double C = std::sqrt(std::pow(4.0, s) * rep.partial_sum);

  RandomStream rng(73);
  const WignerTransformPlan plan(N);
  for (int trial = 0; trial < 5; ++trial) {
    HarmonicCoefficients fhat(N);
    for (int n = 0; n <= N; ++n) {
      const double w = std::pow(1.0 + static_cast<double>(n) * (n + 1), -1.0);
      for (int k = -n; k <= n; ++k)
        for (int l = -n; l <= n; ++l) fhat.at(n, k, l) = w * rng.unit_disk();
    }
    const FourierCube cube = forward(plan, fhat);
    double wnorm = 0.0;
    for (const auto& v : cube.data) wnorm += std::norm(v);
    CHECK(std::sqrt(wnorm) <= C * sobolev_norm(fhat, s));
  }
}

TEST_CASE("dfs lift sampling") {
  RandomStream rng(74);
  const int N = 5;

  SUBCASE("constant coefficients lift to a constant") {
    HarmonicCoefficients fhat(N);
    fhat.at(0, 0, 0) = cplx{2.5, 0.0};
    const GridSpec grid = GridSpec::torus(4, 6, 5);
    for (const cplx& v : dfs_lift_sample(fhat, grid))
      CHECK(std::abs(v - cplx{2.5, 0.0}) < 1e-13);
  }

  SUBCASE("matches the Fourier route on the full torus") {
    const HarmonicCoefficients fhat = random_coefficients(N, rng);
    const GridSpec grid = GridSpec::torus(2 * N + 2, 2 * N + 2, 2 * N + 2);
    const std::vector<cplx> spatial = dfs_lift_sample(fhat, grid);

    const WignerTransformPlan plan(N);
    const std::vector<cplx> fourier = synthesize_grid(forward(plan, fhat), grid);
    double scale = 0.0;
    for (const auto& v : spatial) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < spatial.size(); ++i)
      CHECK(std::abs(spatial[i] - fourier[i]) <= 1e-11 * scale);
  }

  SUBCASE("BMC identity holds on the grid") {
    const HarmonicCoefficients fhat = random_coefficients(N, rng);
    const int A = 8, B = 8, C = 8;  // even counts so the shifted points exist
    const GridSpec grid = GridSpec::torus(A, B, C);
    const std::vector<cplx> g = dfs_lift_sample(fhat, grid);
    auto at = [&](int a, int b, int c) {
      return g[(static_cast<std::size_t>(a) * B + static_cast<std::size_t>(b)) * C +
               static_cast<std::size_t>(c)];
    };
    double scale = 0.0;
    for (const auto& v : g) scale = std::max(scale, std::abs(v));
    for (int a = 0; a < A; ++a)
      for (int b = 0; b < B; ++b)
        for (int c = 0; c < C; ++c) {
          const cplx moved = at((a + A / 2) % A, (B - b) % B, (c + C / 2) % C);
          CHECK(std::abs(at(a, b, c) - moved) <= 1e-12 * scale);
        }
  }
}

TEST_CASE("counterexample lift norm diverges under refinement") {
  // discrete L2 mass of 1/sin(beta) on beta grids refining toward the poles
  double prev = 0.0;
  for (int level = 1; level <= 4; ++level) {
    const int B = 8 << level;
    double mass = 0.0;
    for (int b = 0; b < B; ++b) {
      const double beta = two_pi * (b + 0.5) / B;
      mass += 1.0 / std::abs(std::sin(beta));
    }
    mass /= B;
    CHECK(mass > prev);
    prev = mass;
  }
}
