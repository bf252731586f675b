#include <doctest.h>

#include <vector>

#include "so3ft/experiments.hpp"
#include "so3ft/special_functions.hpp"
#include "so3ft/symmetry.hpp"

using namespace so3ft;

namespace {

// Legendre polynomial by its own recurrence, independent of jacobi_poly.
double legendre(int n, double x) {
  if (n == 0) return 1.0;
  double pm1 = 1.0, p = x;
  for (int m = 2; m <= n; ++m) {
    const double pn = ((2.0 * m - 1.0) * x * p - (m - 1.0) * pm1) / m;
    pm1 = p;
    p = pn;
  }
  return p;
}

// Jacobi polynomial from the explicit binomial sum, evaluated with exact
// small-integer binomials; the reference for spot values.
double jacobi_sum(int s, int a, int b, double x) {
  auto binom = [](int p, int q) {
    double r = 1.0;
    for (int i = 1; i <= q; ++i) r = r * (p - q + i) / i;
    return r;
  };
  double total = 0.0;
  for (int m = 0; m <= s; ++m)
    total += binom(s + a, m) * binom(s + b, s - m) * std::pow(0.5 * (x - 1.0), s - m) *
             std::pow(0.5 * (x + 1.0), m);
  return total;
}

// (1/2pi) Int_{-pi}^{pi} |d^n_{k,l}(cos b)|^2 db by the periodic trapezoid
// rule, exact for trigonometric polynomials of degree <= 2n.
double parseval_integral(int n, int k, int l) {
  const int M = 2 * n + 8;
  double s = 0.0;
  for (int m = 0; m < M; ++m) {
    const double beta = two_pi * m / M;
    const double d = wigner_d(n, k, l, std::cos(beta));
    s += d * d;
  }
  return s / M;
}

}  // namespace

TEST_CASE("jacobi_poly spot values") {
  CHECK(jacobi_poly(0, 3, 7, 0.3) == 1.0);
  CHECK(jacobi_poly(1, 2, 2, 0.0) == 0.0);

  // P_3^{1,2}(1/2) = -13/16 from the exact binomial expansion
  CHECK(jacobi_sum(3, 1, 2, 0.5) == doctest::Approx(-0.8125).epsilon(1e-15));
  CHECK(jacobi_poly(3, 1, 2, 0.5) == doctest::Approx(-0.8125).epsilon(1e-14));

  RandomStream rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int s = static_cast<int>(rng.uniform01() * 9);
    const int a = static_cast<int>(rng.uniform01() * 5);
    const int b = static_cast<int>(rng.uniform01() * 5);
    const double x = rng.uniform_pm1();
    CHECK(jacobi_poly(s, a, b, x) ==
          doctest::Approx(jacobi_sum(s, a, b, x)).epsilon(1e-12));
  }
}

TEST_CASE("wigner_d special cases") {
  CHECK(wigner_d(0, 0, 0, 0.37) == 1.0);

  RandomStream rng(12);
  for (int n = 0; n <= 20; ++n)
    for (int trial = 0; trial < 4; ++trial) {
      const double x = rng.uniform_pm1();
      CHECK(wigner_d(n, 0, 0, x) == doctest::Approx(legendre(n, x)).epsilon(1e-13));
    }

  for (int trial = 0; trial < 20; ++trial) {
    const double x = rng.uniform_pm1();
    CHECK(wigner_d(1, 1, 1, x) == doctest::Approx(0.5 * (1.0 + x)).epsilon(1e-15));
  }

  // endpoints are exact deltas
  for (int n = 1; n <= 5; ++n)
    for (int k = -n; k <= n; ++k)
      for (int l = -n; l <= n; ++l) {
        CHECK(wigner_d(n, k, l, 1.0) == (k == l ? 1.0 : 0.0));
        CHECK(wigner_d(n, k, l, -1.0) == (k == -l ? parity(n + k) : 0.0));
      }

  CHECK_THROWS_AS((void)wigner_d(2, 3, 0, 0.0), std::out_of_range);
}

TEST_CASE("wigner_D definition and representation property") {
  CHECK(wigner_D(0, 0, 0, EulerAngles(1.0, 2.0, 3.0)) == cplx{1.0, 0.0});

  for (int n = 0; n <= 4; ++n)
    for (int k = -n; k <= n; ++k)
      for (int l = -n; l <= n; ++l) {
        const cplx v = wigner_D(n, k, l, EulerAngles(0.0, 0.0, 0.0));
        if (k == l)
          CHECK(v.real() == doctest::Approx(std::sqrt(2.0 * n + 1.0)).epsilon(1e-14));
        else
          CHECK(std::abs(v) < 1e-14);
      }

  // D^n_{k,l}(R Q) = (2n+1)^{-1/2} sum_j D^n_{k,j}(R) D^n_{j,l}(Q)
  RandomStream rng(13);
  for (int trial = 0; trial < 6; ++trial) {
    const EulerAngles r = rng.rotation();
    const EulerAngles q = rng.rotation();
    const EulerAngles rq = detail::matrix_to_euler(detail::euler_to_matrix(r) *
                                                   detail::euler_to_matrix(q));
    for (int n = 1; n <= 8; n += 3)
      for (int k = -n; k <= n; k += 2)
        for (int l = -n; l <= n; l += 3) {
          cplx sum{0.0, 0.0};
          for (int j = -n; j <= n; ++j)
            sum += wigner_D(n, k, j, r) * wigner_D(n, j, l, q);
          sum /= std::sqrt(2.0 * n + 1.0);
          const cplx direct = wigner_D(n, k, l, rq);
          CHECK(std::abs(sum - direct) < 1e-11);
        }
  }
}

TEST_CASE("zero table matches direct evaluation") {
  const WignerDZeroTable table = build_zero_table(20);
  CHECK(table(1, 0, 0) == 0.0);

  double worst = 0.0;
  for (int n = 0; n <= 20; ++n)
    for (int j = -n; j <= n; ++j)
      for (int k = -n; k <= n; ++k)
        worst = std::max(worst, std::abs(table(n, j, k) - wigner_d(n, j, k, 0.0)));
  CHECK(worst < 1e-12);

  // frozen hand values: d^1_{+-1,0}(0) = -+ 1/sqrt(2)
  CHECK(table(1, 1, 0) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(table(1, -1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("zero table symmetries hold exactly as stored") {
  const int N = 24;
  const WignerDZeroTable table = build_zero_table(N);
  for (int n = 0; n <= N; ++n)
    for (int j = -n; j <= n; ++j)
      for (int k = -n; k <= n; ++k) {
        const double v = table(n, j, k);
        CHECK(table(n, k, j) == parity(k + j) * v);
        CHECK(table(n, -j, k) == parity(n + k) * v);
        CHECK(table(n, j, -k) == parity(n + j) * v);
        CHECK(std::abs(v) <= 1.0 + 1e-12);
      }
}

TEST_CASE("zero table at larger degrees against direct evaluation") {
  const int N = 64;
  const WignerDZeroTable table = build_zero_table(N);
  RandomStream rng(14);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform01() * N);
    const int j = static_cast<int>(rng.uniform_pm1() * n);
    const int k = static_cast<int>(rng.uniform_pm1() * n);
    CHECK(table(n, j, k) == doctest::Approx(wigner_d(n, j, k, 0.0)).epsilon(5e-12));
  }
}

TEST_CASE("zero table Parseval identity") {
  const int N = 32;
  const WignerDZeroTable table = build_zero_table(N);
  RandomStream rng(15);
  for (int n = 1; n <= N; n += 3) {
    for (int trial = 0; trial < 3; ++trial) {
      const int k = static_cast<int>(rng.uniform_pm1() * n);
      const int l = static_cast<int>(rng.uniform_pm1() * n);
      double lhs = 0.0;
      for (int j = -n; j <= n; ++j) {
        const double p = table(n, j, k) * table(n, j, l);
        lhs += p * p;
      }
      CHECK(lhs == doctest::Approx(parseval_integral(n, k, l)).epsilon(1e-10));
    }
  }
}

TEST_CASE("Fourier expansion of the Wigner-d functions") {
  // d^n_{k,l}(cos beta) = i^{l-k} sum_j d^n_{j,k}(0) d^n_{j,l}(0) e^{ij beta};
  // left side from the Jacobi definition, right side from the zero table.
  const int N = 64;
  const WignerDZeroTable table = build_zero_table(N);
  RandomStream rng(16);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform01() * N);
    const int k = static_cast<int>(rng.uniform_pm1() * n);
    const int l = static_cast<int>(rng.uniform_pm1() * n);
    const double beta = pi * rng.uniform01();
    cplx rhs{0.0, 0.0};
    for (int j = -n; j <= n; ++j)
      rhs += table(n, j, k) * table(n, j, l) * std::polar(1.0, j * beta);
    rhs *= ipow(l - k);
    const double lhs = wigner_d(n, k, l, std::cos(beta));
    CHECK(std::abs(lhs - rhs) < 1e-11);
  }
}

TEST_CASE("unitarity and bulk bounds") {
  RandomStream rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform01() * 48);
    const int k = static_cast<int>(rng.uniform_pm1() * n);
    const int l = static_cast<int>(rng.uniform_pm1() * n);
    const double x = rng.uniform_pm1();
    const double d = wigner_d(n, k, l, x);
    CHECK(std::abs(d) <= 1.0 + 1e-12);

    // Haagerup-type bulk bound on (-1 + 1/n, 1 - 1/n)
    if (std::abs(x) < 1.0 - 1.0 / n) {
      const double lhs = std::pow(1.0 - x * x, 0.25) * std::abs(d);
      CHECK(lhs <= 12.0 * std::pow(2.0 * n + 1.0, -0.25));
    }
  }
}
