#pragma once

#include <cmath>
#include <cstdint>

#include "so3ft/core_types.hpp"

namespace so3ft {

/// Jacobi polynomial P_s^{a,b}(x) by the three-term recurrence in the degree.
/// The recurrence coefficients are formed in 64-bit integers (exact for the
/// parameter ranges of this library) before conversion to double.
inline double jacobi_poly(int s, int a, int b, double x) {
  if (s < 0 || a < 0 || b < 0)
    throw std::invalid_argument("jacobi_poly: negative parameter");
  if (s == 0) return 1.0;
  double pm1 = 1.0;
  double p = 0.5 * ((a - b) + (a + b + 2) * x);
  for (std::int64_t t = 2; t <= s; ++t) {
    const std::int64_t ab = a + b;
    const std::int64_t c1 = 2 * t * (t + ab) * (2 * t + ab - 2);
    const std::int64_t c2 = (2 * t + ab - 1) *
                            (static_cast<std::int64_t>(a) * a -
                             static_cast<std::int64_t>(b) * b);
    const std::int64_t c3 = (2 * t + ab - 1) * (2 * t + ab) * (2 * t + ab - 2);
    const std::int64_t c4 = 2 * (t + a - 1) * (t + b - 1) * (2 * t + ab);
    const double pnext =
        ((static_cast<double>(c2) + static_cast<double>(c3) * x) * p -
         static_cast<double>(c4) * pm1) /
        static_cast<double>(c1);
    pm1 = p;
    p = pnext;
  }
  return p;
}

namespace detail {

inline double ln_binomial(std::int64_t p, std::int64_t q) {
  return std::lgamma(static_cast<double>(p + 1)) -
         std::lgamma(static_cast<double>(q + 1)) -
         std::lgamma(static_cast<double>(p - q + 1));
}

inline double binomial_small(std::int64_t p, std::int64_t q) {
  if (q > p - q) q = p - q;
  double r = 1.0;
  for (std::int64_t i = 1; i <= q; ++i)
    r = r * static_cast<double>(p - q + i) / static_cast<double>(i);
  return r;
}

/// sqrt( C(2n-s, s+a) / C(s+b, b) ), via log-gamma once raw binomials
/// would overflow.
inline double wigner_d_coefficient(int n, int s, int a, int b) {
  if (n <= 30) {
    return std::sqrt(binomial_small(2 * n - s, s + a) /
                     binomial_small(s + b, b));
  }
  return std::exp(0.5 * (ln_binomial(2 * n - s, s + a) - ln_binomial(s + b, b)));
}

}  // namespace detail

/// Wigner-d function d^n_{k,l}(x), x = cos(beta) in [-1, 1]:
///   (-1)^nu sqrt(C(2n-s, s+a)/C(s+b, b)) ((1-x)/2)^{a/2} ((1+x)/2)^{b/2} P_s^{a,b}(x)
/// with a = |k-l|, b = |k+l|, s = n - max(|k|,|l|), nu = (k+l)[k>l].
/// The endpoints reduce to Kronecker deltas and are returned exactly.
inline double wigner_d(int n, int k, int l, double x) {
  if (n < 0 || std::abs(k) > n || std::abs(l) > n)
    throw std::out_of_range("wigner_d: orders (" + std::to_string(k) + "," +
                            std::to_string(l) + ") exceed degree " +
                            std::to_string(n));
  if (x == 1.0) return (k == l) ? 1.0 : 0.0;
  if (x == -1.0) return (k == -l) ? parity(n + k) : 0.0;
  const int a = std::abs(k - l);
  const int b = std::abs(k + l);
  const int s = n - std::max(std::abs(k), std::abs(l));
  const double sign = (k > l) ? parity(k + l) : 1.0;
  const double u = 0.5 * (1.0 - x);
  const double v = 0.5 * (1.0 + x);
  double halves = 1.0;
  if (a > 0) halves *= std::pow(u, 0.5 * a);
  if (b > 0) halves *= std::pow(v, 0.5 * b);
  return sign * detail::wigner_d_coefficient(n, s, a, b) * halves *
         jacobi_poly(s, a, b, x);
}

/// L2-normalized Wigner-D function,
///   D^n_{k,l}(R(alpha,beta,gamma)) = sqrt(2n+1) e^{-ik alpha} d^n_{k,l}(cos beta) e^{-il gamma}.
inline cplx wigner_D(int n, int k, int l, const EulerAngles& r) {
  const double d = wigner_d(n, k, l, std::cos(r.beta));
  return std::polar(std::sqrt(2.0 * n + 1.0) * d, -k * r.alpha - l * r.gamma);
}

/// Table of the special values d^n_{j,k}(0) for all |j|,|k| <= n <= N.
/// Per degree, a (2n+1) x (2n+1) block with j varying fastest, so the
/// transforms stream over contiguous rows for fixed k.
struct WignerDZeroTable {
  int bandwidth = 0;
  std::vector<double> values;

  static std::int64_t block_offset(int n) {
    const std::int64_t m = n;
    return m * (2 * m - 1) * (2 * m + 1) / 3;
  }

  double operator()(int n, int j, int k) const {
    return values[static_cast<std::size_t>(
        block_offset(n) + static_cast<std::int64_t>(k + n) * (2 * n + 1) +
        (j + n))];
  }

  /// Pointer to the contiguous run d^n_{j,k}(0), j = -n..n, for fixed (n,k).
  const double* row(int n, int k) const {
    return values.data() + block_offset(n) +
           static_cast<std::int64_t>(k + n) * (2 * n + 1);
  }

  double& slot(int n, int j, int k) {
    return values[static_cast<std::size_t>(
        block_offset(n) + static_cast<std::int64_t>(k + n) * (2 * n + 1) +
        (j + n))];
  }
};

/// Builds the d^n_{j,k}(0) table by the degree recurrence
///   n L(n+1,j) L(n+1,k) d^{n+1} = -(2n+1) jk d^n - (n+1) L(n,j) L(n,k) d^{n-1},
/// L(n,m) = sqrt(n^2 - m^2), seeded at n = max(j,k) from the closed form.
/// Only the triangle j >= k >= 0 is recurred; everything else is an exact
/// sign reflection,
///   d^n_{k,j}(0) = (-1)^{k+j} d^n_{j,k}(0),
///   d^n_{-j,k}(0) = (-1)^{n+k} d^n_{j,k}(0),
///   d^n_{j,-k}(0) = (-1)^{n+j} d^n_{j,k}(0),
/// so the reflected entries match the stored ones bit for bit.
/// If an intermediate exceeds 1 + 1e-9 in magnitude (the exact values are
/// bounded by 1) the entry is recomputed from the closed form.
inline WignerDZeroTable build_zero_table(int N) {
  if (N < 0) throw std::invalid_argument("build_zero_table: negative bandwidth");
  WignerDZeroTable table;
  table.bandwidth = N;
  table.values.assign(static_cast<std::size_t>(dimension(N)), 0.0);

  constexpr double guard = 1.0 + 1e-9;
  for (int j = 0; j <= N; ++j) {
    for (int k = 0; k <= j; ++k) {
      double prev = 0.0;
      double cur = wigner_d(j, j, k, 0.0);
      table.slot(j, j, k) = cur;
      for (int n = j; n < N; ++n) {
        double next;
        if (n == 0) {
          next = 0.0;  // d^1_{0,0}(0) = P_1(0)
        } else {
          const double lj1 = std::sqrt(static_cast<double>(
              (static_cast<std::int64_t>(n) + 1) * (n + 1) -
              static_cast<std::int64_t>(j) * j));
          const double lk1 = std::sqrt(static_cast<double>(
              (static_cast<std::int64_t>(n) + 1) * (n + 1) -
              static_cast<std::int64_t>(k) * k));
          const double lj = std::sqrt(static_cast<double>(
              static_cast<std::int64_t>(n) * n - static_cast<std::int64_t>(j) * j));
          const double lk = std::sqrt(static_cast<double>(
              static_cast<std::int64_t>(n) * n - static_cast<std::int64_t>(k) * k));
          next = (-(2.0 * n + 1.0) * (static_cast<double>(j) * k) * cur -
                  (n + 1.0) * lj * lk * prev) /
                 (static_cast<double>(n) * lj1 * lk1);
          if (std::abs(next) > guard) next = wigner_d(n + 1, j, k, 0.0);
        }
        table.slot(n + 1, j, k) = next;
        prev = cur;
        cur = next;
      }
    }
  }

  for (int n = 0; n <= N; ++n) {
    for (int j = 0; j <= n; ++j) {
      for (int k = 0; k <= j; ++k) {
        const double v = table.slot(n, j, k);
        const double w = parity(k + j) * v;  // d^n_{k,j}(0)
        table.slot(n, k, j) = w;
        table.slot(n, -j, k) = parity(n + k) * v;
        table.slot(n, j, -k) = parity(n + j) * v;
        table.slot(n, -j, -k) = parity(j + k) * v;
        table.slot(n, -k, j) = parity(n + j) * w;
        table.slot(n, k, -j) = parity(n + k) * w;
        table.slot(n, -k, -j) = parity(k + j) * w;
      }
    }
  }
  return table;
}

}  // namespace so3ft
