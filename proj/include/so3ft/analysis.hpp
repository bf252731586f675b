#pragma once

#include <cstdint>
#include <vector>

#include "so3ft/core_types.hpp"
#include "so3ft/fourier.hpp"
#include "so3ft/special_functions.hpp"
#include "so3ft/threading.hpp"

namespace so3ft {

/// Sobolev norm with degree weight (1 + n(n+1))^s:
///   sqrt( sum_{(n,k,l)} (1 + n(n+1))^s |fhat_n^{k,l}|^2 ).
inline double sobolev_norm(const HarmonicCoefficients& fhat, double s) {
  if (s < 0.0) throw std::invalid_argument("sobolev_norm: s must be nonnegative");
  double total = 0.0;
  for (int n = 0; n <= fhat.bandwidth; ++n) {
    const double weight = std::pow(1.0 + static_cast<double>(n) * (n + 1), s);
    double block = 0.0;
    const std::int64_t lo = harmonic_index(n, -n, -n);
    const std::int64_t count = static_cast<std::int64_t>(2 * n + 1) * (2 * n + 1);
    for (std::int64_t i = lo; i < lo + count; ++i)
      block += std::norm(fhat.data[static_cast<std::size_t>(i)]);
    total += weight * block;
  }
  return std::sqrt(total);
}

namespace detail {

/// I_n = int_{-1}^{1} P_n(t) (1-t^2)^{-1/4} dt for even n, via the closed
/// Gamma form with the reflection formula absorbing the poles at negative
/// arguments; zero for odd n by parity.
inline double counterexample_integral(int n) {
  if (n % 2 != 0) return 0.0;
  const double lg34 = std::lgamma(0.75);
  if (n == 0) {
    // I_0 = B(1/2, 3/4)
    return std::exp(std::lgamma(0.5) + lg34 - std::lgamma(1.25));
  }
  const double m = n / 2.0;
  const double log_val = 0.5 * std::log(2.0) - std::log(2.0) - std::log(pi) +
                         2.0 * lg34 + std::lgamma(m + 0.25) + std::lgamma(m + 0.5) -
                         std::lgamma(m + 1.25) - std::lgamma(m + 1.0);
  return std::exp(log_val);
}

}  // namespace detail

/// Harmonic coefficients of f(R(alpha,beta,gamma)) = 1 / sqrt(sin beta):
/// supported on (k,l) = (0,0) with fhat_n^{0,0} = sqrt(2n+1)/2 * I_n,
/// I_n the Legendre moment of (1-t^2)^{-1/4} (zero for odd n).
inline HarmonicCoefficients counterexample_coefficients(int N) {
  HarmonicCoefficients out(N);
  for (int n = 0; n <= N; ++n)
    out.at(n, 0, 0) = cplx{0.5 * std::sqrt(2.0 * n + 1.0) * detail::counterexample_integral(n), 0.0};
  return out;
}

/// Diagnostics of the regularity loss example.
struct RegularityReport {
  std::vector<int> even_n;       // even degrees 2..N
  std::vector<double> xi;        // xi_n extracted from I_n, expected in (7/8, 1)
  std::vector<double> s_values;
  // partial_norm_sq[si][n] = sum over degrees <= n of the weighted coefficient
  // squares at exponent s_values[si]
  std::vector<std::vector<double>> partial_norm_sq;

  double partial_norm(std::size_t si, int upto) const {
    return std::sqrt(partial_norm_sq[si][static_cast<std::size_t>(upto)]);
  }

  /// Summand (1 + n(n+1))^s |fhat_n^{0,0}|^2 of the squared Sobolev norm.
  double term(std::size_t si, int n) const {
    const auto& c = partial_norm_sq[si];
    return c[static_cast<std::size_t>(n)] - (n == 0 ? 0.0 : c[static_cast<std::size_t>(n - 1)]);
  }
};

/// Evaluates xi_n = I_n pi sqrt(n) (n + 1/2) / (2 Gamma(3/4)^2) for even n and
/// the partial Sobolev norms of the counterexample for each requested s.
inline RegularityReport counterexample_regularity_report(int N,
                                                         const std::vector<double>& s_values) {
  RegularityReport rep;
  rep.s_values = s_values;
  const double g34sq = std::exp(2.0 * std::lgamma(0.75));
  for (int n = 2; n <= N; n += 2) {
    const double in = detail::counterexample_integral(n);
    rep.even_n.push_back(n);
    rep.xi.push_back(in * pi * std::sqrt(static_cast<double>(n)) * (n + 0.5) / (2.0 * g34sq));
  }
  rep.partial_norm_sq.assign(s_values.size(), std::vector<double>(static_cast<std::size_t>(N) + 1));
  for (std::size_t si = 0; si < s_values.size(); ++si) {
    double acc = 0.0;
    for (int n = 0; n <= N; ++n) {
      const double coeff = 0.5 * std::sqrt(2.0 * n + 1.0) * detail::counterexample_integral(n);
      acc += std::pow(1.0 + static_cast<double>(n) * (n + 1), s_values[si]) * coeff * coeff;
      rep.partial_norm_sq[si][static_cast<std::size_t>(n)] = acc;
    }
  }
  return rep;
}

/// Per-degree sums I_n(k,l) = sum_j |d^n_{j,k}(0) d^n_{j,l}(0)|^2 together
/// with the bound check I_n <= 151 ln(2n+1)/sqrt(2n+1) (n > 1) and the
/// partial sum sum_n (2n+1)^{1-2s} I_n.  The d columns are generated by the
/// degree recurrence for each fixed (j,k) pair, O(n_max^2) work and O(n_max)
/// memory; no full table is materialized.
struct SeriesEstimateReport {
  int k = 0, l = 0;
  double s = 0.0;
  std::vector<double> I;          // I[n], zero below max(|k|,|l|)
  bool bound_ok = true;
  double worst_bound_ratio = 0.0;  // max over n>1 of I_n / bound_n
  int worst_n = 0;
  double partial_sum = 0.0;        // sum (2n+1)^{1-2s} I_n
  double sobolev_majorant = 0.0;   // sum (2n+1)(1+n(n+1))^{-s} I_n
};

namespace detail {

/// Runs the x = 0 degree recurrence for fixed (j,k) from n = max(|j|,|k|) to
/// n_max, invoking visit(n, value) for every degree.
template <typename Visit>
void zero_value_run(int j, int k, int n_max, Visit&& visit) {
  const int n0 = std::max(std::abs(j), std::abs(k));
  if (n0 > n_max) return;
  double prev = 0.0;
  double cur = wigner_d(n0, j, k, 0.0);
  visit(n0, cur);
  for (int n = n0; n < n_max; ++n) {
    double next;
    if (n == 0) {
      next = 0.0;
    } else {
      const double jj = static_cast<double>(j), kk = static_cast<double>(k);
      const double lj1 = std::sqrt((n + 1.0) * (n + 1.0) - jj * jj);
      const double lk1 = std::sqrt((n + 1.0) * (n + 1.0) - kk * kk);
      const double lj = std::sqrt(static_cast<double>(n) * n - jj * jj);
      const double lk = std::sqrt(static_cast<double>(n) * n - kk * kk);
      next = (-(2.0 * n + 1.0) * (jj * kk) * cur - (n + 1.0) * lj * lk * prev) /
             (static_cast<double>(n) * lj1 * lk1);
      if (std::abs(next) > 1.0 + 1e-9) next = wigner_d(n + 1, j, k, 0.0);
    }
    visit(n + 1, next);
    prev = cur;
    cur = next;
  }
}

}  // namespace detail

inline SeriesEstimateReport series_estimate_check(int k, int l, int n_max, double s) {
  SeriesEstimateReport rep;
  rep.k = k;
  rep.l = l;
  rep.s = s;
  rep.I.assign(static_cast<std::size_t>(n_max) + 1, 0.0);

  std::vector<double> dk(static_cast<std::size_t>(n_max) + 1),
      dl(static_cast<std::size_t>(n_max) + 1);
  for (int j = -n_max; j <= n_max; ++j) {
    const int lo = std::max({std::abs(j), std::abs(k), std::abs(l)});
    std::fill(dk.begin(), dk.end(), 0.0);
    std::fill(dl.begin(), dl.end(), 0.0);
    detail::zero_value_run(j, k, n_max, [&](int n, double v) { dk[static_cast<std::size_t>(n)] = v; });
    if (l == k) {
      dl = dk;
    } else {
      detail::zero_value_run(j, l, n_max, [&](int n, double v) { dl[static_cast<std::size_t>(n)] = v; });
    }
    for (int n = lo; n <= n_max; ++n) {
      const double p = dk[static_cast<std::size_t>(n)] * dl[static_cast<std::size_t>(n)];
      rep.I[static_cast<std::size_t>(n)] += p * p;
    }
  }

  const int n_lo = std::max(std::abs(k), std::abs(l));
  for (int n = std::max(n_lo, 2); n <= n_max; ++n) {
    const double bound = 151.0 * std::log(2.0 * n + 1.0) / std::sqrt(2.0 * n + 1.0);
    const double ratio = rep.I[static_cast<std::size_t>(n)] / bound;
    if (ratio > rep.worst_bound_ratio) {
      rep.worst_bound_ratio = ratio;
      rep.worst_n = n;
    }
    if (ratio > 1.0) rep.bound_ok = false;
  }
  for (int n = n_lo; n <= n_max; ++n) {
    rep.partial_sum += std::pow(2.0 * n + 1.0, 1.0 - 2.0 * s) * rep.I[static_cast<std::size_t>(n)];
    rep.sobolev_majorant += (2.0 * n + 1.0) *
                            std::pow(1.0 + static_cast<double>(n) * (n + 1), -s) *
                            rep.I[static_cast<std::size_t>(n)];
  }
  return rep;
}

/// Samples the lift g(alpha,beta,gamma) = f(R(alpha,beta,gamma)) on a full
/// torus grid (beta over [0, 2pi)).  Values with beta in (pi, 2pi) come from
/// the double-cover identity g(alpha,beta,gamma) = g(alpha+pi, 2pi-beta,
/// gamma+pi), so only genuine rotations are ever evaluated.  The evaluation
/// path is the harmonic series itself (Jacobi-based Wigner-d per beta row),
/// independent of the zero-table transforms.
inline std::vector<cplx> dfs_lift_sample(const HarmonicCoefficients& fhat, const GridSpec& grid) {
  const int N = fhat.bandwidth;
  const int L = 2 * N + 1;
  const int A = grid.alpha_count, B = grid.beta_count(), C = grid.gamma_count;
  std::vector<cplx> values(static_cast<std::size_t>(A) * B * C);

  parallel_for(0, B, [&](std::int64_t b) {
    double beta = grid.beta_nodes[static_cast<std::size_t>(b)];
    beta = EulerAngles::wrap_angle(beta);
    const bool mirrored = beta > pi;
    const double beta_eval = mirrored ? two_pi - beta : beta;
    const double x = std::cos(beta_eval);

    // h[k,l] = sum_n sqrt(2n+1) fhat_n^{k,l} d^n_{k,l}(cos beta), with the
    // BMC sign (-1)^{k+l} folded in on the mirrored half
    std::vector<cplx> h(static_cast<std::size_t>(L) * L, cplx{0.0, 0.0});
    for (int n = 0; n <= N; ++n) {
      const double scale = std::sqrt(2.0 * n + 1.0);
      for (int k = -n; k <= n; ++k)
        for (int l = -n; l <= n; ++l)
          h[static_cast<std::size_t>((k + N) * L + (l + N))] +=
              scale * wigner_d(n, k, l, x) * fhat.at(n, k, l);
    }
    if (mirrored)
      for (int k = -N; k <= N; ++k)
        for (int l = -N; l <= N; ++l)
          h[static_cast<std::size_t>((k + N) * L + (l + N))] *= parity(k + l);

    // f = sum_{k,l} e^{-i(k alpha + l gamma)} h[k,l]
    std::vector<cplx> hg(static_cast<std::size_t>(L) * C);
    for (int k = 0; k < L; ++k)
      for (int c = 0; c < C; ++c) {
        cplx sum{0.0, 0.0};
        for (int l = 0; l < L; ++l)
          sum += h[static_cast<std::size_t>(k * L + l)] *
                 std::polar(1.0, -(l - N) * grid.gamma(c));
        hg[static_cast<std::size_t>(k * C + c)] = sum;
      }
    for (int a = 0; a < A; ++a)
      for (int c = 0; c < C; ++c) {
        cplx sum{0.0, 0.0};
        for (int k = 0; k < L; ++k)
          sum += hg[static_cast<std::size_t>(k * C + c)] *
                 std::polar(1.0, -(k - N) * grid.alpha(a));
        values[(static_cast<std::size_t>(a) * B + static_cast<std::size_t>(b)) * C +
               static_cast<std::size_t>(c)] = sum;
      }
  });
  return values;
}

}  // namespace so3ft
