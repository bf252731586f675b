#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "so3ft/core_types.hpp"
#include "so3ft/fourier.hpp"
#include "so3ft/wigner_transform.hpp"

namespace so3ft {

enum class QuadratureFlavor { ClenshawCurtis, GaussLegendre };

/// Product quadrature rule on the rotation group, exact for band-limited
/// integrands up to bandwidth 2N: equispaced alpha/gamma with 2N+2 points
/// each (even counts support the symmetry-reduced sampling divisibility
/// rule), beta nodes per flavor.  beta_weights sum to 1 and carry the full
/// Haar normalization; the weight of node (a,b,c) is beta_weights[b]/(A*C),
/// so all node weights are positive and sum to 1.
struct QuadratureRule {
  int bandwidth = 0;
  QuadratureFlavor flavor = QuadratureFlavor::ClenshawCurtis;
  int alpha_count = 0;
  int gamma_count = 0;
  std::vector<double> beta_nodes;
  std::vector<double> beta_weights;

  int beta_count() const { return static_cast<int>(beta_nodes.size()); }
  std::int64_t node_count() const {
    return static_cast<std::int64_t>(alpha_count) * beta_count() * gamma_count;
  }

  double node_weight(int b) const {
    return beta_weights[static_cast<std::size_t>(b)] /
           (static_cast<double>(alpha_count) * gamma_count);
  }

  GridSpec grid() const {
    GridSpec g;
    g.alpha_count = alpha_count;
    g.gamma_count = gamma_count;
    g.beta_nodes = beta_nodes;
    g.beta_weights = beta_weights;
    return g;
  }

  /// Materialized node list in grid order (gamma fastest, then beta, then alpha).
  RotationList nodes() const {
    RotationList out;
    out.reserve(static_cast<std::size_t>(node_count()));
    for (int a = 0; a < alpha_count; ++a)
      for (int b = 0; b < beta_count(); ++b)
        for (int c = 0; c < gamma_count; ++c)
          out.emplace_back(two_pi * a / alpha_count, beta_nodes[static_cast<std::size_t>(b)],
                           two_pi * c / gamma_count);
    return out;
  }

  /// Per-node weights aligned with nodes().
  std::vector<double> node_weights() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(node_count()));
    for (int a = 0; a < alpha_count; ++a)
      for (int b = 0; b < beta_count(); ++b)
        for (int c = 0; c < gamma_count; ++c) out.push_back(node_weight(b));
    return out;
  }
};

/// Nodes and weights of the n-point Gauss-Legendre rule on (-1, 1), i.e. the
/// roots of P_n with weights 2 / ((1-x^2) P_n'(x)^2).  Newton iteration from
/// Chebyshev initial guesses; computed for the positive half and mirrored.
inline std::pair<std::vector<double>, std::vector<double>> legendre_roots(int n) {
  if (n < 1) throw std::invalid_argument("legendre_roots: n must be >= 1");
  std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));

  auto legendre_pair = [n](double t) {
    double pm1 = 1.0, p = t;
    if (n == 0) return std::pair<double, double>{1.0, 0.0};
    for (int m = 2; m <= n; ++m) {
      const double pnext = ((2.0 * m - 1.0) * t * p - (m - 1.0) * pm1) / m;
      pm1 = p;
      p = pnext;
    }
    const double dp = n * (t * p - pm1) / (t * t - 1.0);
    return std::pair<double, double>{p, dp};
  };

  const int half = n / 2;
  for (int i = 0; i < half; ++i) {
    // i-th root from the upper end; Chebyshev-type initial guess
    double t = std::cos(pi * (i + 0.75) / (n + 0.5));
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_pair(t);
      const double step = p / dp;
      t -= step;
      if (std::abs(step) < 1e-15) { converged = true; break; }
    }
    if (!converged) throw std::runtime_error("legendre_roots: Newton iteration stalled");
    const auto [p, dp] = legendre_pair(t);
    (void)p;
    const double weight = 2.0 / ((1.0 - t * t) * dp * dp);
    x[static_cast<std::size_t>(n - 1 - i)] = t;
    x[static_cast<std::size_t>(i)] = -t;
    w[static_cast<std::size_t>(n - 1 - i)] = weight;
    w[static_cast<std::size_t>(i)] = weight;
  }
  if (n % 2 == 1) {
    const auto [p, dp] = legendre_pair(0.0);
    (void)p;
    x[static_cast<std::size_t>(half)] = 0.0;
    w[static_cast<std::size_t>(half)] = 2.0 / (dp * dp);
  }
  return {x, w};
}

/// Clenshaw-Curtis flavor: beta_b = pi b / (2N+1) for b = 0..2N+1 (endpoints
/// included), weights from the Fejer-type closed form solving the cosine
/// moment system
///   sum_b w_b cos(j beta_b) = int_0^pi cos(j beta) sin(beta) d(beta),  j = 0..2N+1,
/// which makes the product rule exact on band-limited integrands up to 2N.
inline QuadratureRule clenshaw_curtis_rule(int N) {
  if (N < 0) throw std::invalid_argument("clenshaw_curtis_rule: negative bandwidth");
  QuadratureRule rule;
  rule.bandwidth = N;
  rule.flavor = QuadratureFlavor::ClenshawCurtis;
  rule.alpha_count = rule.gamma_count = 2 * N + 2;

  const int L = 2 * N + 1;
  const int B = 2 * N + 2;
  rule.beta_nodes.resize(static_cast<std::size_t>(B));
  rule.beta_weights.resize(static_cast<std::size_t>(B));
  for (int b = 0; b < B; ++b) {
    const double beta = pi * b / L;
    rule.beta_nodes[static_cast<std::size_t>(b)] = beta;
    double s = 1.0;  // cosine moments: 2 at j=0, -2/(j^2-1) at even j, 0 at odd j
    for (int m = 1; 2 * m <= L - 1; ++m)
      s -= 2.0 / (4.0 * m * m - 1.0) * std::cos(2.0 * m * beta);
    const double sigma = (b == 0 || b == L) ? 0.5 : 1.0;
    // stored weights absorb the 1/2 of the Haar measure: sum_b = 1
    rule.beta_weights[static_cast<std::size_t>(b)] = sigma * s / L;
    if (rule.beta_weights[static_cast<std::size_t>(b)] <= 0.0)
      throw std::logic_error("clenshaw_curtis_rule: nonpositive weight");
  }
  return rule;
}

/// Gauss-Legendre flavor: beta = arccos of the N+1 roots of P_{N+1}; half the
/// beta nodes of the Clenshaw-Curtis rule.
inline QuadratureRule gauss_legendre_rule(int N) {
  if (N < 0) throw std::invalid_argument("gauss_legendre_rule: negative bandwidth");
  QuadratureRule rule;
  rule.bandwidth = N;
  rule.flavor = QuadratureFlavor::GaussLegendre;
  rule.alpha_count = rule.gamma_count = 2 * N + 2;

  const auto [x, w] = legendre_roots(N + 1);
  const int B = N + 1;
  rule.beta_nodes.resize(static_cast<std::size_t>(B));
  rule.beta_weights.resize(static_cast<std::size_t>(B));
  for (int b = 0; b < B; ++b) {
    // descending x gives ascending beta
    rule.beta_nodes[static_cast<std::size_t>(b)] = std::acos(x[static_cast<std::size_t>(B - 1 - b)]);
    rule.beta_weights[static_cast<std::size_t>(b)] = 0.5 * w[static_cast<std::size_t>(B - 1 - b)];
  }
  return rule;
}

inline QuadratureRule make_rule(QuadratureFlavor flavor, int N) {
  return flavor == QuadratureFlavor::ClenshawCurtis ? clenshaw_curtis_rule(N)
                                                    : gauss_legendre_rule(N);
}

/// Recovers harmonic coefficients from samples on the rule grid,
///   fhat_n^{k,l} = sum_m omega_m f(R_m) conj(D^n_{k,l}(R_m)),
/// computed as the adjoint Wigner transform of the weighted grid analysis;
/// exact for band-limited f with bandwidth <= N.
inline HarmonicCoefficients analyze(const QuadratureRule& rule, const WignerTransformPlan& plan,
                                    std::span<const cplx> samples) {
  if (plan.bandwidth != rule.bandwidth)
    throw std::invalid_argument("analyze: plan/rule bandwidth mismatch");
  if (static_cast<std::int64_t>(samples.size()) != rule.node_count())
    throw std::invalid_argument("analyze: sample count " + std::to_string(samples.size()) +
                                " does not match rule node count " +
                                std::to_string(rule.node_count()));
  const FourierCube cube = grid_analysis(samples, rule.grid(), rule.bandwidth);
  return adjoint(plan, cube);
}

inline HarmonicCoefficients analyze(const QuadratureRule& rule, std::span<const cplx> samples) {
  const WignerTransformPlan plan(rule.bandwidth);
  return analyze(rule, plan, samples);
}

}  // namespace so3ft
