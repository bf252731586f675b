#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "so3ft/core_types.hpp"
#include "so3ft/threading.hpp"

namespace so3ft {

/// Product sampling grid on the torus: alpha and gamma equispaced on [0, 2pi),
/// beta an arbitrary node list with quadrature weights along that axis
/// (uniform 1/B for a plain torus grid).  Sample order: gamma fastest, then
/// beta, then alpha.
struct GridSpec {
  int alpha_count = 0;
  int gamma_count = 0;
  std::vector<double> beta_nodes;
  std::vector<double> beta_weights;

  static GridSpec torus(int A, int B, int C) {
    GridSpec g;
    g.alpha_count = A;
    g.gamma_count = C;
    g.beta_nodes.resize(static_cast<std::size_t>(B));
    g.beta_weights.assign(static_cast<std::size_t>(B), 1.0 / B);
    for (int b = 0; b < B; ++b) g.beta_nodes[static_cast<std::size_t>(b)] = two_pi * b / B;
    return g;
  }

  int beta_count() const { return static_cast<int>(beta_nodes.size()); }
  std::int64_t sample_count() const {
    return static_cast<std::int64_t>(alpha_count) * beta_count() * gamma_count;
  }
  double alpha(int a) const { return two_pi * a / alpha_count; }
  double gamma(int c) const { return two_pi * c / gamma_count; }
};

namespace detail {

/// e^{sign * i * m * node} for m = -N..N (m fastest), one row per node.
inline std::vector<cplx> phase_table(std::span<const double> nodes, int N, double sign) {
  const int L = 2 * N + 1;
  std::vector<cplx> t(nodes.size() * static_cast<std::size_t>(L));
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (int m = -N; m <= N; ++m)
      t[i * static_cast<std::size_t>(L) + static_cast<std::size_t>(m + N)] =
          std::polar(1.0, sign * m * nodes[i]);
  return t;
}

inline std::vector<double> equispaced(int count) {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = two_pi * i / count;
  return v;
}

}  // namespace detail

/// Exact evaluation of the cube's trigonometric polynomial at arbitrary
/// rotations: g(R_m) = sum_{k,j,l} ghat_{k,j,l} e^{i(k alpha_m + j beta_m + l gamma_m)}.
/// Direct separable summation, no approximation.
inline std::vector<cplx> synthesize_at(const FourierCube& ghat, const RotationList& nodes) {
  const int N = ghat.bandwidth;
  const int L = 2 * N + 1;
  std::vector<cplx> values(nodes.size());

  parallel_for(0, static_cast<std::int64_t>(nodes.size()), [&](std::int64_t m) {
    const EulerAngles& r = nodes[static_cast<std::size_t>(m)];
    thread_local std::vector<cplx> pa, pb, pg;
    pa.resize(static_cast<std::size_t>(L));
    pb.resize(static_cast<std::size_t>(L));
    pg.resize(static_cast<std::size_t>(L));
    for (int t = -N; t <= N; ++t) {
      pa[static_cast<std::size_t>(t + N)] = std::polar(1.0, t * r.alpha);
      pb[static_cast<std::size_t>(t + N)] = std::polar(1.0, t * r.beta);
      pg[static_cast<std::size_t>(t + N)] = std::polar(1.0, t * r.gamma);
    }
    cplx total{0.0, 0.0};
    const cplx* cell = ghat.data.data();
    for (int ik = 0; ik < L; ++ik) {
      cplx sk{0.0, 0.0};
      for (int ij = 0; ij < L; ++ij) {
        cplx sl{0.0, 0.0};
        for (int il = 0; il < L; ++il) sl += cell[il] * pg[static_cast<std::size_t>(il)];
        cell += L;
        sk += sl * pb[static_cast<std::size_t>(ij)];
      }
      total += sk * pa[static_cast<std::size_t>(ik)];
    }
    values[static_cast<std::size_t>(m)] = total;
  });
  return values;
}

namespace detail {

inline std::vector<double> synthesize_real_at_counted(const FourierCube& ghat,
                                                      const RotationList& nodes,
                                                      std::uint64_t* j_terms) {
  const int N = ghat.bandwidth;
  const int L = 2 * N + 1;

  double scale = 0.0;
  for (const cplx& v : ghat.data) scale = std::max(scale, std::abs(v));
  const double tol = 1e-10 * std::max(1.0, scale);
  for (int k = -N; k <= N; ++k)
    for (int j = -N; j <= N; ++j)
      for (int l = -N; l <= N; ++l)
        if (std::abs(ghat.at(k, j, l) - std::conj(ghat.at(-k, -j, -l))) > tol)
          throw std::invalid_argument(
              "synthesize_real_at: cube is not conjugate-symmetric at (" +
              std::to_string(k) + "," + std::to_string(j) + "," + std::to_string(l) + ")");

  if (j_terms) *j_terms = static_cast<std::uint64_t>(nodes.size()) * L * L * (N + 1);
  std::vector<double> values(nodes.size());

  parallel_for(0, static_cast<std::int64_t>(nodes.size()), [&](std::int64_t m) {
    const EulerAngles& r = nodes[static_cast<std::size_t>(m)];
    thread_local std::vector<cplx> pa, pb, pg;
    pa.resize(static_cast<std::size_t>(L));
    pb.resize(static_cast<std::size_t>(N + 1));
    pg.resize(static_cast<std::size_t>(L));
    for (int t = -N; t <= N; ++t) {
      pa[static_cast<std::size_t>(t + N)] = std::polar(1.0, t * r.alpha);
      pg[static_cast<std::size_t>(t + N)] = std::polar(1.0, t * r.gamma);
    }
    for (int j = 0; j <= N; ++j)
      pb[static_cast<std::size_t>(j)] = std::polar(j == 0 ? 1.0 : 2.0, j * r.beta);

    cplx total{0.0, 0.0};
    for (int ik = 0; ik < L; ++ik) {
      cplx sk{0.0, 0.0};
      // nonnegative beta frequencies only; j = 0 once, j > 0 doubled
      const cplx* cell =
          ghat.data.data() + (static_cast<std::size_t>(ik) * L + static_cast<std::size_t>(N)) * L;
      for (int j = 0; j <= N; ++j) {
        cplx sl{0.0, 0.0};
        for (int il = 0; il < L; ++il) sl += cell[il] * pg[static_cast<std::size_t>(il)];
        cell += L;
        sk += sl * pb[static_cast<std::size_t>(j)];
      }
      total += sk * pa[static_cast<std::size_t>(ik)];
    }
    values[static_cast<std::size_t>(m)] = total.real();
  });
  return values;
}

}  // namespace detail

/// Half-spectrum synthesis for conjugate-symmetric cubes
/// (ghat_{k,j,l} = conj(ghat_{-k,-j,-l}), checked to 1e-10):
///   Re sum_{k,l} sum_{j=0}^{N} (1 + [j != 0]) ghat_{k,j,l} e^{i(k alpha + j beta + l gamma)},
/// equal to synthesize_at while summing only half the j range.
inline std::vector<double> synthesize_real_at(const FourierCube& ghat,
                                              const RotationList& nodes) {
  return detail::synthesize_real_at_counted(ghat, nodes, nullptr);
}

/// Separable evaluation of the cube on a product grid; output in grid order
/// (gamma fastest, then beta, then alpha).
inline std::vector<cplx> synthesize_grid(const FourierCube& ghat, const GridSpec& grid) {
  const int N = ghat.bandwidth;
  const int L = 2 * N + 1;
  const int A = grid.alpha_count, B = grid.beta_count(), C = grid.gamma_count;

  const auto ea = detail::phase_table(detail::equispaced(A), N, +1.0);
  const auto eb = detail::phase_table(grid.beta_nodes, N, +1.0);
  const auto ec = detail::phase_table(detail::equispaced(C), N, +1.0);

  // stage 1: contract gamma:  t1[k,j,c] = sum_l ghat[k,j,l] e^{+il gamma_c}
  std::vector<cplx> t1(static_cast<std::size_t>(L) * L * C);
  parallel_for(0, static_cast<std::int64_t>(L) * L, [&](std::int64_t kj) {
    const cplx* row = ghat.data.data() + static_cast<std::size_t>(kj) * L;
    cplx* out = t1.data() + static_cast<std::size_t>(kj) * C;
    for (int c = 0; c < C; ++c) {
      const cplx* ph = ec.data() + static_cast<std::size_t>(c) * L;
      cplx s{0.0, 0.0};
      for (int il = 0; il < L; ++il) s += row[il] * ph[il];
      out[c] = s;
    }
  });

  // stage 2: contract beta:  t2[k,b,c] = sum_j t1[k,j,c] e^{+ij beta_b}
  std::vector<cplx> t2(static_cast<std::size_t>(L) * B * C, cplx{0.0, 0.0});
  parallel_for(0, L, [&](std::int64_t k) {
    const cplx* slab = t1.data() + static_cast<std::size_t>(k) * L * C;
    cplx* out = t2.data() + static_cast<std::size_t>(k) * B * C;
    for (int b = 0; b < B; ++b) {
      const cplx* ph = eb.data() + static_cast<std::size_t>(b) * L;
      cplx* dst = out + static_cast<std::size_t>(b) * C;
      for (int j = 0; j < L; ++j) {
        const cplx w = ph[j];
        const cplx* src = slab + static_cast<std::size_t>(j) * C;
        for (int c = 0; c < C; ++c) dst[c] += w * src[c];
      }
    }
  });

  // stage 3: contract alpha:  g[a,b,c] = sum_k t2[k,b,c] e^{+ik alpha_a}
  std::vector<cplx> values(static_cast<std::size_t>(A) * B * C, cplx{0.0, 0.0});
  parallel_for(0, A, [&](std::int64_t a) {
    cplx* dst = values.data() + static_cast<std::size_t>(a) * B * C;
    const cplx* ph = ea.data() + static_cast<std::size_t>(a) * L;
    for (int k = 0; k < L; ++k) {
      const cplx w = ph[k];
      const cplx* src = t2.data() + static_cast<std::size_t>(k) * B * C;
      for (std::int64_t i = 0; i < static_cast<std::int64_t>(B) * C; ++i)
        dst[i] += w * src[i];
    }
  });
  return values;
}

namespace detail {

/// Weighted separable analysis  cube[k,j,l] =
///   sum_{a,b,c} wa wb_b wc samples[a,b,c] e^{-i(k alpha_a + j beta_b + l gamma_c)}.
/// With wa = 1/A, wc = 1/C and the grid's beta weights this is the
/// sample-to-coefficient map of the quadrature pipelines; with all weights 1
/// it is the bare adjoint Fourier matrix applied to grid samples.
inline FourierCube analysis_on_grid(std::span<const cplx> samples, const GridSpec& grid,
                                    int N, double wa, std::span<const double> wb, double wc) {
  const int L = 2 * N + 1;
  const int A = grid.alpha_count, B = grid.beta_count(), C = grid.gamma_count;
  if (static_cast<std::int64_t>(samples.size()) != grid.sample_count())
    throw std::invalid_argument("analysis_on_grid: sample count " +
                                std::to_string(samples.size()) + " does not match grid (" +
                                std::to_string(grid.sample_count()) + ")");
  if (A < L || C < L)
    throw std::invalid_argument("analysis_on_grid: grid smaller than 2N+1 along alpha/gamma");

  const auto ea = detail::phase_table(detail::equispaced(A), N, -1.0);
  const auto eb = detail::phase_table(grid.beta_nodes, N, -1.0);
  const auto ec = detail::phase_table(detail::equispaced(C), N, -1.0);

  // stage 1: contract alpha:  v1[k,b,c] = wa sum_a e^{-ik alpha_a} f[a,b,c]
  std::vector<cplx> v1(static_cast<std::size_t>(L) * B * C, cplx{0.0, 0.0});
  parallel_for(0, L, [&](std::int64_t k) {
    cplx* dst = v1.data() + static_cast<std::size_t>(k) * B * C;
    for (int a = 0; a < A; ++a) {
      const cplx w = wa * ea[static_cast<std::size_t>(a) * L + static_cast<std::size_t>(k)];
      const cplx* src = samples.data() + static_cast<std::size_t>(a) * B * C;
      for (std::int64_t i = 0; i < static_cast<std::int64_t>(B) * C; ++i)
        dst[i] += w * src[i];
    }
  });

  // stage 2: contract beta:  v2[k,j,c] = sum_b wb_b e^{-ij beta_b} v1[k,b,c]
  std::vector<cplx> v2(static_cast<std::size_t>(L) * L * C, cplx{0.0, 0.0});
  parallel_for(0, L, [&](std::int64_t k) {
    const cplx* slab = v1.data() + static_cast<std::size_t>(k) * B * C;
    cplx* out = v2.data() + static_cast<std::size_t>(k) * L * C;
    for (int j = 0; j < L; ++j) {
      cplx* dst = out + static_cast<std::size_t>(j) * C;
      for (int b = 0; b < B; ++b) {
        const cplx w = wb[static_cast<std::size_t>(b)] *
                       eb[static_cast<std::size_t>(b) * L + static_cast<std::size_t>(j)];
        const cplx* src = slab + static_cast<std::size_t>(b) * C;
        for (int c = 0; c < C; ++c) dst[c] += w * src[c];
      }
    }
  });

  // stage 3: contract gamma:  cube[k,j,l] = wc sum_c e^{-il gamma_c} v2[k,j,c]
  FourierCube cube(N);
  parallel_for(0, static_cast<std::int64_t>(L) * L, [&](std::int64_t kj) {
    const cplx* src = v2.data() + static_cast<std::size_t>(kj) * C;
    cplx* dst = cube.data.data() + static_cast<std::size_t>(kj) * L;
    for (int l = 0; l < L; ++l) {
      const cplx* ph = ec.data();
      cplx s{0.0, 0.0};
      for (int c = 0; c < C; ++c)
        s += src[c] * ph[static_cast<std::size_t>(c) * L + static_cast<std::size_t>(l)];
      dst[l] = wc * s;
    }
  });
  return cube;
}

}  // namespace detail

/// Weighted sample-to-coefficient map on a product grid: uniform 1/A, 1/C
/// averaging along the equispaced angles and the grid's quadrature weights
/// along beta.  On a plain torus grid (uniform beta weights) this inverts
/// synthesize_grid exactly for bandwidth <= N.
inline FourierCube grid_analysis(std::span<const cplx> samples, const GridSpec& grid, int N) {
  return detail::analysis_on_grid(samples, grid, N, 1.0 / grid.alpha_count,
                                  grid.beta_weights, 1.0 / grid.gamma_count);
}

}  // namespace so3ft
