#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "so3ft/core_types.hpp"
#include "so3ft/fourier.hpp"
#include "so3ft/quadrature.hpp"
#include "so3ft/wigner_transform.hpp"

namespace so3ft {

/// Plan for the nonequispaced SO(3) Fourier transform D = F W: the Wigner
/// plan plus either an arbitrary node list or a quadrature rule grid.
/// Precomputation holds only the zero table; nothing is stored per node.
struct NsoftPlan {
  WignerTransformPlan wigner;
  std::optional<RotationList> sample_nodes;
  std::optional<QuadratureRule> rule;

  NsoftPlan(WignerTransformPlan plan, RotationList nodes)
      : wigner(std::move(plan)), sample_nodes(std::move(nodes)) {
    if (sample_nodes->empty())
      throw std::invalid_argument("NsoftPlan: empty node list");
  }

  NsoftPlan(WignerTransformPlan plan, QuadratureRule r)
      : wigner(std::move(plan)), rule(std::move(r)) {
    if (rule->bandwidth != wigner.bandwidth)
      throw std::invalid_argument("NsoftPlan: rule/plan bandwidth mismatch");
  }

  int bandwidth() const { return wigner.bandwidth; }

  std::int64_t node_count() const {
    return sample_nodes ? static_cast<std::int64_t>(sample_nodes->size())
                        : rule->node_count();
  }
};

/// Evaluates the band-limited harmonic series at the plan's rotations:
///   f(R_m) = sum_{(n,k,l)} fhat_n^{k,l} D^n_{k,l}(R_m),
/// staged as Fourier synthesis after the Wigner transform.  Coefficient
/// vectors matching the real-valued pattern take the half-spectrum path.
inline std::vector<cplx> nsoft_forward(const NsoftPlan& plan, const HarmonicCoefficients& fhat) {
  if (fhat.bandwidth != plan.bandwidth())
    throw std::invalid_argument("nsoft_forward: bandwidth mismatch");
  const FourierCube cube = forward(plan.wigner, fhat);

  bool real_path = false;
  {
    SymmetrySpec real_spec;
    real_spec.real_valued = true;
    real_path = check_pattern(fhat, real_spec, 1e-10).pass();
  }

  if (plan.sample_nodes) {
    if (real_path) {
      const std::vector<double> re = synthesize_real_at(cube, *plan.sample_nodes);
      std::vector<cplx> out(re.size());
      for (std::size_t i = 0; i < re.size(); ++i) out[i] = cplx{re[i], 0.0};
      return out;
    }
    return synthesize_at(cube, *plan.sample_nodes);
  }
  return synthesize_grid(cube, plan.rule->grid());
}

/// Bare adjoint transform fhat = W^H F^H values (no quadrature weights).
inline HarmonicCoefficients nsoft_adjoint(const NsoftPlan& plan, std::span<const cplx> values) {
  if (static_cast<std::int64_t>(values.size()) != plan.node_count())
    throw std::invalid_argument("nsoft_adjoint: value count " + std::to_string(values.size()) +
                                " does not match plan node count " +
                                std::to_string(plan.node_count()));
  const int N = plan.bandwidth();
  const int L = 2 * N + 1;

  FourierCube cube(N);
  if (plan.sample_nodes) {
    const RotationList& nodes = *plan.sample_nodes;
    parallel_for(0, L, [&](std::int64_t krow) {
      const int k = static_cast<int>(krow) - N;
      cplx* slab = cube.data.data() + static_cast<std::size_t>(krow) * L * L;
      std::vector<cplx> pg(static_cast<std::size_t>(L));
      for (std::size_t m = 0; m < nodes.size(); ++m) {
        const EulerAngles& r = nodes[m];
        const cplx vk = values[m] * std::polar(1.0, -k * r.alpha);
        for (int t = -N; t <= N; ++t)
          pg[static_cast<std::size_t>(t + N)] = std::polar(1.0, -t * r.gamma);
        for (int j = -N; j <= N; ++j) {
          const cplx vkj = vk * std::polar(1.0, -j * r.beta);
          cplx* dst = slab + static_cast<std::size_t>(j + N) * L;
          for (int t = 0; t < L; ++t) dst[t] += vkj * pg[static_cast<std::size_t>(t)];
        }
      }
    });
  } else {
    const GridSpec grid = plan.rule->grid();
    const std::vector<double> ones(grid.beta_nodes.size(), 1.0);
    cube = detail::analysis_on_grid(values, grid, N, 1.0, ones, 1.0);
  }
  return adjoint(plan.wigner, cube);
}

}  // namespace so3ft
