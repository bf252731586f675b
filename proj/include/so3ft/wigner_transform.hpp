#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "so3ft/core_types.hpp"
#include "so3ft/special_functions.hpp"
#include "so3ft/symmetry.hpp"
#include "so3ft/threading.hpp"

namespace so3ft {

/// Precomputed state for the direct Wigner transform: only the d^n_{j,k}(0)
/// table is held (O(N^3) memory), never Wigner-d matrices at sample nodes.
struct WignerTransformPlan {
  int bandwidth = 0;
  WignerDZeroTable zero_table;
  std::optional<SymmetrySpec> symmetry;

  explicit WignerTransformPlan(int N, std::optional<SymmetrySpec> sym = std::nullopt)
      : bandwidth(N), zero_table(build_zero_table(N)), symmetry(std::move(sym)) {}

  WignerTransformPlan(int N, WignerDZeroTable table,
                      std::optional<SymmetrySpec> sym = std::nullopt)
      : bandwidth(N), zero_table(std::move(table)), symmetry(std::move(sym)) {
    if (zero_table.bandwidth < N)
      throw std::invalid_argument("WignerTransformPlan: zero table bandwidth " +
                                  std::to_string(zero_table.bandwidth) +
                                  " below transform bandwidth " + std::to_string(N));
  }
};

namespace detail {

/// Shared kernel of forward / extended_forward: columns over (k,l) pairs,
/// degree streamed innermost over contiguous zero-table rows, the i^{k-l}
/// phase applied once per pair after accumulation.
inline void forward_into(const WignerTransformPlan& plan, const HarmonicCoefficients& fhat,
                         int n_max, FourierCube& out) {
  const int N = fhat.bandwidth;
  const int L = 2 * N + 1;
  const WignerDZeroTable& tab = plan.zero_table;

  parallel_for(0, static_cast<std::int64_t>(L) * L, [&](std::int64_t p) {
    const int k = static_cast<int>(p / L) - N;
    const int l = static_cast<int>(p % L) - N;
    const int n_lo = std::max(std::abs(k), std::abs(l));

    thread_local std::vector<cplx> col;
    col.assign(static_cast<std::size_t>(L), cplx{0.0, 0.0});

    for (int n = n_lo; n <= n_max; ++n) {
      const cplx w = std::sqrt(2.0 * n + 1.0) * fhat.at(n, -k, -l);
      const double* rowk = tab.row(n, k);
      const double* rowl = tab.row(n, l);
      cplx* acc = col.data() + (N - n);
      const int len = 2 * n + 1;
      for (int t = 0; t < len; ++t) acc[t] += w * (rowk[t] * rowl[t]);
    }

    const cplx phase = ipow(k - l);
    const std::int64_t base = cube_index(N, k, -N, l);
    for (int j = 0; j < L; ++j)
      out.data[static_cast<std::size_t>(base + static_cast<std::int64_t>(j) * L)] =
          phase * col[static_cast<std::size_t>(j)];
  });
}

}  // namespace detail

/// Direct Wigner transform: maps harmonic coefficients to the Fourier
/// coefficients of the same function on the torus,
///   ghat_{k,j,l} = i^{k-l} sum_{n >= max(|k|,|j|,|l|)}
///                  sqrt(2n+1) d^n_{j,k}(0) d^n_{j,l}(0) fhat_n^{-k,-l},
/// with the e^{+i(k alpha + j beta + l gamma)} synthesis convention of
/// FourierCube.  O(N^4) flops.
inline FourierCube forward(const WignerTransformPlan& plan, const HarmonicCoefficients& fhat) {
  if (fhat.bandwidth != plan.bandwidth)
    throw std::invalid_argument("forward: coefficient bandwidth " +
                                std::to_string(fhat.bandwidth) +
                                " does not match plan bandwidth " +
                                std::to_string(plan.bandwidth));
  FourierCube out(plan.bandwidth);
  detail::forward_into(plan, fhat, plan.bandwidth, out);
  return out;
}

/// Exact conjugate transpose of forward,
///   fhat_n^{k,l} = sqrt(2n+1) i^{k-l} sum_{j=-n}^{n}
///                  d^n_{j,k}(0) d^n_{j,l}(0) ghat_{-k,j,-l}.
inline HarmonicCoefficients adjoint(const WignerTransformPlan& plan, const FourierCube& ghat) {
  if (ghat.bandwidth != plan.bandwidth)
    throw std::invalid_argument("adjoint: cube bandwidth " +
                                std::to_string(ghat.bandwidth) +
                                " does not match plan bandwidth " +
                                std::to_string(plan.bandwidth));
  const int N = plan.bandwidth;
  const int L = 2 * N + 1;
  const WignerDZeroTable& tab = plan.zero_table;
  HarmonicCoefficients out(N);

  parallel_for(0, static_cast<std::int64_t>(L) * L, [&](std::int64_t p) {
    const int k = static_cast<int>(p / L) - N;
    const int l = static_cast<int>(p % L) - N;
    const int n_lo = std::max(std::abs(k), std::abs(l));
    const cplx phase = ipow(k - l);

    thread_local std::vector<cplx> buf;
    buf.resize(static_cast<std::size_t>(L));
    const std::int64_t base = cube_index(N, -k, -N, -l);
    for (int j = 0; j < L; ++j)
      buf[static_cast<std::size_t>(j)] =
          ghat.data[static_cast<std::size_t>(base + static_cast<std::int64_t>(j) * L)];

    for (int n = n_lo; n <= N; ++n) {
      const double* rowk = tab.row(n, k);
      const double* rowl = tab.row(n, l);
      const cplx* g = buf.data() + (N - n);
      cplx s{0.0, 0.0};
      const int len = 2 * n + 1;
      for (int t = 0; t < len; ++t) s += (rowk[t] * rowl[t]) * g[t];
      out.data[static_cast<std::size_t>(harmonic_index(n, k, l))] =
          std::sqrt(2.0 * n + 1.0) * phase * s;
    }
  });
  return out;
}

/// forward applied to the degree <= n_trunc prefix of fhat (a prefix slice in
/// the degree-major layout); output cube keeps the bandwidth of fhat.
inline FourierCube extended_forward(const WignerTransformPlan& plan,
                                    const HarmonicCoefficients& fhat, int n_trunc) {
  if (fhat.bandwidth != plan.bandwidth)
    throw std::invalid_argument("extended_forward: bandwidth mismatch");
  if (n_trunc < 0 || n_trunc > fhat.bandwidth)
    throw std::out_of_range("extended_forward: truncation degree " +
                            std::to_string(n_trunc) + " outside [0, " +
                            std::to_string(fhat.bandwidth) + "]");
  FourierCube out(plan.bandwidth);
  detail::forward_into(plan, fhat, n_trunc, out);
  return out;
}

struct DenseMatrix {
  std::int64_t rows = 0, cols = 0;
  std::vector<cplx> data;  // row-major

  cplx& at(std::int64_t r, std::int64_t c) {
    return data[static_cast<std::size_t>(r * cols + c)];
  }
  cplx at(std::int64_t r, std::int64_t c) const {
    return data[static_cast<std::size_t>(r * cols + c)];
  }
};

/// Explicit (2N+1)^3 x dim(J_N) matrix of forward, for conditioning studies.
/// Column (n,k,l) holds i^{-k+l} sqrt(2n+1) d^n_{j,-k}(0) d^n_{j,-l}(0) at the
/// cube rows (-k, j, -l), matching forward on unit vectors bit for bit.
inline DenseMatrix materialize_matrix(const WignerTransformPlan& plan) {
  const int N = plan.bandwidth;
  if (N > 16)
    throw std::invalid_argument("materialize_matrix: bandwidth " + std::to_string(N) +
                                " > 16 would materialize an oversized matrix");
  DenseMatrix m;
  m.rows = static_cast<std::int64_t>(2 * N + 1) * (2 * N + 1) * (2 * N + 1);
  m.cols = dimension(N);
  m.data.assign(static_cast<std::size_t>(m.rows * m.cols), cplx{0.0, 0.0});
  const WignerDZeroTable& tab = plan.zero_table;

  for (int n = 0; n <= N; ++n)
    for (int k = -n; k <= n; ++k)
      for (int l = -n; l <= n; ++l) {
        const std::int64_t c = harmonic_index(n, k, l);
        const cplx w = std::sqrt(2.0 * n + 1.0) * cplx{1.0, 0.0};
        const cplx phase = ipow(-k + l);
        const double* rowk = tab.row(n, -k);
        const double* rowl = tab.row(n, -l);
        for (int j = -n; j <= n; ++j) {
          const cplx v = w * (rowk[j + n] * rowl[j + n]);
          m.at(cube_index(N, -k, j, -l), c) = phase * v;
        }
      }
  return m;
}

namespace detail {

/// Column-to-column factor in the symmetry-reduced forward:
///   col[target](j) = sign * (-1)^{j * jpar} * conj^{cnj}( col[source](j) ).
struct ColumnLink {
  double sign = 1.0;
  bool jpar = false;
  bool cnj = false;
};

inline ColumnLink compose(const ColumnLink& outer, const ColumnLink& inner) {
  return {outer.sign * inner.sign, outer.jpar != inner.jpar, outer.cnj != inner.cnj};
}

}  // namespace detail

/// Symmetry-reduced forward: identical output to forward, computed by
/// touching one representative (k,l) column per symmetry class and filling
/// the rest through the coefficient-pattern relations (plus the BMC relation
/// inside each column).  With check_input set, a pattern violation beyond
/// 1e-10 raises an error naming the first violating triple.
inline FourierCube forward_symmetric(const WignerTransformPlan& plan,
                                     const HarmonicCoefficients& fhat,
                                     bool check_input = true) {
  if (!plan.symmetry)
    throw std::invalid_argument("forward_symmetric: plan carries no symmetry spec");
  if (fhat.bandwidth != plan.bandwidth)
    throw std::invalid_argument("forward_symmetric: bandwidth mismatch");
  const SymmetrySpec& spec = *plan.symmetry;

  if (check_input) {
    const PatternReport rep = check_pattern(fhat, spec, 1e-10);
    if (!rep.pass()) {
      const PatternClause* w = rep.worst();
      throw std::runtime_error("forward_symmetric: input violates the '" + w->name +
                               "' pattern by " + std::to_string(w->max_violation) +
                               " at (n,k,l)=(" + std::to_string(w->n) + "," +
                               std::to_string(w->k) + "," + std::to_string(w->l) + ")");
    }
  }

  const int N = plan.bandwidth;
  const int L = 2 * N + 1;
  const WignerDZeroTable& tab = plan.zero_table;
  FourierCube out(N);

  const auto [rdih, rr] = detail::pattern_subgroup(spec.right);
  const auto [ldih, lr] = detail::pattern_subgroup(spec.left);

  std::vector<std::uint8_t> done(static_cast<std::size_t>(L) * L, 0);
  auto pair_id = [&](int k, int l) { return static_cast<std::size_t>((k + N) * L + (l + N)); };

  std::vector<cplx> col(static_cast<std::size_t>(L));
  for (int k = -N; k <= N; ++k)
    for (int l = -N; l <= N; ++l) {
      if (detail::mod_nonzero(k, rr) || detail::mod_nonzero(l, lr)) continue;  // zero columns
      if (done[pair_id(k, l)]) continue;

      // orbit of (k,l) under the applicable pattern relations
      struct Member { int k, l; detail::ColumnLink t; };
      std::vector<Member> orbit{{k, l, {}}};
      done[pair_id(k, l)] = 1;
      for (std::size_t q = 0; q < orbit.size(); ++q) {
        const Member cur = orbit[q];
        auto visit = [&](int k2, int l2, detail::ColumnLink gen) {
          if (done[pair_id(k2, l2)]) return;
          done[pair_id(k2, l2)] = 1;
          orbit.push_back({k2, l2, detail::compose(gen, cur.t)});
        };
        if (rdih) visit(-cur.k, cur.l, {1.0, true, false});
        if (ldih) visit(cur.k, -cur.l, {1.0, true, false});
        if (spec.real_valued)
          visit(-cur.k, -cur.l, {parity(cur.k + cur.l), false, true});
        if (spec.inversion)
          visit(-cur.l, -cur.k, {parity(cur.k + cur.l), false, false});
      }

      // representative column, upper half computed, lower half by BMC
      std::fill(col.begin(), col.end(), cplx{0.0, 0.0});
      const int n_lo = std::max(std::abs(k), std::abs(l));
      for (int n = n_lo; n <= N; ++n) {
        const cplx w = std::sqrt(2.0 * n + 1.0) * fhat.at(n, -k, -l);
        const double* rowk = tab.row(n, k);
        const double* rowl = tab.row(n, l);
        for (int j = 0; j <= n; ++j)
          col[static_cast<std::size_t>(N + j)] += w * (rowk[j + n] * rowl[j + n]);
      }
      const double bmc = parity(k + l);
      for (int j = 1; j <= N; ++j)
        col[static_cast<std::size_t>(N - j)] = bmc * col[static_cast<std::size_t>(N + j)];

      // the relations hold on the phased cube values directly
      const cplx phase = ipow(k - l);
      for (const Member& mem : orbit) {
        const std::int64_t base = cube_index(N, mem.k, -N, mem.l);
        for (int j = -N; j <= N; ++j) {
          cplx v = phase * col[static_cast<std::size_t>(j + N)];
          if (mem.t.cnj) v = std::conj(v);
          double s = mem.t.sign;
          if (mem.t.jpar && (j & 1)) s = -s;
          out.data[static_cast<std::size_t>(base + static_cast<std::int64_t>(j + N) * L)] =
              s * v;
        }
      }
    }
  return out;
}

}  // namespace so3ft
