#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "so3ft/core_types.hpp"
#include "so3ft/special_functions.hpp"
#include "so3ft/threading.hpp"

namespace so3ft {

namespace detail {

struct Mat3 {
  std::array<double, 9> m{};  // row-major

  static Mat3 identity() {
    Mat3 r;
    r.m = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    return r;
  }

  double& operator()(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }
  double operator()(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }
};

inline Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int t = 0; t < 3; ++t) s += a(i, t) * b(t, j);
      r(i, j) = s;
    }
  return r;
}

inline double matrix_distance(const Mat3& a, const Mat3& b) {
  double s = 0.0;
  for (int i = 0; i < 9; ++i) {
    const double d = a.m[static_cast<std::size_t>(i)] - b.m[static_cast<std::size_t>(i)];
    s += d * d;
  }
  return std::sqrt(s);
}

/// Rodrigues rotation about a (not necessarily unit) axis.
inline Mat3 axis_angle_matrix(double ax, double ay, double az, double angle) {
  const double norm = std::sqrt(ax * ax + ay * ay + az * az);
  ax /= norm; ay /= norm; az /= norm;
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  Mat3 r;
  r.m = {t * ax * ax + c,      t * ax * ay - s * az, t * ax * az + s * ay,
         t * ax * ay + s * az, t * ay * ay + c,      t * ay * az - s * ax,
         t * ax * az - s * ay, t * ay * az + s * ax, t * az * az + c};
  return r;
}

inline Mat3 euler_to_matrix(const EulerAngles& e) {
  const Mat3 rz1 = axis_angle_matrix(0, 0, 1, e.alpha);
  const Mat3 ry = axis_angle_matrix(0, 1, 0, e.beta);
  const Mat3 rz2 = axis_angle_matrix(0, 0, 1, e.gamma);
  return rz1 * (ry * rz2);
}

inline EulerAngles matrix_to_euler(const Mat3& r) {
  // off-axis magnitude is |sin(beta)| computed without the acos cancellation;
  // near-degenerate matrices must take the exact-degenerate branches or the
  // atan2 arguments below are pure rounding noise
  const double sb = std::hypot(r(0, 2), r(1, 2));
  if (sb > 1e-9) {
    const double beta = std::atan2(sb, r(2, 2));
    return {std::atan2(r(1, 2), r(0, 2)), beta, std::atan2(r(2, 1), -r(2, 0))};
  }
  if (r(2, 2) > 0.0) {  // beta ~ 0: R = Rz(alpha + gamma)
    return {std::atan2(r(1, 0), r(0, 0)), 0.0, 0.0};
  }
  // beta ~ pi: R = Rz(alpha) Ry(pi) Rz(gamma) depends on alpha - gamma only
  return {std::atan2(-r(1, 0), -r(0, 0)), pi, 0.0};
}

}  // namespace detail

enum class PointGroupKind { Cyclic, Dihedral, Tetrahedral, Octahedral, Icosahedral };

/// Finite rotation subgroup given by an explicit representative set:
///   C_r : z-rotations by 2 pi s / r
///   D_r : C_r plus the same composed with R_y(pi)
///   T, O: D_2 / D_4 cosets under rotations about (1,1,1)
///   I   : D_5 conjugated cosets about the axis
///         eta = (phi^2, 0, phi + sqrt(1 + phi^2) sin(2 pi/5)), phi the golden ratio.
/// Construction verifies cardinality and numerical closure of the set.
struct PointGroup {
  PointGroupKind kind = PointGroupKind::Cyclic;
  int order_param = 1;  // r for C_r / D_r, 0 otherwise
  RotationList elements;

  static PointGroup cyclic(int r);
  static PointGroup dihedral(int r);
  static PointGroup tetrahedral();
  static PointGroup octahedral();
  static PointGroup icosahedral();
  static PointGroup parse(const std::string& name);

  std::int64_t size() const { return static_cast<std::int64_t>(elements.size()); }

  bool operator==(const PointGroup& o) const {
    return kind == o.kind && order_param == o.order_param;
  }

  std::string name() const {
    switch (kind) {
      case PointGroupKind::Cyclic: return "C" + std::to_string(order_param);
      case PointGroupKind::Dihedral: return "D" + std::to_string(order_param);
      case PointGroupKind::Tetrahedral: return "T";
      case PointGroupKind::Octahedral: return "O";
      default: return "I";
    }
  }
};

namespace detail {

inline std::vector<Mat3> dedup_matrices(const std::vector<Mat3>& in, double tol = 1e-8) {
  std::vector<Mat3> out;
  for (const auto& m : in) {
    bool seen = false;
    for (const auto& o : out)
      if (matrix_distance(m, o) < tol) { seen = true; break; }
    if (!seen) out.push_back(m);
  }
  return out;
}

inline void verify_closure(const std::vector<Mat3>& g, const std::string& name) {
  for (const auto& a : g)
    for (const auto& b : g) {
      const Mat3 p = a * b;
      double best = 1e300;
      for (const auto& c : g) best = std::min(best, matrix_distance(p, c));
      if (best > 1e-10)
        throw std::logic_error("PointGroup " + name + ": representative set not closed");
    }
}

inline RotationList finalize_group(std::vector<Mat3> mats, std::size_t expected,
                                   const std::string& name) {
  mats = dedup_matrices(mats);
  if (mats.size() != expected)
    throw std::logic_error("PointGroup " + name + ": expected " +
                           std::to_string(expected) + " elements, got " +
                           std::to_string(mats.size()));
  RotationList out;
  out.reserve(mats.size());
  for (const auto& m : mats) out.push_back(matrix_to_euler(m));
  // verify closure on the stored angles, not the raw matrices, so that a bad
  // Euler extraction cannot slip through
  std::vector<Mat3> stored;
  stored.reserve(out.size());
  for (const auto& e : out) stored.push_back(euler_to_matrix(e));
  verify_closure(stored, name);
  return out;
}

inline std::vector<Mat3> cyclic_matrices(int r) {
  std::vector<Mat3> g;
  for (int s = 0; s < r; ++s) g.push_back(axis_angle_matrix(0, 0, 1, two_pi * s / r));
  return g;
}

inline std::vector<Mat3> dihedral_matrices(int r) {
  std::vector<Mat3> g = cyclic_matrices(r);
  const Mat3 flip = axis_angle_matrix(0, 1, 0, pi);
  const std::size_t base = g.size();
  for (std::size_t i = 0; i < base; ++i) g.push_back(g[i] * flip);
  return g;
}

}  // namespace detail

inline PointGroup PointGroup::cyclic(int r) {
  if (r < 1) throw std::invalid_argument("PointGroup: cyclic order must be >= 1");
  PointGroup g;
  g.kind = PointGroupKind::Cyclic;
  g.order_param = r;
  g.elements = detail::finalize_group(detail::cyclic_matrices(r),
                                      static_cast<std::size_t>(r), g.name());
  return g;
}

inline PointGroup PointGroup::dihedral(int r) {
  if (r < 1) throw std::invalid_argument("PointGroup: dihedral order must be >= 1");
  PointGroup g;
  g.kind = PointGroupKind::Dihedral;
  g.order_param = r;
  g.elements = detail::finalize_group(detail::dihedral_matrices(r),
                                      static_cast<std::size_t>(2 * r), g.name());
  return g;
}

inline PointGroup PointGroup::tetrahedral() {
  std::vector<detail::Mat3> mats;
  for (int s = 0; s < 3; ++s) {
    const detail::Mat3 c = detail::axis_angle_matrix(1, 1, 1, two_pi * s / 3.0);
    for (const auto& d : detail::dihedral_matrices(2)) mats.push_back(d * c);
  }
  PointGroup g;
  g.kind = PointGroupKind::Tetrahedral;
  g.elements = detail::finalize_group(mats, 12, "T");
  return g;
}

inline PointGroup PointGroup::octahedral() {
  std::vector<detail::Mat3> mats;
  for (int s = 0; s < 3; ++s) {
    const detail::Mat3 c = detail::axis_angle_matrix(1, 1, 1, two_pi * s / 3.0);
    for (const auto& d : detail::dihedral_matrices(4)) mats.push_back(d * c);
  }
  PointGroup g;
  g.kind = PointGroupKind::Octahedral;
  g.elements = detail::finalize_group(mats, 24, "O");
  return g;
}

inline PointGroup PointGroup::icosahedral() {
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  const double ex = phi * phi;
  const double ez = phi + std::sqrt(1.0 + phi * phi) * std::sin(two_pi / 5.0);
  std::vector<detail::Mat3> mats;
  for (int s = 0; s < 3; ++s) {
    const detail::Mat3 cs = detail::axis_angle_matrix(ex, 0, ez, two_pi * s / 3.0);
    for (int t = 0; t < 3; ++t) {
      const detail::Mat3 ct = detail::axis_angle_matrix(ex, 0, ez, two_pi * t / 3.0);
      for (const auto& d : detail::dihedral_matrices(5)) mats.push_back(cs * (d * ct));
    }
  }
  PointGroup g;
  g.kind = PointGroupKind::Icosahedral;
  g.elements = detail::finalize_group(mats, 60, "I");
  return g;
}

inline PointGroup PointGroup::parse(const std::string& name) {
  if (name == "T") return tetrahedral();
  if (name == "O") return octahedral();
  if (name == "I") return icosahedral();
  if (name.size() >= 2 && (name[0] == 'C' || name[0] == 'D')) {
    const int r = std::stoi(name.substr(1));
    return name[0] == 'C' ? cyclic(r) : dihedral(r);
  }
  throw std::invalid_argument("PointGroup: cannot parse '" + name + "'");
}

/// Returns the representative set of the group.
inline const RotationList& group_elements(const PointGroup& g) { return g.elements; }

/// Symmetry of a function on the rotation group: f(R) = f(s_R R s_L) for all
/// s_R in `right`, s_L in `left`, optionally real-valued and/or invariant
/// under inversion f(R) = f(R^{-1}).  Inversion symmetry forces the two
/// groups to coincide.
struct SymmetrySpec {
  PointGroup right = PointGroup::cyclic(1);
  PointGroup left = PointGroup::cyclic(1);
  bool real_valued = false;
  bool inversion = false;

  SymmetrySpec() = default;
  SymmetrySpec(PointGroup r, PointGroup l, bool re = false, bool inv = false)
      : right(std::move(r)), left(std::move(l)), real_valued(re), inversion(inv) {
    if (inversion && !(right == left))
      throw std::invalid_argument(
          "SymmetrySpec: inversion symmetry requires equal left and right groups");
  }
};

namespace detail {

inline bool is_patterned(const PointGroup& g) {
  return g.kind == PointGroupKind::Cyclic || g.kind == PointGroupKind::Dihedral;
}

/// Largest cyclic/dihedral subgroup with the pattern relations of the table
/// rows: the coset constructions embed D_2 in T, D_4 in O and D_5 in I.
inline std::pair<bool, int> pattern_subgroup(const PointGroup& g) {
  switch (g.kind) {
    case PointGroupKind::Cyclic: return {false, g.order_param};
    case PointGroupKind::Dihedral: return {true, g.order_param};
    case PointGroupKind::Tetrahedral: return {true, 2};
    case PointGroupKind::Octahedral: return {true, 4};
    default: return {true, 5};
  }
}

inline bool mod_nonzero(int k, int r) { return r > 1 && ((k % r) + r) % r != 0; }

/// (2n+1) x (2n+1) average of the unitary representation matrices
/// D^n(P)/sqrt(2n+1) = (e^{-ik alpha} d^n_{k,u}(cos beta) e^{-iu gamma})
/// over the group elements.
inline std::vector<cplx> average_rep_matrix(const PointGroup& g, int n) {
  const int L = 2 * n + 1;
  std::vector<cplx> avg(static_cast<std::size_t>(L) * L, cplx{0.0, 0.0});
  const double scale = 1.0 / static_cast<double>(g.elements.size());
  for (const auto& e : g.elements) {
    const double x = std::cos(e.beta);
    for (int r = -n; r <= n; ++r)
      for (int c = -n; c <= n; ++c)
        avg[static_cast<std::size_t>((r + n) * L + (c + n))] +=
            std::polar(wigner_d(n, r, c, x) * scale, -r * e.alpha - c * e.gamma);
  }
  return avg;
}

/// In-place right group averaging of one degree block: F <- A^T F.
inline void apply_right_average(std::vector<cplx>& block, const std::vector<cplx>& avg, int n) {
  const int L = 2 * n + 1;
  std::vector<cplx> out(static_cast<std::size_t>(L) * L, cplx{0.0, 0.0});
  for (int k = 0; k < L; ++k)
    for (int u = 0; u < L; ++u) {
      const cplx a = avg[static_cast<std::size_t>(k * L + u)];
      for (int l = 0; l < L; ++l)
        out[static_cast<std::size_t>(u * L + l)] += a * block[static_cast<std::size_t>(k * L + l)];
    }
  block = std::move(out);
}

/// In-place left group averaging: F[k,u] <- sum_l F[k,l] A[u,l].
inline void apply_left_average(std::vector<cplx>& block, const std::vector<cplx>& avg, int n) {
  const int L = 2 * n + 1;
  std::vector<cplx> out(static_cast<std::size_t>(L) * L, cplx{0.0, 0.0});
  for (int k = 0; k < L; ++k)
    for (int u = 0; u < L; ++u) {
      cplx s{0.0, 0.0};
      for (int l = 0; l < L; ++l)
        s += block[static_cast<std::size_t>(k * L + l)] * avg[static_cast<std::size_t>(u * L + l)];
      out[static_cast<std::size_t>(k * L + u)] = s;
    }
  block = std::move(out);
}

inline void project_degree_block(std::vector<cplx>& block, int n, const SymmetrySpec& spec,
                                 bool force_averaging,
                                 const std::vector<cplx>* right_avg,
                                 const std::vector<cplx>* left_avg) {
  const int L = 2 * n + 1;
  auto at = [&](int k, int l) -> cplx& {
    return block[static_cast<std::size_t>((k + n) * L + (l + n))];
  };

  if (is_patterned(spec.right) && !force_averaging) {
    const auto [dihedral, r] = pattern_subgroup(spec.right);
    for (int k = -n; k <= n; ++k)
      if (mod_nonzero(k, r))
        for (int l = -n; l <= n; ++l) at(k, l) = cplx{0.0, 0.0};
    if (dihedral) {
      std::vector<cplx> old(block);
      auto oldat = [&](int k, int l) {
        return old[static_cast<std::size_t>((k + n) * L + (l + n))];
      };
      for (int k = -n; k <= n; ++k)
        for (int l = -n; l <= n; ++l)
          at(k, l) = 0.5 * (oldat(k, l) + parity(n + k) * oldat(-k, l));
    }
  } else if (right_avg) {
    apply_right_average(block, *right_avg, n);
  }

  if (is_patterned(spec.left) && !force_averaging) {
    const auto [dihedral, r] = pattern_subgroup(spec.left);
    for (int l = -n; l <= n; ++l)
      if (mod_nonzero(l, r))
        for (int k = -n; k <= n; ++k) at(k, l) = cplx{0.0, 0.0};
    if (dihedral) {
      std::vector<cplx> old(block);
      auto oldat = [&](int k, int l) {
        return old[static_cast<std::size_t>((k + n) * L + (l + n))];
      };
      for (int k = -n; k <= n; ++k)
        for (int l = -n; l <= n; ++l)
          at(k, l) = 0.5 * (oldat(k, l) + parity(n + l) * oldat(k, -l));
    }
  } else if (left_avg) {
    apply_left_average(block, *left_avg, n);
  }

  if (spec.real_valued) {
    std::vector<cplx> old(block);
    auto oldat = [&](int k, int l) {
      return old[static_cast<std::size_t>((k + n) * L + (l + n))];
    };
    for (int k = -n; k <= n; ++k)
      for (int l = -n; l <= n; ++l)
        at(k, l) = 0.5 * (oldat(k, l) + parity(k + l) * std::conj(oldat(-k, -l)));
  }

  if (spec.inversion) {
    std::vector<cplx> old(block);
    auto oldat = [&](int k, int l) {
      return old[static_cast<std::size_t>((k + n) * L + (l + n))];
    };
    for (int k = -n; k <= n; ++k)
      for (int l = -n; l <= n; ++l)
        at(k, l) = 0.5 * (oldat(k, l) + parity(k + l) * oldat(-l, -k));
  }
}

inline HarmonicCoefficients symmetrize_impl(const HarmonicCoefficients& fhat,
                                            const SymmetrySpec& spec, bool force_averaging) {
  const int N = fhat.bandwidth;
  HarmonicCoefficients out(N);
  const bool want_right_avg =
      (!is_patterned(spec.right) || force_averaging) && spec.right.size() > 1;
  const bool want_left_avg =
      (!is_patterned(spec.left) || force_averaging) && spec.left.size() > 1;

  parallel_for(0, N + 1, [&](std::int64_t n64) {
    const int n = static_cast<int>(n64);
    const int L = 2 * n + 1;
    std::vector<cplx> block(static_cast<std::size_t>(L) * L);
    const std::int64_t base = harmonic_index(n, -n, -n);
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(L) * L; ++i)
      block[static_cast<std::size_t>(i)] = fhat.data[static_cast<std::size_t>(base + i)];

    std::vector<cplx> ravg, lavg;
    if (want_right_avg) ravg = average_rep_matrix(spec.right, n);
    if (want_left_avg) lavg = average_rep_matrix(spec.left, n);
    project_degree_block(block, n, spec, force_averaging,
                         want_right_avg ? &ravg : nullptr,
                         want_left_avg ? &lavg : nullptr);

    for (std::int64_t i = 0; i < static_cast<std::int64_t>(L) * L; ++i)
      out.data[static_cast<std::size_t>(base + i)] = block[static_cast<std::size_t>(i)];
  });
  return out;
}

/// Group averaging without the cyclic/dihedral closed-form shortcut; the
/// universal path, also used to cross-check the shortcut.
inline HarmonicCoefficients symmetrize_by_averaging(const HarmonicCoefficients& fhat,
                                                    const SymmetrySpec& spec) {
  return symmetrize_impl(fhat, spec, true);
}

}  // namespace detail

/// Orthogonal projection of a coefficient vector onto the subspace invariant
/// under the given symmetry: group averaging over right/left actions (with a
/// closed-form shortcut for cyclic and dihedral groups), then the real-valued
/// and inversion projections.  Idempotent.
inline HarmonicCoefficients symmetrize(const HarmonicCoefficients& fhat,
                                       const SymmetrySpec& spec) {
  return detail::symmetrize_impl(fhat, spec, false);
}

struct PatternClause {
  std::string name;
  bool available = true;
  double max_violation = 0.0;
  int n = 0, k = 0, l = 0;  // j stored in n for cube clauses? no: cube uses (k,j,l) in (n,k,l) order k->n? see note below
};

/// Violation report for the closed-form coefficient patterns.  For cube
/// clauses the index triple (k,j,l) is stored in the (n,k,l) fields in that
/// order.  Clauses of groups without closed-form patterns (T, O, I) are
/// flagged unavailable and do not affect pass().
struct PatternReport {
  double tolerance = 0.0;
  std::vector<PatternClause> clauses;

  bool pass() const {
    for (const auto& c : clauses)
      if (c.available && c.max_violation > tolerance) return false;
    return true;
  }

  const PatternClause* worst() const {
    const PatternClause* w = nullptr;
    for (const auto& c : clauses)
      if (c.available && (!w || c.max_violation > w->max_violation)) w = &c;
    return w;
  }

  std::string summary() const {
    std::string s;
    for (const auto& c : clauses) {
      s += c.name;
      if (!c.available) {
        s += ": pattern not available; use pointwise check\n";
        continue;
      }
      s += ": max violation " + std::to_string(c.max_violation) + " at (" +
           std::to_string(c.n) + "," + std::to_string(c.k) + "," +
           std::to_string(c.l) + ")\n";
    }
    return s;
  }
};

namespace detail {

inline void track(PatternClause& c, double v, int n, int k, int l) {
  if (v > c.max_violation) {
    c.max_violation = v;
    c.n = n; c.k = k; c.l = l;
  }
}

}  // namespace detail

/// Checks the harmonic-side coefficient patterns:
///   right C_r : fhat_n^{k,l} = 0 unless r | k        (left: r | l)
///   right D_r : additionally fhat_n^{k,l} = (-1)^{n+k} fhat_n^{-k,l}
///   left  D_r : additionally fhat_n^{k,l} = (-1)^{n+l} fhat_n^{k,-l}
///   real      : fhat_n^{k,l} = (-1)^{k+l} conj(fhat_n^{-k,-l})
///   inversion : fhat_n^{k,l} = (-1)^{k+l} fhat_n^{-l,-k}
inline PatternReport check_pattern(const HarmonicCoefficients& fhat,
                                   const SymmetrySpec& spec, double tol) {
  PatternReport rep;
  rep.tolerance = tol;
  const int N = fhat.bandwidth;

  auto scan = [&](auto&& fn) {
    for (int n = 0; n <= N; ++n)
      for (int k = -n; k <= n; ++k)
        for (int l = -n; l <= n; ++l) fn(n, k, l);
  };

  for (int side = 0; side < 2; ++side) {
    const PointGroup& g = side == 0 ? spec.right : spec.left;
    const std::string tag = side == 0 ? "right " : "left ";
    if (!detail::is_patterned(g)) {
      if (g.size() > 1)
        rep.clauses.push_back({tag + g.name(), false, 0.0, 0, 0, 0});
      continue;
    }
    const auto [dihedral, r] = detail::pattern_subgroup(g);
    if (r > 1) {
      PatternClause c{tag + "C" + std::to_string(r) + " zeros", true, 0.0, 0, 0, 0};
      scan([&](int n, int k, int l) {
        const int idx = side == 0 ? k : l;
        if (detail::mod_nonzero(idx, r))
          detail::track(c, std::abs(fhat.at(n, k, l)), n, k, l);
      });
      rep.clauses.push_back(c);
    }
    if (dihedral) {
      PatternClause c{tag + "D reflection", true, 0.0, 0, 0, 0};
      scan([&](int n, int k, int l) {
        const cplx expect = side == 0 ? parity(n + k) * fhat.at(n, -k, l)
                                      : parity(n + l) * fhat.at(n, k, -l);
        detail::track(c, std::abs(fhat.at(n, k, l) - expect), n, k, l);
      });
      rep.clauses.push_back(c);
    }
  }

  if (spec.real_valued) {
    PatternClause c{"real-valued", true, 0.0, 0, 0, 0};
    scan([&](int n, int k, int l) {
      const cplx expect = parity(k + l) * std::conj(fhat.at(n, -k, -l));
      detail::track(c, std::abs(fhat.at(n, k, l) - expect), n, k, l);
    });
    rep.clauses.push_back(c);
  }
  if (spec.inversion) {
    PatternClause c{"inversion", true, 0.0, 0, 0, 0};
    scan([&](int n, int k, int l) {
      const cplx expect = parity(k + l) * fhat.at(n, -l, -k);
      detail::track(c, std::abs(fhat.at(n, k, l) - expect), n, k, l);
    });
    rep.clauses.push_back(c);
  }
  return rep;
}

/// Cube-side patterns; the BMC relation ghat_{k,j,l} = (-1)^{k+l} ghat_{k,-j,l}
/// is checked unconditionally since every transform output satisfies it.
inline PatternReport check_cube_pattern(const FourierCube& ghat,
                                        const SymmetrySpec& spec, double tol) {
  PatternReport rep;
  rep.tolerance = tol;
  const int N = ghat.bandwidth;

  auto scan = [&](auto&& fn) {
    for (int k = -N; k <= N; ++k)
      for (int j = -N; j <= N; ++j)
        for (int l = -N; l <= N; ++l) fn(k, j, l);
  };

  {
    PatternClause c{"BMC", true, 0.0, 0, 0, 0};
    scan([&](int k, int j, int l) {
      detail::track(c, std::abs(ghat.at(k, j, l) - parity(k + l) * ghat.at(k, -j, l)),
                    k, j, l);
    });
    rep.clauses.push_back(c);
  }

  for (int side = 0; side < 2; ++side) {
    const PointGroup& g = side == 0 ? spec.right : spec.left;
    const std::string tag = side == 0 ? "right " : "left ";
    if (!detail::is_patterned(g)) {
      if (g.size() > 1)
        rep.clauses.push_back({tag + g.name(), false, 0.0, 0, 0, 0});
      continue;
    }
    const auto [dihedral, r] = detail::pattern_subgroup(g);
    if (r > 1) {
      PatternClause c{tag + "C" + std::to_string(r) + " zeros", true, 0.0, 0, 0, 0};
      scan([&](int k, int j, int l) {
        const int idx = side == 0 ? k : l;
        if (detail::mod_nonzero(idx, r))
          detail::track(c, std::abs(ghat.at(k, j, l)), k, j, l);
      });
      rep.clauses.push_back(c);
    }
    if (dihedral) {
      PatternClause c{tag + "D reflection", true, 0.0, 0, 0, 0};
      scan([&](int k, int j, int l) {
        const cplx expect = side == 0 ? parity(j) * ghat.at(-k, j, l)
                                      : parity(j) * ghat.at(k, j, -l);
        detail::track(c, std::abs(ghat.at(k, j, l) - expect), k, j, l);
      });
      rep.clauses.push_back(c);
    }
  }

  if (spec.real_valued) {
    PatternClause c{"real-valued", true, 0.0, 0, 0, 0};
    scan([&](int k, int j, int l) {
      detail::track(c, std::abs(ghat.at(k, j, l) - std::conj(ghat.at(-k, -j, -l))),
                    k, j, l);
    });
    rep.clauses.push_back(c);
  }
  if (spec.inversion) {
    PatternClause c{"inversion", true, 0.0, 0, 0, 0};
    scan([&](int k, int j, int l) {
      detail::track(c, std::abs(ghat.at(k, j, l) - ghat.at(-l, -j, -k)), k, j, l);
    });
    rep.clauses.push_back(c);
  }
  return rep;
}

/// Storage/runtime compression factor (1 + real)(1 + inversion)|S_L||S_R|;
/// defined for cyclic and dihedral groups only.
inline std::int64_t compression_factor(const SymmetrySpec& spec) {
  if (!detail::is_patterned(spec.right) || !detail::is_patterned(spec.left))
    throw std::invalid_argument(
        "compression_factor: defined for cyclic/dihedral groups only");
  return (spec.real_valued ? 2 : 1) * (spec.inversion ? 2 : 1) * spec.right.size() *
         spec.left.size();
}

/// Equivalence classes of harmonic coefficients under the pattern relations.
/// Every index is either forced to zero or carries `value = sign * rep` or
/// `value = sign * conj(rep)` for its class representative (the smallest
/// linear index in the class).
struct ReducedIndexing {
  int bandwidth = 0;
  std::vector<std::array<int, 3>> representatives;
  std::vector<std::uint8_t> rep_self_conjugate;  // class pinned to val = +-conj(val)
  std::vector<std::int64_t> rep_of;              // -1 for forced zeros
  std::vector<double> sign;
  std::vector<std::uint8_t> conjugated;

  /// Real degrees of freedom of the compressed representation: two per free
  /// class, one per conjugation-constrained class.
  std::int64_t free_real_dof() const {
    std::int64_t dof = 0;
    for (const std::uint8_t c : rep_self_conjugate) dof += c ? 1 : 2;
    return dof;
  }

  /// Measured storage compression: full real dof over compressed real dof.
  double compression_ratio() const {
    return 2.0 * static_cast<double>(dimension(bandwidth)) /
           static_cast<double>(free_real_dof());
  }
};

namespace detail {

struct UnionFind {
  std::vector<std::int64_t> parent;
  std::vector<double> sgn;             // value(x) = sgn * C(value(parent))
  std::vector<std::uint8_t> cnj;
  std::vector<std::uint8_t> zero;      // valid on roots
  std::vector<std::uint8_t> conj_pin;  // root satisfies val = +-conj(val)

  explicit UnionFind(std::int64_t n)
      : parent(static_cast<std::size_t>(n)),
        sgn(static_cast<std::size_t>(n), 1.0),
        cnj(static_cast<std::size_t>(n), 0),
        zero(static_cast<std::size_t>(n), 0),
        conj_pin(static_cast<std::size_t>(n), 0) {
    for (std::int64_t i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  }

  // returns {root, sign, conj} with value(x) = sign * C(value(root))
  std::tuple<std::int64_t, double, bool> find(std::int64_t x) {
    auto xi = static_cast<std::size_t>(x);
    if (parent[xi] == x) return {x, 1.0, false};
    auto [root, s, c] = find(parent[xi]);
    const double ns = sgn[xi] * s;  // sign unaffected by conjugation (real)
    const bool nc = (cnj[xi] != 0) != c;
    parent[xi] = root;
    sgn[xi] = ns;
    cnj[xi] = nc ? 1 : 0;
    return {root, ns, nc};
  }

  // impose value(x) = s * C_c(value(y))
  void link(std::int64_t x, std::int64_t y, double s, bool c) {
    auto [rx, sx, cx] = find(x);
    auto [ry, sy, cy] = find(y);
    if (rx == ry) {
      // self relation on the root: value(r) = psi * C(value(r))
      const double psi = (s * sy) / sx;
      const bool pc = (cx != c) != cy;
      if (!pc && psi < 0.0) zero[static_cast<std::size_t>(rx)] = 1;
      if (pc) conj_pin[static_cast<std::size_t>(rx)] = 1;  // phase-line constraint
      return;
    }
    // value(rx) = (s*sy/sx) * C_{cx^c^cy}(value(ry))
    double rel_s = (s * sy) / sx;
    bool rel_c = (cx != c) != cy;
    std::int64_t child = rx, root = ry;
    if (ry > rx) {  // keep the smaller index as root
      std::swap(child, root);
      // invert: value(ry) = rel_s * C(value(rx)) (involution, sign symmetric)
    }
    const bool was_zero = zero[static_cast<std::size_t>(child)] != 0 ||
                          zero[static_cast<std::size_t>(root)] != 0;
    const bool was_pinned = conj_pin[static_cast<std::size_t>(child)] != 0 ||
                            conj_pin[static_cast<std::size_t>(root)] != 0;
    parent[static_cast<std::size_t>(child)] = root;
    sgn[static_cast<std::size_t>(child)] = rel_s;
    cnj[static_cast<std::size_t>(child)] = rel_c ? 1 : 0;
    if (was_zero) zero[static_cast<std::size_t>(root)] = 1;
    if (was_pinned) conj_pin[static_cast<std::size_t>(root)] = 1;
  }

  void mark_zero(std::int64_t x) {
    auto [r, s, c] = find(x);
    zero[static_cast<std::size_t>(r)] = 1;
  }
};

}  // namespace detail

inline ReducedIndexing build_reduced_indexing(int N, const SymmetrySpec& spec) {
  if (!detail::is_patterned(spec.right) || !detail::is_patterned(spec.left))
    throw std::invalid_argument(
        "reduced_index_set: defined for cyclic/dihedral groups only");
  const std::int64_t dim = dimension(N);
  detail::UnionFind uf(dim);

  const auto [rdih, rr] = detail::pattern_subgroup(spec.right);
  const auto [ldih, lr] = detail::pattern_subgroup(spec.left);

  for (int n = 0; n <= N; ++n)
    for (int k = -n; k <= n; ++k)
      for (int l = -n; l <= n; ++l) {
        const std::int64_t idx = harmonic_index(n, k, l);
        if (detail::mod_nonzero(k, rr) || detail::mod_nonzero(l, lr)) {
          uf.mark_zero(idx);
          continue;
        }
        if (rdih) uf.link(idx, harmonic_index(n, -k, l), parity(n + k), false);
        if (ldih) uf.link(idx, harmonic_index(n, k, -l), parity(n + l), false);
        if (spec.real_valued)
          uf.link(idx, harmonic_index(n, -k, -l), parity(k + l), true);
        if (spec.inversion)
          uf.link(idx, harmonic_index(n, -l, -k), parity(k + l), false);
      }

  ReducedIndexing out;
  out.bandwidth = N;
  out.rep_of.resize(static_cast<std::size_t>(dim));
  out.sign.resize(static_cast<std::size_t>(dim), 1.0);
  out.conjugated.resize(static_cast<std::size_t>(dim), 0);
  for (int n = 0; n <= N; ++n)
    for (int k = -n; k <= n; ++k)
      for (int l = -n; l <= n; ++l) {
        const std::int64_t idx = harmonic_index(n, k, l);
        auto [root, s, c] = uf.find(idx);
        if (uf.zero[static_cast<std::size_t>(root)]) {
          out.rep_of[static_cast<std::size_t>(idx)] = -1;
          continue;
        }
        out.rep_of[static_cast<std::size_t>(idx)] = root;
        out.sign[static_cast<std::size_t>(idx)] = s;
        out.conjugated[static_cast<std::size_t>(idx)] = c ? 1 : 0;
        if (root == idx) {
          out.representatives.push_back({n, k, l});
          out.rep_self_conjugate.push_back(uf.conj_pin[static_cast<std::size_t>(root)]);
        }
      }
  return out;
}

/// One representative triple per nonzero symmetry class.
inline std::vector<std::array<int, 3>> reduced_index_set(int N, const SymmetrySpec& spec) {
  return build_reduced_indexing(N, spec).representatives;
}

/// Rebuilds a full coefficient vector from the representative entries of
/// `src`; exact (bit-level) for inputs satisfying the pattern.
inline HarmonicCoefficients reconstruct_from_representatives(
    const ReducedIndexing& ri, const HarmonicCoefficients& src) {
  if (src.bandwidth != ri.bandwidth)
    throw std::invalid_argument("reconstruct_from_representatives: bandwidth mismatch");
  HarmonicCoefficients out(ri.bandwidth);
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    const std::int64_t rep = ri.rep_of[i];
    if (rep < 0) continue;
    const cplx v = src.data[static_cast<std::size_t>(rep)];
    out.data[i] = ri.sign[i] * (ri.conjugated[i] ? std::conj(v) : v);
  }
  return out;
}

}  // namespace so3ft
