#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace so3ft {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Euler angles in ZYZ convention: R = R_z(alpha) R_y(beta) R_z(gamma).
/// alpha and gamma are reduced modulo 2*pi on construction; beta must lie
/// in [0, pi] (a sub-picoradian overshoot is clamped, anything else throws).
struct EulerAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  EulerAngles() = default;

  EulerAngles(double a, double b, double g)
      : alpha(wrap_angle(a)), beta(clamp_beta(b)), gamma(wrap_angle(g)) {}

  static double wrap_angle(double x) {
    double y = std::fmod(x, two_pi);
    if (y < 0.0) y += two_pi;
    if (y >= two_pi) y = 0.0;  // fmod rounding at the seam
    return y;
  }

  static double clamp_beta(double b) {
    constexpr double slop = 1e-12;
    if (b < -slop || b > pi + slop)
      throw std::invalid_argument("EulerAngles: beta=" + std::to_string(b) +
                                  " outside [0, pi]");
    if (b < 0.0) return 0.0;
    if (b > pi) return pi;
    return b;
  }
};

using RotationList = std::vector<EulerAngles>;

/// Number of coefficients of a degree-N band-limited expansion,
/// (N+1)(2N+1)(2N+3)/3 = sum of (2n+1)^2 for n = 0..N.
inline std::int64_t dimension(int N) {
  if (N < 0) throw std::invalid_argument("dimension: negative bandwidth");
  const std::int64_t n = N;
  return (n + 1) * (2 * n + 1) * (2 * n + 3) / 3;
}

/// Linear index of the triple (n, k, l), |k|,|l| <= n, in degree-major order:
/// block offset n(2n-1)(2n+1)/3, then k-major, l-minor within the block.
inline std::int64_t harmonic_index(int n, int k, int l) {
  if (n < 0 || std::abs(k) > n || std::abs(l) > n)
    throw std::out_of_range("harmonic_index: (" + std::to_string(n) + "," +
                            std::to_string(k) + "," + std::to_string(l) +
                            ") outside the index set");
  const std::int64_t nn = n;
  return nn * (2 * nn - 1) * (2 * nn + 1) / 3 +
         static_cast<std::int64_t>(k + n) * (2 * nn + 1) + (l + n);
}

/// Dense vector of harmonic coefficients fhat_n^{k,l} over all
/// (n,k,l) with |k|,|l| <= n <= N, linearized by harmonic_index.
struct HarmonicCoefficients {
  int bandwidth = 0;
  std::vector<cplx> data;

  HarmonicCoefficients() = default;

  explicit HarmonicCoefficients(int N)
      : bandwidth(N), data(static_cast<std::size_t>(dimension(N))) {}

  std::int64_t size() const { return static_cast<std::int64_t>(data.size()); }

  cplx& at(int n, int k, int l) {
    check_degree(n);
    return data[static_cast<std::size_t>(harmonic_index(n, k, l))];
  }
  const cplx& at(int n, int k, int l) const {
    check_degree(n);
    return data[static_cast<std::size_t>(harmonic_index(n, k, l))];
  }

 private:
  void check_degree(int n) const {
    if (n > bandwidth)
      throw std::out_of_range("HarmonicCoefficients: degree " +
                              std::to_string(n) + " exceeds bandwidth " +
                              std::to_string(bandwidth));
  }
};

/// Linear index of (k, j, l) in a (2N+1)^3 cube, all indices in [-N, N],
/// k slowest, l fastest.
inline std::int64_t cube_index(int N, int k, int j, int l) {
  if (std::abs(k) > N || std::abs(j) > N || std::abs(l) > N)
    throw std::out_of_range("cube_index: (" + std::to_string(k) + "," +
                            std::to_string(j) + "," + std::to_string(l) +
                            ") outside [-N,N]^3");
  const std::int64_t L = 2 * N + 1;
  return (static_cast<std::int64_t>(k + N) * L + (j + N)) * L + (l + N);
}

/// Fourier coefficients ghat_{k,j,l} of the trigonometric polynomial
///   g(alpha, beta, gamma) = sum ghat_{k,j,l} e^{+i(k alpha + j beta + l gamma)}
/// over (k,j,l) in {-N..N}^3.  The e^{+i...} synthesis convention is fixed
/// project-wide; analysis transforms use e^{-i...}.
struct FourierCube {
  int bandwidth = 0;
  std::vector<cplx> data;

  FourierCube() = default;

  explicit FourierCube(int N)
      : bandwidth(N),
        data(static_cast<std::size_t>(2 * N + 1) * (2 * N + 1) * (2 * N + 1)) {
    if (N < 0) throw std::invalid_argument("FourierCube: negative bandwidth");
  }

  std::int64_t side() const { return 2 * bandwidth + 1; }
  std::int64_t size() const { return static_cast<std::int64_t>(data.size()); }

  cplx& at(int k, int j, int l) {
    return data[static_cast<std::size_t>(cube_index(bandwidth, k, j, l))];
  }
  const cplx& at(int k, int j, int l) const {
    return data[static_cast<std::size_t>(cube_index(bandwidth, k, j, l))];
  }
};

/// i^m for possibly negative m.
inline cplx ipow(int m) {
  switch (((m % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

inline double parity(int m) { return (m & 1) ? -1.0 : 1.0; }

}  // namespace so3ft
