#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "so3ft/core_types.hpp"
#include "so3ft/nsoft.hpp"
#include "so3ft/quadrature.hpp"
#include "so3ft/threading.hpp"

namespace so3ft {

/// Seedable random stream used by all experiments: mt19937_64 bit source,
/// doubles from the top 53 bits, complex unit-disk samples by rejection from
/// the enclosing square.  Identical output on every platform for a fixed seed.
struct RandomStream {
  std::mt19937_64 eng;

  explicit RandomStream(std::uint64_t seed) : eng(seed) {}

  double uniform01() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

  cplx unit_disk() {
    for (;;) {
      const double re = uniform_pm1();
      const double im = uniform_pm1();
      if (re * re + im * im <= 1.0) return {re, im};
    }
  }

  EulerAngles rotation() {
    // Haar-uniform would need acos(1-2u) in beta; plain uniform angles are
    // fine for the test workloads, which only need generic positions.
    return {two_pi * uniform01(), pi * uniform01(), two_pi * uniform01()};
  }
};

inline HarmonicCoefficients random_coefficients(int N, RandomStream& rng) {
  HarmonicCoefficients fhat(N);
  for (auto& v : fhat.data) v = rng.unit_disk();
  return fhat;
}

inline double norm_l1(const HarmonicCoefficients& fhat) {
  double s = 0.0;
  for (const auto& v : fhat.data) s += std::abs(v);
  return s;
}

inline double norm_l2(const HarmonicCoefficients& fhat) {
  double s = 0.0;
  for (const auto& v : fhat.data) s += std::norm(v);
  return std::sqrt(s);
}

inline double diff_l2(const HarmonicCoefficients& a, const HarmonicCoefficients& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) s += std::norm(a.data[i] - b.data[i]);
  return std::sqrt(s);
}

struct AccuracyRecord {
  int N = 0;
  double e_max = 0.0;  // max over trials of |fhat - recovered|_2 / |fhat|_1
  double e_var = 0.0;  // population variance of the per-trial errors
};

/// Roundtrip error of sample-then-analyze on the given quadrature flavor,
/// with coefficients drawn uniformly from the complex unit disk.
inline std::vector<AccuracyRecord> run_accuracy(const std::vector<int>& bandwidths, int trials,
                                                std::uint64_t seed, QuadratureFlavor flavor) {
  if (trials < 1) throw std::invalid_argument("run_accuracy: trials must be >= 1");
  std::vector<AccuracyRecord> records;
  for (int N : bandwidths) {
    const QuadratureRule rule = make_rule(flavor, N);
    const WignerTransformPlan plan(N);
    RandomStream rng(seed ^ (static_cast<std::uint64_t>(N) << 32));
    std::vector<double> errors;
    for (int t = 0; t < trials; ++t) {
      const HarmonicCoefficients fhat = random_coefficients(N, rng);
      const std::vector<cplx> samples = synthesize_grid(forward(plan, fhat), rule.grid());
      const HarmonicCoefficients back = analyze(rule, plan, samples);
      errors.push_back(diff_l2(fhat, back) / norm_l1(fhat));
    }
    AccuracyRecord rec;
    rec.N = N;
    double mean = 0.0;
    for (double e : errors) {
      rec.e_max = std::max(rec.e_max, e);
      mean += e;
    }
    mean /= static_cast<double>(errors.size());
    for (double e : errors) rec.e_var += (e - mean) * (e - mean);
    rec.e_var /= static_cast<double>(errors.size());
    records.push_back(rec);
  }
  return records;
}

struct BenchRecord {
  int N = 0;
  std::string kernel;
  double seconds = 0.0;
  int threads = 1;
  std::optional<double> error;  // accuracy runs only
};

namespace detail {

template <typename F>
double median_seconds(int reps, F&& body) {
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const auto t1 = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

}  // namespace detail

inline const std::vector<std::string>& bench_kernels() {
  static const std::vector<std::string> kernels{"wigner_forward", "wigner_adjoint",
                                                "synthesis", "analyze", "roundtrip"};
  return kernels;
}

/// Median wall time per kernel per bandwidth on the Clenshaw-Curtis grid.
/// An empty kernel filter runs all kernels.
inline std::vector<BenchRecord> run_bench(const std::vector<int>& bandwidths, int reps,
                                          std::uint64_t seed,
                                          const std::vector<std::string>& kernels = {}) {
  if (reps < 3) throw std::invalid_argument("run_bench: reps must be >= 3");
  auto wanted = [&](const std::string& k) {
    if (kernels.empty()) return true;
    for (const auto& w : kernels)
      if (w == k) return true;
    return false;
  };

  std::vector<BenchRecord> records;
  for (int N : bandwidths) {
    const WignerTransformPlan plan(N);
    RandomStream rng(seed ^ static_cast<std::uint64_t>(N));
    const HarmonicCoefficients fhat = random_coefficients(N, rng);
    const FourierCube cube = forward(plan, fhat);
    const int threads = thread_count();

    auto push = [&](const std::string& kernel, double seconds) {
      records.push_back({N, kernel, seconds, threads, std::nullopt});
    };

    volatile double sink = 0.0;  // keep results alive
    if (wanted("wigner_forward"))
      push("wigner_forward", detail::median_seconds(reps, [&] {
        const FourierCube c = forward(plan, fhat);
        sink = sink + c.data[0].real();
      }));
    if (wanted("wigner_adjoint"))
      push("wigner_adjoint", detail::median_seconds(reps, [&] {
        const HarmonicCoefficients f = adjoint(plan, cube);
        sink = sink + f.data[0].real();
      }));
    if (wanted("synthesis") || wanted("analyze") || wanted("roundtrip")) {
      const QuadratureRule rule = clenshaw_curtis_rule(N);
      const std::vector<cplx> samples = synthesize_grid(cube, rule.grid());
      if (wanted("synthesis"))
        push("synthesis", detail::median_seconds(reps, [&] {
          const auto v = synthesize_grid(cube, rule.grid());
          sink = sink + v[0].real();
        }));
      if (wanted("analyze"))
        push("analyze", detail::median_seconds(reps, [&] {
          const auto f = analyze(rule, plan, samples);
          sink = sink + f.data[0].real();
        }));
      if (wanted("roundtrip"))
        push("roundtrip", detail::median_seconds(reps, [&] {
          const auto v = synthesize_grid(forward(plan, fhat), rule.grid());
          const auto f = analyze(rule, plan, v);
          sink = sink + f.data[0].real();
        }));
    }
  }
  return records;
}

/// Least-squares slope of log(seconds) against log(N).
inline double loglog_slope(const std::vector<BenchRecord>& records, const std::string& kernel) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& r : records) {
    if (r.kernel != kernel) continue;
    const double x = std::log(static_cast<double>(r.N));
    const double y = std::log(r.seconds);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++m;
  }
  if (m < 2) throw std::invalid_argument("loglog_slope: need at least two points");
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

inline void write_accuracy_csv(std::ostream& out, const std::vector<AccuracyRecord>& records) {
  out << "# so3ft-csv v1\n";
  out << "N,E_max,E_var\n";
  char buf[80];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", r.N, r.e_max, r.e_var);
    out << buf;
  }
}

inline void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "# so3ft-csv v1\n";
  out << "N,kernel,seconds,threads\n";
  char buf[120];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%d,%s,%.9g,%d\n", r.N, r.kernel.c_str(), r.seconds,
                  r.threads);
    out << buf;
  }
}

}  // namespace so3ft
