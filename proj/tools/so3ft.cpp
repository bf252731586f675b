// so3ft command-line harness: transforms, quadrature grids, symmetrization,
// and the accuracy / runtime experiments, all emitting the library's text
// formats or CSV.  Exit codes: 0 success, 2 validation/usage error,
// 1 internal error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "so3ft/analysis.hpp"
#include "so3ft/experiments.hpp"
#include "so3ft/io.hpp"
#include "so3ft/nsoft.hpp"
#include "so3ft/quadrature.hpp"
#include "so3ft/symmetry.hpp"

namespace {

using namespace so3ft;

struct OutputTarget {
  std::string path = "-";

  template <typename Fn>
  void write(Fn&& fn) const {
    if (path == "-") {
      fn(std::cout);
      return;
    }
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
    fn(out);
  }
};

template <typename Reader>
auto read_input(const std::string& path, Reader&& reader) {
  if (path == "-") return reader(std::cin);
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file '" + path + "'");
  return reader(in);
}

QuadratureFlavor parse_flavor(const std::string& name) {
  if (name == "cc") return QuadratureFlavor::ClenshawCurtis;
  if (name == "gl") return QuadratureFlavor::GaussLegendre;
  throw std::invalid_argument("unknown quadrature flavor '" + name + "' (use cc or gl)");
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoi(item));
  }
  if (out.empty()) throw std::invalid_argument("empty integer list");
  return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::invalid_argument("empty value list");
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"SO(3) Fourier transforms via the direct Wigner transform"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  int threads = 0;
  app.add_option("--threads", threads, "cap on internal parallelism (0 = hardware)");

  // ---- grid ----
  auto* grid_cmd = app.add_subcommand("grid", "emit quadrature nodes and weights");
  int grid_n = 0;
  std::string grid_flavor = "cc";
  OutputTarget grid_out;
  grid_cmd->add_option("--bandwidth", grid_n, "bandwidth N")->required();
  grid_cmd->add_option("--flavor", grid_flavor, "cc or gl");
  grid_cmd->add_option("--out", grid_out.path, "output file (default stdout)");

  // ---- transform ----
  auto* tf_cmd = app.add_subcommand("transform", "evaluate a coefficient file at rotations");
  std::string tf_in = "-", tf_nodes, tf_flavor = "cc";
  OutputTarget tf_out;
  tf_cmd->add_option("--in", tf_in, "harmonic coefficient file (default stdin)");
  tf_cmd->add_option("--nodes", tf_nodes, "rotation list file; omit to use the rule grid");
  tf_cmd->add_option("--flavor", tf_flavor, "rule flavor when sampling the grid");
  tf_cmd->add_option("--out", tf_out.path, "output file (default stdout)");

  // ---- adjoint ----
  auto* adj_cmd = app.add_subcommand("adjoint", "bare adjoint transform of sample values");
  std::string adj_in = "-", adj_nodes, adj_flavor = "cc";
  int adj_n = -1;
  bool adj_weighted = false;
  OutputTarget adj_out;
  adj_cmd->add_option("--in", adj_in, "values file (default stdin)");
  adj_cmd->add_option("--bandwidth", adj_n, "bandwidth N")->required();
  adj_cmd->add_option("--nodes", adj_nodes, "rotation list file; omit to use the rule grid");
  adj_cmd->add_option("--flavor", adj_flavor, "rule flavor when on the grid");
  adj_cmd->add_flag("--weighted", adj_weighted,
                    "apply the rule's quadrature weights first (grid mode only)");
  adj_cmd->add_option("--out", adj_out.path, "output file (default stdout)");

  // ---- analyze ----
  auto* an_cmd = app.add_subcommand("analyze", "recover coefficients from rule-grid samples");
  std::string an_in = "-", an_flavor = "cc";
  int an_n = -1;
  OutputTarget an_out;
  an_cmd->add_option("--in", an_in, "values file in rule grid order (default stdin)");
  an_cmd->add_option("--bandwidth", an_n, "bandwidth N")->required();
  an_cmd->add_option("--flavor", an_flavor, "cc or gl");
  an_cmd->add_option("--out", an_out.path, "output file (default stdout)");

  // ---- symmetrize ----
  auto* sym_cmd = app.add_subcommand("symmetrize", "project coefficients onto a symmetry class");
  std::string sym_in = "-", sym_right = "C1", sym_left = "C1";
  bool sym_real = false, sym_inversion = false;
  OutputTarget sym_out;
  sym_cmd->add_option("--in", sym_in, "harmonic coefficient file (default stdin)");
  sym_cmd->add_option("--right", sym_right, "right group (C<r>, D<r>, T, O, I)");
  sym_cmd->add_option("--left", sym_left, "left group");
  sym_cmd->add_flag("--real", sym_real, "real-valued projection");
  sym_cmd->add_flag("--inversion", sym_inversion, "inversion projection f(R) = f(R^-1)");
  sym_cmd->add_option("--out", sym_out.path, "output file (default stdout)");

  // ---- accuracy ----
  auto* acc_cmd = app.add_subcommand("accuracy", "roundtrip error experiment (CSV)");
  std::string acc_bandwidths = "1,2,4,8,16,32", acc_flavor = "cc";
  int acc_trials = 10;
  std::uint64_t acc_seed = 1;
  OutputTarget acc_out;
  acc_cmd->add_option("--bandwidths", acc_bandwidths, "comma-separated bandwidth list");
  acc_cmd->add_option("--trials", acc_trials, "random coefficient vectors per bandwidth");
  acc_cmd->add_option("--seed", acc_seed, "random seed");
  acc_cmd->add_option("--flavor", acc_flavor, "cc or gl");
  acc_cmd->add_option("--out", acc_out.path, "output file (default stdout)");

  // ---- bench ----
  auto* bench_cmd = app.add_subcommand("bench", "kernel timing experiment (CSV)");
  std::string bench_bandwidths = "16,24,32,48,64", bench_kernels;
  int bench_reps = 5;
  std::uint64_t bench_seed = 1;
  OutputTarget bench_out;
  bench_cmd->add_option("--bandwidths", bench_bandwidths, "comma-separated bandwidth list");
  bench_cmd->add_option("--reps", bench_reps, "repetitions per kernel (median reported)");
  bench_cmd->add_option("--kernels", bench_kernels,
                        "comma-separated subset of wigner_forward,wigner_adjoint,"
                        "synthesis,analyze,roundtrip");
  bench_cmd->add_option("--seed", bench_seed, "random seed");
  bench_cmd->add_option("--out", bench_out.path, "output file (default stdout)");

  // ---- analyze-regularity ----
  auto* reg_cmd = app.add_subcommand("analyze-regularity",
                                     "regularity-loss diagnostics of the 1/sqrt(sin beta) "
                                     "example and the Wigner-d series bounds (CSV)");
  int reg_degree = 400, reg_series_max = 256;
  std::string reg_svals = "0.25,0.4,0.5,0.55";
  OutputTarget reg_out;
  reg_cmd->add_option("--max-degree", reg_degree, "largest degree of the diagnostics");
  reg_cmd->add_option("--series-max", reg_series_max, "largest degree of the series bound");
  reg_cmd->add_option("--s-values", reg_svals, "comma-separated Sobolev exponents");
  reg_cmd->add_option("--out", reg_out.path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // command-line validation error
  }
  set_thread_count(threads);

  if (grid_cmd->parsed()) {
    const QuadratureRule rule = make_rule(parse_flavor(grid_flavor), grid_n);
    const RotationList nodes = rule.nodes();
    const std::vector<double> weights = rule.node_weights();
    grid_out.write([&](std::ostream& os) { write_nodes(os, nodes, &weights); });
    return 0;
  }

  if (tf_cmd->parsed()) {
    const HarmonicCoefficients fhat =
        read_input(tf_in, [](std::istream& is) { return read_harmonic(is); });
    const WignerTransformPlan plan(fhat.bandwidth);
    std::vector<cplx> values;
    if (!tf_nodes.empty()) {
      const NodesFile nf = read_input(tf_nodes, [](std::istream& is) { return read_nodes(is); });
      values = nsoft_forward(NsoftPlan(plan, nf.nodes), fhat);
    } else {
      const QuadratureRule rule = make_rule(parse_flavor(tf_flavor), fhat.bandwidth);
      values = nsoft_forward(NsoftPlan(plan, rule), fhat);
    }
    tf_out.write([&](std::ostream& os) { write_values(os, values); });
    return 0;
  }

  if (adj_cmd->parsed()) {
    const std::vector<cplx> values =
        read_input(adj_in, [](std::istream& is) { return read_values(is); });
    const WignerTransformPlan plan(adj_n);
    HarmonicCoefficients fhat;
    if (!adj_nodes.empty()) {
      if (adj_weighted)
        throw std::invalid_argument("--weighted requires the rule grid (omit --nodes)");
      const NodesFile nf =
          read_input(adj_nodes, [](std::istream& is) { return read_nodes(is); });
      fhat = nsoft_adjoint(NsoftPlan(plan, nf.nodes), values);
    } else {
      const QuadratureRule rule = make_rule(parse_flavor(adj_flavor), adj_n);
      if (adj_weighted) {
        fhat = analyze(rule, plan, values);
      } else {
        fhat = nsoft_adjoint(NsoftPlan(plan, rule), values);
      }
    }
    adj_out.write([&](std::ostream& os) { write_harmonic(os, fhat); });
    return 0;
  }

  if (an_cmd->parsed()) {
    const std::vector<cplx> values =
        read_input(an_in, [](std::istream& is) { return read_values(is); });
    const QuadratureRule rule = make_rule(parse_flavor(an_flavor), an_n);
    const WignerTransformPlan plan(an_n);
    const HarmonicCoefficients fhat = analyze(rule, plan, values);
    an_out.write([&](std::ostream& os) { write_harmonic(os, fhat); });
    return 0;
  }

  if (sym_cmd->parsed()) {
    const HarmonicCoefficients fhat =
        read_input(sym_in, [](std::istream& is) { return read_harmonic(is); });
    const SymmetrySpec spec(PointGroup::parse(sym_right), PointGroup::parse(sym_left),
                            sym_real, sym_inversion);
    const HarmonicCoefficients sym = symmetrize(fhat, spec);
    sym_out.write([&](std::ostream& os) { write_harmonic(os, sym); });
    return 0;
  }

  if (acc_cmd->parsed()) {
    const auto records = run_accuracy(parse_int_list(acc_bandwidths), acc_trials, acc_seed,
                                      parse_flavor(acc_flavor));
    acc_out.write([&](std::ostream& os) { write_accuracy_csv(os, records); });
    return 0;
  }

  if (bench_cmd->parsed()) {
    std::vector<std::string> kernels;
    if (!bench_kernels.empty()) {
      std::stringstream ss(bench_kernels);
      std::string item;
      while (std::getline(ss, item, ',')) kernels.push_back(item);
    }
    const auto records =
        run_bench(parse_int_list(bench_bandwidths), bench_reps, bench_seed, kernels);
    bench_out.write([&](std::ostream& os) { write_bench_csv(os, records); });
    return 0;
  }

  if (reg_cmd->parsed()) {
    const std::vector<double> svals = parse_double_list(reg_svals);
    const RegularityReport rep = counterexample_regularity_report(reg_degree, svals);
    const SeriesEstimateReport series = series_estimate_check(0, 0, reg_series_max, 0.8);
    reg_out.write([&](std::ostream& os) {
      os << "# so3ft-csv v1\n";
      os << "record,n,s,value\n";
      char buf[120];
      for (std::size_t i = 0; i < rep.even_n.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "xi,%d,,%.17g\n", rep.even_n[i], rep.xi[i]);
        os << buf;
      }
      for (std::size_t si = 0; si < svals.size(); ++si)
        for (int n = 0; n <= reg_degree; n += std::max(1, reg_degree / 50)) {
          std::snprintf(buf, sizeof(buf), "partial_norm,%d,%.17g,%.17g\n", n, svals[si],
                        rep.partial_norm(si, n));
          os << buf;
        }
      for (int n = 2; n <= reg_series_max; ++n) {
        const double bound = 151.0 * std::log(2.0 * n + 1.0) / std::sqrt(2.0 * n + 1.0);
        std::snprintf(buf, sizeof(buf), "series_I,%d,,%.17g\n", n,
                      series.I[static_cast<std::size_t>(n)]);
        os << buf;
        std::snprintf(buf, sizeof(buf), "series_bound_ratio,%d,,%.17g\n", n,
                      series.I[static_cast<std::size_t>(n)] / bound);
        os << buf;
      }
    });
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const so3ft::ParseError& e) {
    std::cerr << "so3ft: input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "so3ft: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "so3ft: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "so3ft: internal error: " << e.what() << "\n";
    return 1;
  }
}
