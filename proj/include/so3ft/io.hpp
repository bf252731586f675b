#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "so3ft/core_types.hpp"
#include "so3ft/special_functions.hpp"

namespace so3ft {

/// Malformed input; line numbers are 1-based.
struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_number, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + what),
        line(line_number) {}
};

namespace detail {

/// Round-trip exact decimal formatting of a double.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct LineReader {
  std::istream& in;
  int line_number = 0;

  bool next(std::string& line) {
    if (!std::getline(in, line)) return false;
    ++line_number;
    return true;
  }

  std::string require(const std::string& what) {
    std::string line;
    if (!next(line)) throw ParseError(line_number + 1, "unexpected end of file, expected " + what);
    return line;
  }
};

inline int parse_header(const std::string& line, const std::string& kind, char count_tag,
                        int line_number) {
  std::istringstream ss(line);
  std::string magic, name, field;
  ss >> magic >> name >> field;
  const std::string expected_field(1, count_tag);
  if (magic != "SO3FT" || name != kind || field.size() < 3 ||
      field.compare(0, 2, expected_field + "=") != 0)
    throw ParseError(line_number, "expected header 'SO3FT " + kind + " " + expected_field +
                                      "=<" + expected_field + ">'");
  try {
    return std::stoi(field.substr(2));
  } catch (const std::exception&) {
    throw ParseError(line_number, "bad count in header: '" + field + "'");
  }
}

inline double parse_real(std::istringstream& ss, int line_number, const char* what) {
  double v;
  if (!(ss >> v)) throw ParseError(line_number, std::string("expected ") + what);
  return v;
}

inline long parse_int(std::istringstream& ss, int line_number, const char* what) {
  long v;
  if (!(ss >> v)) throw ParseError(line_number, std::string("expected ") + what);
  return v;
}

inline void expect_line_end(std::istringstream& ss, int line_number) {
  std::string rest;
  if (ss >> rest) throw ParseError(line_number, "trailing data '" + rest + "'");
}

}  // namespace detail

/// `SO3FT HARMONIC N=<N>` then one `n k l re im` line per triple in index order.
inline void write_harmonic(std::ostream& out, const HarmonicCoefficients& fhat) {
  out << "SO3FT HARMONIC N=" << fhat.bandwidth << "\n";
  for (int n = 0; n <= fhat.bandwidth; ++n)
    for (int k = -n; k <= n; ++k)
      for (int l = -n; l <= n; ++l) {
        const cplx v = fhat.at(n, k, l);
        out << n << ' ' << k << ' ' << l << ' ' << detail::fmt_double(v.real()) << ' '
            << detail::fmt_double(v.imag()) << "\n";
      }
}

inline HarmonicCoefficients read_harmonic(std::istream& in) {
  detail::LineReader reader{in};
  const std::string header = reader.require("coefficient header");
  const int N = detail::parse_header(header, "HARMONIC", 'N', reader.line_number);
  if (N < 0) throw ParseError(reader.line_number, "negative bandwidth");
  HarmonicCoefficients fhat(N);
  for (int n = 0; n <= N; ++n)
    for (int k = -n; k <= n; ++k)
      for (int l = -n; l <= n; ++l) {
        std::istringstream ss(reader.require("coefficient line"));
        const long rn = detail::parse_int(ss, reader.line_number, "degree n");
        const long rk = detail::parse_int(ss, reader.line_number, "order k");
        const long rl = detail::parse_int(ss, reader.line_number, "order l");
        if (rn != n || rk != k || rl != l)
          throw ParseError(reader.line_number,
                           "triple out of order: expected (" + std::to_string(n) + "," +
                               std::to_string(k) + "," + std::to_string(l) + ")");
        const double re = detail::parse_real(ss, reader.line_number, "real part");
        const double im = detail::parse_real(ss, reader.line_number, "imaginary part");
        detail::expect_line_end(ss, reader.line_number);
        fhat.at(n, k, l) = cplx{re, im};
      }
  return fhat;
}

/// `SO3FT CUBE N=<N>` then one `k j l re im` line per cube entry in index order.
inline void write_cube(std::ostream& out, const FourierCube& ghat) {
  const int N = ghat.bandwidth;
  out << "SO3FT CUBE N=" << N << "\n";
  for (int k = -N; k <= N; ++k)
    for (int j = -N; j <= N; ++j)
      for (int l = -N; l <= N; ++l) {
        const cplx v = ghat.at(k, j, l);
        out << k << ' ' << j << ' ' << l << ' ' << detail::fmt_double(v.real()) << ' '
            << detail::fmt_double(v.imag()) << "\n";
      }
}

inline FourierCube read_cube(std::istream& in) {
  detail::LineReader reader{in};
  const std::string header = reader.require("cube header");
  const int N = detail::parse_header(header, "CUBE", 'N', reader.line_number);
  if (N < 0) throw ParseError(reader.line_number, "negative bandwidth");
  FourierCube ghat(N);
  for (int k = -N; k <= N; ++k)
    for (int j = -N; j <= N; ++j)
      for (int l = -N; l <= N; ++l) {
        std::istringstream ss(reader.require("cube line"));
        const long rk = detail::parse_int(ss, reader.line_number, "index k");
        const long rj = detail::parse_int(ss, reader.line_number, "index j");
        const long rl = detail::parse_int(ss, reader.line_number, "index l");
        if (rk != k || rj != j || rl != l)
          throw ParseError(reader.line_number, "triple out of order");
        const double re = detail::parse_real(ss, reader.line_number, "real part");
        const double im = detail::parse_real(ss, reader.line_number, "imaginary part");
        detail::expect_line_end(ss, reader.line_number);
        ghat.at(k, j, l) = cplx{re, im};
      }
  return ghat;
}

struct NodesFile {
  RotationList nodes;
  std::vector<double> weights;  // empty when the file has no weight column
};

/// `SO3FT NODES M=<M>` then `alpha beta gamma` lines, optionally extended
/// with a fourth `weight` column (all lines must agree).
inline void write_nodes(std::ostream& out, const RotationList& nodes,
                        const std::vector<double>* weights = nullptr) {
  if (weights && weights->size() != nodes.size())
    throw std::invalid_argument("write_nodes: weight count mismatch");
  out << "SO3FT NODES M=" << nodes.size() << "\n";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out << detail::fmt_double(nodes[i].alpha) << ' ' << detail::fmt_double(nodes[i].beta)
        << ' ' << detail::fmt_double(nodes[i].gamma);
    if (weights) out << ' ' << detail::fmt_double((*weights)[i]);
    out << "\n";
  }
}

inline NodesFile read_nodes(std::istream& in) {
  detail::LineReader reader{in};
  const std::string header = reader.require("nodes header");
  const long m = detail::parse_header(header, "NODES", 'M', reader.line_number);
  if (m < 1) throw ParseError(reader.line_number, "node count must be >= 1");
  NodesFile file;
  bool weighted = false;
  for (long i = 0; i < m; ++i) {
    std::istringstream ss(reader.require("node line"));
    const double a = detail::parse_real(ss, reader.line_number, "alpha");
    const double b = detail::parse_real(ss, reader.line_number, "beta");
    const double g = detail::parse_real(ss, reader.line_number, "gamma");
    double w;
    const bool has_weight = static_cast<bool>(ss >> w);
    if (i == 0) weighted = has_weight;
    else if (has_weight != weighted)
      throw ParseError(reader.line_number, "inconsistent weight column");
    detail::expect_line_end(ss, reader.line_number);
    try {
      file.nodes.emplace_back(a, b, g);
    } catch (const std::invalid_argument& e) {
      throw ParseError(reader.line_number, e.what());
    }
    if (weighted) file.weights.push_back(w);
  }
  return file;
}

/// `SO3FT VALUES M=<M>` then `re im` sample lines.
inline void write_values(std::ostream& out, std::span<const cplx> values) {
  out << "SO3FT VALUES M=" << values.size() << "\n";
  for (const cplx& v : values)
    out << detail::fmt_double(v.real()) << ' ' << detail::fmt_double(v.imag()) << "\n";
}

inline std::vector<cplx> read_values(std::istream& in) {
  detail::LineReader reader{in};
  const std::string header = reader.require("values header");
  const long m = detail::parse_header(header, "VALUES", 'M', reader.line_number);
  if (m < 0) throw ParseError(reader.line_number, "negative count");
  std::vector<cplx> values;
  values.reserve(static_cast<std::size_t>(m));
  for (long i = 0; i < m; ++i) {
    std::istringstream ss(reader.require("value line"));
    const double re = detail::parse_real(ss, reader.line_number, "real part");
    const double im = detail::parse_real(ss, reader.line_number, "imaginary part");
    detail::expect_line_end(ss, reader.line_number);
    values.emplace_back(re, im);
  }
  return values;
}

/// `SO3FT DZERO N=<N>` with `n j k value` lines, for cross-implementation
/// comparison of the d^n_{j,k}(0) table.
inline void write_dzero(std::ostream& out, const WignerDZeroTable& table) {
  out << "SO3FT DZERO N=" << table.bandwidth << "\n";
  for (int n = 0; n <= table.bandwidth; ++n)
    for (int j = -n; j <= n; ++j)
      for (int k = -n; k <= n; ++k)
        out << n << ' ' << j << ' ' << k << ' ' << detail::fmt_double(table(n, j, k)) << "\n";
}

inline WignerDZeroTable read_dzero(std::istream& in) {
  detail::LineReader reader{in};
  const std::string header = reader.require("table header");
  const int N = detail::parse_header(header, "DZERO", 'N', reader.line_number);
  if (N < 0) throw ParseError(reader.line_number, "negative bandwidth");
  WignerDZeroTable table;
  table.bandwidth = N;
  table.values.assign(static_cast<std::size_t>(dimension(N)), 0.0);
  for (int n = 0; n <= N; ++n)
    for (int j = -n; j <= n; ++j)
      for (int k = -n; k <= n; ++k) {
        std::istringstream ss(reader.require("table line"));
        const long rn = detail::parse_int(ss, reader.line_number, "degree n");
        const long rj = detail::parse_int(ss, reader.line_number, "order j");
        const long rk = detail::parse_int(ss, reader.line_number, "order k");
        if (rn != n || rj != j || rk != k)
          throw ParseError(reader.line_number, "triple out of order");
        table.slot(n, j, k) = detail::parse_real(ss, reader.line_number, "value");
        detail::expect_line_end(ss, reader.line_number);
      }
  return table;
}

}  // namespace so3ft
