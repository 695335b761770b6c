#pragma once

// Signal CSV: a header line "# n N T", then one row per sample
// "index_1[,index_2],re,im". Commas or whitespace separate fields on input.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tfrotor/grid.hpp"

namespace tfrotor {

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',' || c == ' ' || c == '\t' || c == '\r') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline double parse_number(const std::string& tok, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != tok.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": '" + tok + "' is not a number");
  }
  return v;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline void write_signal(std::ostream& os, const Signal& s) {
  const Grid& g = s.grid();
  os << "# " << g.dim() << ' ' << g.points() << ' ' << detail::format_double(g.side()) << '\n';
  const std::size_t N = g.points();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (g.dim() == 1) {
      os << i;
    } else {
      os << i / N << ',' << i % N;
    }
    os << ',' << detail::format_double(s[i].real()) << ',' << detail::format_double(s[i].imag()) << '\n';
  }
}

inline Signal read_signal(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  int n = 0;
  std::size_t N = 0;
  double T = 0.0;
  std::vector<cplx> values;
  std::vector<char> seen;
  while (std::getline(is, line)) {
    ++line_no;
    if (!have_header) {
      if (line.empty()) continue;
      if (line[0] != '#') throw ParseError("line 1: expected header '# n N T'");
      const auto f = detail::split_fields(line.substr(1));
      if (f.size() != 3) throw ParseError("header must hold n, N and T");
      const double nd = detail::parse_number(f[0], line_no);
      const double Nd = detail::parse_number(f[1], line_no);
      T = detail::parse_number(f[2], line_no);
      if (nd != 1.0 && nd != 2.0) throw ParseError("header: n must be 1 or 2");
      if (Nd < 1.0 || Nd != std::floor(Nd) || Nd > 65536.0) throw ParseError("header: bad N");
      n = static_cast<int>(nd);
      N = static_cast<std::size_t>(Nd);
      try {
        (void)Grid(n, N, T);
      } catch (const InvalidArgument& e) {
        throw ParseError(std::string("header: ") + e.what());
      }
      const std::size_t total = n == 1 ? N : N * N;
      values.assign(total, cplx(0.0));
      seen.assign(total, 0);
      have_header = true;
      continue;
    }
    const auto f = detail::split_fields(line);
    if (f.empty()) continue;
    if (f.size() != static_cast<std::size_t>(n) + 2) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(n + 2) + " columns, got " +
                       std::to_string(f.size()));
    }
    std::size_t index = 0;
    for (int a = 0; a < n; ++a) {
      const double k = detail::parse_number(f[static_cast<std::size_t>(a)], line_no);
      if (k < 0.0 || k >= static_cast<double>(N) || k != std::floor(k)) {
        throw ParseError("line " + std::to_string(line_no) + ": index out of range");
      }
      index = index * N + static_cast<std::size_t>(k);
    }
    if (seen[index]) throw ParseError("line " + std::to_string(line_no) + ": duplicate sample index");
    seen[index] = 1;
    values[index] = cplx(detail::parse_number(f[static_cast<std::size_t>(n)], line_no),
                         detail::parse_number(f[static_cast<std::size_t>(n) + 1], line_no));
  }
  if (!have_header) throw ParseError("empty signal file");
  for (char c : seen) {
    if (!c) throw ParseError("signal file is missing samples");
  }
  try {
    return Signal(Grid(n, N, T), std::move(values));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

inline void save_signal(const Signal& s, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_signal(os, s);
  if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

inline Signal load_signal(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_signal(is);
}

/// Loads a signal and requires it to live on `expected`.
inline Signal load_signal(const std::string& path, const Grid& expected) {
  Signal s = load_signal(path);
  if (!(s.grid() == expected)) throw ParseError("signal file grid does not match the requested grid");
  return s;
}

}  // namespace tfrotor
