#pragma once

// JSON and CSV serialization of norm reports and measure studies.

#include <json.hpp>

#include <cmath>
#include <ostream>
#include <string>

#include "tfrotor/measure.hpp"
#include "tfrotor/norms.hpp"
#include "tfrotor/signal_io.hpp"

namespace tfrotor {

inline nlohmann::ordered_json exponent_json(double p) {
  if (std::isinf(p)) return "inf";
  return p;
}

inline nlohmann::ordered_json to_json(const NormReport& r) {
  nlohmann::ordered_json j;
  j["method"] = r.method;
  j["p"] = exponent_json(r.p);
  j["value"] = r.value;
  j["root_value"] = r.root_value();
  j["stderr"] = r.std_error;
  j["n"] = r.grid.dim();
  j["N"] = r.grid.points();
  j["T"] = r.grid.side();
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["tail_fraction"] = r.tail_fraction;
  return j;
}

inline nlohmann::ordered_json to_json(const PsiEstimate& e) {
  nlohmann::ordered_json j;
  j["mode"] = mode_name(e.mode);
  j["z"] = e.z;
  j["eps"] = e.eps;
  j["value"] = e.value;
  j["stderr"] = e.std_error;
  j["samples"] = e.samples;
  return j;
}

/// Columns: mode,n,z1..z{2n},eps,value,stderr,weighted_value
inline void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceStudy>& studies) {
  std::size_t width = 0;
  for (const auto& s : studies) width = std::max(width, s.z.size());
  os << "mode,n";
  for (std::size_t i = 0; i < width; ++i) os << ",z" << i + 1;
  os << ",eps,value,stderr,weighted_value\n";
  for (const auto& s : studies) {
    for (const auto& row : s.rows) {
      os << mode_name(s.mode) << ',' << s.z.size() / 2;
      for (std::size_t i = 0; i < width; ++i) os << ',' << (i < s.z.size() ? detail::format_double(s.z[i]) : "");
      os << ',' << detail::format_double(row.eps) << ',' << detail::format_double(row.value) << ','
         << detail::format_double(row.std_error) << ',' << detail::format_double(row.weighted_value) << '\n';
    }
  }
}

}  // namespace tfrotor
