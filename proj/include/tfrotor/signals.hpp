#pragma once

// Analytic test signals: the standard Gaussian window, Hermite functions and
// translated / modulated / chirped / dilated Gaussians, sampled in closed form.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tfrotor/grid.hpp"

namespace tfrotor {

/// L2-normalized Hermite function h_k(t) = 2^{1/4}/sqrt(2^k k!) H_k(sqrt(2 pi) t) e^{-pi t^2}.
/// These are eigenfunctions of the unitary Fourier transform: F h_k = (-i)^k h_k.
inline double hermite_function(int k, double t) {
  const double u = std::sqrt(2.0 * kPi) * t;
  double prev = 0.0;
  double cur = std::pow(2.0, 0.25) * std::exp(-kPi * t * t);
  for (int j = 0; j < k; ++j) {
    const double next = std::sqrt(2.0 / (j + 1.0)) * u * cur - std::sqrt(j / (j + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// phi(t) = 2^{1/4} e^{-pi t^2}, one axis of the standard window.
inline double gaussian_1d(double t) { return std::pow(2.0, 0.25) * std::exp(-kPi * t * t); }

enum class SignalKind { gaussian, translated, modulated, hermite, chirped, dilated };

/// One of the named test signals. `params` holds one value per axis, or a
/// single value broadcast to every axis; multi-dimensional signals are tensor
/// products of the 1-D profile.
struct SignalDescriptor {
  SignalKind kind = SignalKind::gaussian;
  std::vector<double> params;

  double param(int axis) const {
    if (params.empty()) return 0.0;
    return params.size() == 1 ? params[0] : params.at(static_cast<std::size_t>(axis));
  }
};

inline std::string kind_name(SignalKind kind) {
  switch (kind) {
    case SignalKind::gaussian: return "gaussian";
    case SignalKind::translated: return "translated-gaussian";
    case SignalKind::modulated: return "modulated-gaussian";
    case SignalKind::hermite: return "hermite";
    case SignalKind::chirped: return "chirped-gaussian";
    case SignalKind::dilated: return "dilated-gaussian";
  }
  return "?";
}

inline std::string to_string(const SignalDescriptor& d) {
  std::ostringstream os;
  os << kind_name(d.kind);
  if (d.kind != SignalKind::gaussian) {
    os << '(';
    for (std::size_t i = 0; i < d.params.size(); ++i) os << (i ? "," : "") << d.params[i];
    os << ')';
  }
  return os.str();
}

/// Parses "gaussian", "translated-gaussian(1)", "hermite(2)", "modulated-gaussian(1,0.5)", ...
inline SignalDescriptor parse_descriptor(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  const auto open = s.find('(');
  const std::string name = s.substr(0, open);
  std::vector<double> params;
  if (open != std::string::npos) {
    if (s.back() != ')') throw InvalidArgument("unterminated parameter list in '" + s + "'");
    std::stringstream body(s.substr(open + 1, s.size() - open - 2));
    std::string tok;
    while (std::getline(body, tok, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != tok.size() || !std::isfinite(v)) {
        throw InvalidArgument("bad signal parameter '" + tok + "' in '" + s + "'");
      }
      params.push_back(v);
    }
  }

  SignalDescriptor d;
  if (name == "gaussian") {
    d.kind = SignalKind::gaussian;
  } else if (name == "translated-gaussian") {
    d.kind = SignalKind::translated;
  } else if (name == "modulated-gaussian") {
    d.kind = SignalKind::modulated;
  } else if (name == "hermite") {
    d.kind = SignalKind::hermite;
  } else if (name == "chirped-gaussian") {
    d.kind = SignalKind::chirped;
  } else if (name == "dilated-gaussian") {
    d.kind = SignalKind::dilated;
  } else {
    throw InvalidArgument("unknown signal '" + name + "'");
  }
  if (d.kind == SignalKind::gaussian) {
    if (!params.empty()) throw InvalidArgument("gaussian takes no parameters");
  } else if (params.empty() || params.size() > 2) {
    throw InvalidArgument(name + " needs one parameter (or one per axis)");
  }
  d.params = std::move(params);
  return d;
}

namespace detail {

inline void validate_descriptor(const SignalDescriptor& d, int dim) {
  if (d.params.size() > 1 && d.params.size() != static_cast<std::size_t>(dim)) {
    throw InvalidArgument("descriptor " + to_string(d) + " has " + std::to_string(d.params.size()) +
                          " parameters for a " + std::to_string(dim) + "-D grid");
  }
  for (int axis = 0; axis < dim; ++axis) {
    const double p = d.param(axis);
    if (d.kind == SignalKind::hermite && (p < 0.0 || p != std::floor(p) || p > 60.0)) {
      throw InvalidArgument("hermite order must be an integer in [0, 60]");
    }
    if (d.kind == SignalKind::dilated && !(p > 0.0)) {
      throw InvalidArgument("dilation factor must be positive");
    }
  }
}

/// Closed-form 1-D profile of the descriptor along `axis`.
inline cplx profile(const SignalDescriptor& d, int axis, double t) {
  const double a = d.param(axis);
  switch (d.kind) {
    case SignalKind::gaussian: return gaussian_1d(t);
    case SignalKind::translated: return gaussian_1d(t - a);
    case SignalKind::modulated: return std::polar(gaussian_1d(t), 2.0 * kPi * a * t);
    case SignalKind::hermite: return hermite_function(static_cast<int>(a), t);
    case SignalKind::chirped: return std::polar(gaussian_1d(t), kPi * a * t * t);
    case SignalKind::dilated: return gaussian_1d(t / a) / std::sqrt(a);
  }
  return 0.0;
}

/// |F profile|(nu), used to bound frequency-side leakage.
inline double spectral_modulus(const SignalDescriptor& d, int axis, double nu) {
  const double a = d.param(axis);
  switch (d.kind) {
    case SignalKind::gaussian:
    case SignalKind::translated: return gaussian_1d(nu);
    case SignalKind::modulated: return gaussian_1d(nu - a);
    case SignalKind::hermite: return std::abs(hermite_function(static_cast<int>(a), nu));
    case SignalKind::chirped: {
      const double s = 1.0 + a * a;
      return std::pow(2.0, 0.25) * std::pow(s, -0.25) * std::exp(-kPi * nu * nu / s);
    }
    case SignalKind::dilated: return std::sqrt(a) * gaussian_1d(a * nu);
  }
  return 0.0;
}

/// Fraction of sum |f|^2 lying outside [-half, half) on a lattice extended to 3x the width.
template <class Fn>
double tail_fraction_1d(Fn&& modulus, double half, double step) {
  double inside = 0.0;
  double outside = 0.0;
  const long count = static_cast<long>(std::llround(3.0 * half / step));
  for (long k = -count; k < count; ++k) {
    const double t = k * step;
    const double m = modulus(t);
    if (t >= -half && t < half) {
      inside += m * m;
    } else {
      outside += m * m;
    }
  }
  const double total = inside + outside;
  return total > 0.0 ? outside / total : 0.0;
}

}  // namespace detail

inline constexpr double kSupportTolerance = 1e-10;

/// Relative squared-mass leakage of the descriptor outside the time window and
/// outside the frequency window of the grid, summed over axes.
inline double support_leakage(const Grid& grid, const SignalDescriptor& d) {
  detail::validate_descriptor(d, grid.dim());
  double leak = 0.0;
  for (int axis = 0; axis < grid.dim(); ++axis) {
    leak += detail::tail_fraction_1d([&](double t) { return std::abs(detail::profile(d, axis, t)); },
                                     grid.half_width(), grid.spacing());
    leak += detail::tail_fraction_1d([&](double nu) { return detail::spectral_modulus(d, axis, nu); },
                                     grid.dual().half_width(), grid.freq_spacing());
  }
  return leak;
}

/// Samples the descriptor exactly at the lattice points.
inline Signal make_test_signal(const Grid& grid, const SignalDescriptor& d) {
  const double leak = support_leakage(grid, d);
  if (leak > kSupportTolerance) {
    std::ostringstream os;
    os << "signal " << to_string(d) << " leaks " << leak << " of its mass outside the grid (tolerance "
       << kSupportTolerance << ")";
    throw SupportViolation(os.str());
  }
  const std::size_t N = grid.points();
  std::vector<cplx> first(N);
  for (std::size_t k = 0; k < N; ++k) first[k] = detail::profile(d, 0, grid.coordinate(k));
  if (grid.dim() == 1) return Signal(grid, std::move(first));

  std::vector<cplx> second(N);
  for (std::size_t k = 0; k < N; ++k) second[k] = detail::profile(d, 1, grid.coordinate(k));
  std::vector<cplx> values(N * N);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) values[i * N + j] = first[i] * second[j];
  }
  return Signal(grid, std::move(values));
}

inline Signal make_test_signal(const Grid& grid, std::string_view descriptor) {
  return make_test_signal(grid, parse_descriptor(descriptor));
}

/// phi(t) = 2^{n/4} e^{-pi |t|^2}, unit L2 norm.
inline Signal gaussian_window(const Grid& grid) {
  return make_test_signal(grid, SignalDescriptor{SignalKind::gaussian, {}});
}

/// The six-signal corpus used for the norm-equivalence checks.
inline std::vector<SignalDescriptor> equivalence_corpus() {
  return {
      {SignalKind::gaussian, {}},         {SignalKind::translated, {1.0}}, {SignalKind::modulated, {1.0}},
      {SignalKind::hermite, {1.0}},       {SignalKind::hermite, {2.0}},    {SignalKind::chirped, {0.5}},
  };
}

}  // namespace tfrotor
