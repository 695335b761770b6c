#pragma once

// Group averages of the phase-space indicator chi_eps(x, xi) = eps^{-n} 1[|xi_i| <= eps/2]
// and their small-eps asymptotics. Points are z = (x_1..x_n, xi_1..xi_n).

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "tfrotor/detail/parallel.hpp"
#include "tfrotor/sampling.hpp"
#include "tfrotor/symplectic.hpp"

namespace tfrotor {

enum class PsiMode { monte_carlo, torus_closed_form, quadrature };

inline std::string mode_name(PsiMode m) {
  switch (m) {
    case PsiMode::monte_carlo: return "monte-carlo";
    case PsiMode::torus_closed_form: return "torus-closed-form";
    case PsiMode::quadrature: return "quadrature";
  }
  return "?";
}

inline PsiMode parse_mode(const std::string& name) {
  if (name == "monte-carlo" || name == "rotation") return PsiMode::monte_carlo;
  if (name == "torus-closed-form" || name == "torus") return PsiMode::torus_closed_form;
  if (name == "quadrature") return PsiMode::quadrature;
  throw InvalidArgument("unknown mode '" + name + "'");
}

struct PsiEstimate {
  std::vector<double> z;
  double eps = 0.0;
  double value = 0.0;
  double std_error = 0.0;
  PsiMode mode = PsiMode::monte_carlo;
  std::size_t samples = 0;
};

namespace detail {

inline int phase_dim(std::span<const double> z) {
  if (z.size() != 2 && z.size() != 4) throw InvalidArgument("phase-space point must have 2 or 4 coordinates");
  for (double v : z) {
    if (!std::isfinite(v)) throw InvalidArgument("phase-space point must be finite");
  }
  return static_cast<int>(z.size() / 2);
}

inline void check_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("eps must be positive");
}

/// max_i |(S z)_{xi_i}| with S = iota(U): the xi block is B x + A xi.
inline double xi_extent(const UnitaryMatrix& u, std::span<const double> z) {
  const int n = u.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = 0.0;
    for (int j = 0; j < n; ++j) v += u(i, j).imag() * z[j] + u(i, j).real() * z[n + j];
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

inline double coordinate_modulus(std::span<const double> z, int i) {
  const int n = static_cast<int>(z.size() / 2);
  return std::hypot(z[i], z[n + i]);
}

inline double torus_profile(double mu) { return 4.0 * std::asin(std::min(1.0, mu)); }

inline std::size_t quadrature_points(std::span<const double> z, double eps) {
  const double r = coordinate_modulus(z, 0);
  const double want = 2048.0 * 2.0 * kPi * r / eps;
  return static_cast<std::size_t>(std::clamp(std::ceil(want), 4096.0, 16777216.0));
}

/// Normalized trapezoid over the circle group: mean of chi_eps(R(theta) z).
inline double quadrature_psi(std::span<const double> z, double eps) {
  const double r = coordinate_modulus(z, 0);
  if (r == 0.0) return 1.0 / eps;
  const double phase = std::atan2(z[1], z[0]);
  const std::size_t M = quadrature_points(z, eps);
  std::size_t hits = 0;
  for (std::size_t j = 0; j < M; ++j) {
    const double theta = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(M);
    // xi component of R(theta) z is r sin(theta + phase).
    if (std::abs(r * std::sin(theta + phase)) <= 0.5 * eps) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(M) / eps;
}

}  // namespace detail

/// eps^{-n} if every xi component lies in [-eps/2, eps/2] (closed), else 0.
inline double chi_eps(std::span<const double> z, double eps) {
  const int n = detail::phase_dim(z);
  detail::check_eps(eps);
  for (int i = 0; i < n; ++i) {
    if (std::abs(z[n + i]) > 0.5 * eps) return 0.0;
  }
  return std::pow(eps, -n);
}

/// eps^{-n} prod_i 4 arcsin(min(1, eps / (2 |z_i|))), 2 pi for a vanishing coordinate.
/// Uses the unnormalized torus measure (total (2 pi)^n).
inline double torus_psi(std::span<const double> z, double eps) {
  const int n = detail::phase_dim(z);
  detail::check_eps(eps);
  double v = std::pow(eps, -n);
  for (int i = 0; i < n; ++i) {
    const double r = detail::coordinate_modulus(z, i);
    v *= r == 0.0 ? 2.0 * kPi : detail::torus_profile(eps / (2.0 * r));
  }
  return v;
}

/// Estimates of Psi_eps(z) for several widths; Monte-Carlo estimates share one sample set.
inline std::vector<PsiEstimate> psi_eps_sweep(std::span<const double> z, const std::vector<double>& eps,
                                              const SamplerConfig& cfg, PsiMode mode) {
  const int n = detail::phase_dim(z);
  for (double e : eps) detail::check_eps(e);
  std::vector<PsiEstimate> out;
  auto base = [&](double e) {
    PsiEstimate est;
    est.z.assign(z.begin(), z.end());
    est.eps = e;
    est.mode = mode;
    return est;
  };
  switch (mode) {
    case PsiMode::torus_closed_form:
      for (double e : eps) {
        PsiEstimate est = base(e);
        est.value = torus_psi(z, e);
        out.push_back(est);
      }
      return out;
    case PsiMode::quadrature:
      if (n != 1) throw InvalidArgument("quadrature mode covers the circle group (n = 1) only");
      for (double e : eps) {
        PsiEstimate est = base(e);
        est.value = detail::quadrature_psi(z, e);
        est.samples = detail::coordinate_modulus(z, 0) == 0.0 ? 0 : detail::quadrature_points(z, e);
        out.push_back(est);
      }
      return out;
    case PsiMode::monte_carlo: {
      cfg.validate();
      const std::vector<double> zz(z.begin(), z.end());
      const auto extent = detail::parallel_map<double>(cfg.count, [&](std::size_t k) {
        return detail::xi_extent(haar_unitary(n, cfg.seed, k), zz);
      });
      for (double e : eps) {
        PsiEstimate est = base(e);
        const double height = std::pow(e, -n);
        std::size_t hits = 0;
        for (double m : extent) hits += m <= 0.5 * e;
        const double K = static_cast<double>(cfg.count);
        const double frac = static_cast<double>(hits) / K;
        est.value = height * frac;
        est.std_error = cfg.count > 1 ? height * std::sqrt(frac * (1.0 - frac) / (K - 1.0)) : 0.0;
        est.samples = cfg.count;
        out.push_back(est);
      }
      return out;
    }
  }
  throw InvalidArgument("unknown mode");
}

inline PsiEstimate psi_eps(std::span<const double> z, double eps, const SamplerConfig& cfg, PsiMode mode) {
  return psi_eps_sweep(z, {eps}, cfg, mode).front();
}

/// |z|^n for the rotation group, |z_1 ... z_n| (coordinate moduli) for the torus.
inline double orbit_weight(std::span<const double> z, PsiMode mode) {
  const int n = detail::phase_dim(z);
  if (mode == PsiMode::torus_closed_form) {
    double w = 1.0;
    for (int i = 0; i < n; ++i) w *= detail::coordinate_modulus(z, i);
    return w;
  }
  double r2 = 0.0;
  for (double v : z) r2 += v * v;
  return std::pow(r2, 0.5 * n);
}

struct ConvergenceRow {
  double eps = 0.0;
  double value = 0.0;
  double std_error = 0.0;
  double weighted_value = 0.0;
  double weighted_error = 0.0;
};

struct ConvergenceStudy {
  PsiMode mode = PsiMode::monte_carlo;
  std::vector<double> z;
  std::vector<ConvergenceRow> rows;
  /// Extrapolation of the weighted values to eps = 0 through the last three rows.
  double limit = 0.0;
  double limit_error = 0.0;
};

/// Lagrange weights at eps = 0 for the given nodes.
inline std::vector<double> extrapolation_weights(const std::vector<double>& nodes) {
  std::vector<double> w(nodes.size(), 1.0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (i != j) w[i] *= (0.0 - nodes[j]) / (nodes[i] - nodes[j]);
    }
  }
  return w;
}

inline ConvergenceStudy convergence_study(std::span<const double> z, const std::vector<double>& eps,
                                          const SamplerConfig& cfg, PsiMode mode) {
  if (eps.empty()) throw InvalidArgument("eps sequence is empty");
  for (std::size_t i = 1; i < eps.size(); ++i) {
    if (!(eps[i] < eps[i - 1])) throw InvalidArgument("eps sequence must be strictly decreasing");
  }
  const double w = orbit_weight(z, mode);
  if (w == 0.0) {
    throw InvalidArgument(mode == PsiMode::torus_closed_form
                              ? "torus convergence needs every coordinate pair of z to be nonzero"
                              : "convergence study needs z != 0");
  }
  ConvergenceStudy study;
  study.mode = mode;
  study.z.assign(z.begin(), z.end());
  for (const PsiEstimate& est : psi_eps_sweep(z, eps, cfg, mode)) {
    study.rows.push_back({est.eps, est.value, est.std_error, est.value * w, est.std_error * w});
  }
  const std::size_t k = std::min<std::size_t>(3, study.rows.size());
  std::vector<double> nodes;
  for (std::size_t i = study.rows.size() - k; i < study.rows.size(); ++i) nodes.push_back(study.rows[i].eps);
  const std::vector<double> lw = extrapolation_weights(nodes);
  double var = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const ConvergenceRow& row = study.rows[study.rows.size() - k + i];
    study.limit += lw[i] * row.weighted_value;
    var += lw[i] * lw[i] * row.weighted_error * row.weighted_error;
  }
  study.limit_error = std::sqrt(var);
  return study;
}

/// Reference point and widths used to fit the asymptotic constant C_1.
inline ConvergenceStudy fit_limit_constant(int n, const SamplerConfig& cfg, PsiMode mode) {
  std::vector<double> z(static_cast<std::size_t>(2 * n), 0.0);
  for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = mode == PsiMode::torus_closed_form ? 1.0 : (i == 0);
  const std::vector<double> eps = mode == PsiMode::monte_carlo ? std::vector<double>{1.0, 0.5, 0.25}
                                                               : std::vector<double>{0.25, 0.125, 0.0625};
  return convergence_study(z, eps, cfg, mode);
}

struct LowerBoundReport {
  double constant = 0.0;
  double worst_ratio = 0.0;
  std::vector<double> worst_z;
  double worst_eps = 0.0;
  std::size_t evaluated = 0;
  bool passed = false;
};

/// Checks Psi_eps(z) >= c * bound(z, eps) with c the fitted limit constant;
/// bound = min(eps^{-n}, |z|^{-n}) for rotations, prod_i min(eps^{-1}, |z_i|^{-1}) for the torus.
inline LowerBoundReport lower_bound_check(const std::vector<std::vector<double>>& zs, const std::vector<double>& eps,
                                          const SamplerConfig& cfg, PsiMode mode, double threshold = 0.5) {
  if (zs.empty() || eps.empty()) throw InvalidArgument("lower_bound_check needs points and widths");
  const int n = detail::phase_dim(zs.front());
  LowerBoundReport rep;
  rep.constant = fit_limit_constant(n, cfg, mode).limit;
  rep.worst_ratio = std::numeric_limits<double>::infinity();
  for (const auto& z : zs) {
    if (detail::phase_dim(z) != n) throw InvalidArgument("points of mixed dimension");
    const auto ests = psi_eps_sweep(z, eps, cfg, mode);
    for (const PsiEstimate& est : ests) {
      double bound = 1.0;
      if (mode == PsiMode::torus_closed_form) {
        for (int i = 0; i < n; ++i) {
          bound *= std::min(1.0 / est.eps, 1.0 / detail::coordinate_modulus(z, i));
        }
      } else {
        bound = std::min(std::pow(est.eps, -n), 1.0 / orbit_weight(z, mode));
      }
      const double ratio = est.value / (rep.constant * bound);
      ++rep.evaluated;
      if (ratio < rep.worst_ratio) {
        rep.worst_ratio = ratio;
        rep.worst_z = z;
        rep.worst_eps = est.eps;
      }
    }
  }
  rep.passed = rep.worst_ratio > threshold;
  return rep;
}

struct NormalizationReport {
  std::vector<double> estimates;
  std::vector<double> std_errors;
  double max_deviation = 0.0;
  /// max over points of max(3 * stderr, 1e-6)
  double tolerance = 0.0;
  bool passed = false;
};

/// Estimates the group integral of chi_eps(S z) / Psi_eps(S z) (exactly one in
/// the continuum) for each z. The outer integral is Monte Carlo over cfg; the
/// inner Psi comes from quadrature, the closed form, or an independent sample set.
inline NormalizationReport normalization_check(const std::vector<std::vector<double>>& zs, double eps,
                                               const SamplerConfig& cfg, PsiMode mode) {
  if (zs.empty()) throw InvalidArgument("normalization_check needs at least one point");
  detail::check_eps(eps);
  cfg.validate();
  NormalizationReport rep;
  bool ok = true;
  for (const auto& z : zs) {
    const int n = detail::phase_dim(z);
    double est = 0.0, se = 0.0;
    if (mode == PsiMode::torus_closed_form) {
      // Outer integral in closed form; the inner Psi evaluated on a moved orbit point.
      const TorusElement d = torus_sample(n, cfg.seed, 0);
      const SymplecticRotation s = torus_to_rotation(d);
      Eigen::VectorXd zv = Eigen::Map<const Eigen::VectorXd>(z.data(), 2 * n);
      const Eigen::VectorXd moved = s.matrix() * zv;
      est = torus_psi(z, eps) / torus_psi(std::vector<double>(moved.data(), moved.data() + 2 * n), eps);
    } else {
      if (mode == PsiMode::quadrature && n != 1) throw InvalidArgument("quadrature mode covers n = 1 only");
      const std::size_t inner_count = std::min<std::size_t>(cfg.count, 20000);
      std::vector<UnitaryMatrix> inner;
      if (mode == PsiMode::monte_carlo) {
        inner = sample_haar_unitary(n, SamplerConfig{cfg.seed ^ 0x5bd1e9955bd1e995ULL, inner_count});
      }
      const double height = std::pow(eps, -n);
      auto terms = detail::parallel_map<double>(cfg.count, [&](std::size_t k) {
        const UnitaryMatrix u = haar_unitary(n, cfg.seed, k);
        if (detail::xi_extent(u, z) > 0.5 * eps) return 0.0;
        const RMatrix s = iota(u).matrix();
        const Eigen::VectorXd w = s * Eigen::Map<const Eigen::VectorXd>(z.data(), 2 * n);
        const std::vector<double> moved(w.data(), w.data() + 2 * n);
        double psi = 0.0;
        if (mode == PsiMode::quadrature) {
          psi = detail::quadrature_psi(moved, eps);
        } else {
          std::size_t hits = 0;
          for (const UnitaryMatrix& v : inner) hits += detail::xi_extent(v, moved) <= 0.5 * eps;
          psi = height * static_cast<double>(hits) / static_cast<double>(inner.size());
        }
        return psi > 0.0 ? height / psi : 0.0;
      });
      est = detail::pairwise_sum(terms) / static_cast<double>(cfg.count);
      std::vector<double> dev(terms.size());
      for (std::size_t k = 0; k < terms.size(); ++k) dev[k] = (terms[k] - est) * (terms[k] - est);
      se = cfg.count > 1 ? std::sqrt(detail::pairwise_sum(dev) / static_cast<double>(cfg.count - 1) /
                                     static_cast<double>(cfg.count))
                         : 0.0;
    }
    rep.estimates.push_back(est);
    rep.std_errors.push_back(se);
    const double tol = std::max(3.0 * se, 1e-6);
    const double dev = std::abs(est - 1.0);
    rep.max_deviation = std::max(rep.max_deviation, dev);
    rep.tolerance = std::max(rep.tolerance, tol);
    ok = ok && dev <= tol;
  }
  rep.passed = ok;
  return rep;
}

}  // namespace tfrotor
