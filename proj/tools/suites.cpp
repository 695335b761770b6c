#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tfrotor/tfrotor.hpp"

namespace tfrotor::cli {
namespace {

Grid grid_for(const SuiteSettings& s, int n) {
  const std::size_t N = s.N ? s.N : (n == 1 ? 256 : 64);
  return Grid(n, N, s.T);
}

std::vector<int> dims(const SuiteSettings& s) {
  if (s.n) return {s.n};
  return {1, 2};
}

Check upper(std::string name, double measured, double tol) {
  return Check{std::move(name), measured, tol, measured <= tol};
}

std::vector<Check> frft_group(const SuiteSettings& s) {
  const Grid g = grid_for(s, 1);
  std::vector<Check> out;
  std::vector<double> lattice;
  for (int k = 0; k < 10; ++k) lattice.push_back(-kPi + (2.0 * kPi) * (k + 0.5) / 10.0);
  for (int order = 0; order <= 2; ++order) {
    const Signal h = make_test_signal(g, SignalDescriptor{SignalKind::hermite, {double(order)}});
    double compose = 0.0, norm = 0.0, eigen = 0.0;
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      const double a = lattice[i], b = lattice[(i + 3) % lattice.size()];
      compose = std::max(compose, frft_compose_check(a, b, h));
      const Signal o = frft(h, 0, a);
      norm = std::max(norm, std::abs(o.l2_norm() - h.l2_norm()));
      eigen = std::max(eigen, modulus_distance(o, h));
    }
    const std::string tag = "hermite(" + std::to_string(order) + ")";
    out.push_back(upper("frft group law " + tag, compose, 1e-5));
    out.push_back(upper("frft norm change " + tag, norm, 1e-6));
    out.push_back(upper("frft hermite modulus " + tag, eigen, 1e-5));
  }
  const Signal phi = gaussian_window(g);
  out.push_back(upper("F^2 is reflection on gaussian", frft_compose_check(kPi / 2, kPi / 2, phi), 1e-6));
  return out;
}

std::vector<Check> gaussian_invariance(const SuiteSettings& s) {
  std::vector<Check> out;
  const std::size_t count = s.samples ? s.samples : 20;
  for (int n : dims(s)) {
    const Grid g = grid_for(s, n);
    const Signal phi = gaussian_window(g);
    double worst = 0.0, norm = 0.0;
    for (const UnitaryMatrix& u : sample_haar_unitary(n, SamplerConfig{s.seed, count})) {
      const Signal o = apply_unitary(u, phi);
      worst = std::max(worst, modulus_distance(o, phi));
      norm = std::max(norm, std::abs(o.l2_norm() - 1.0));
    }
    const std::string tag = " (n=" + std::to_string(n) + ")";
    out.push_back(upper("gaussian modulus invariance" + tag, worst, 1e-5));
    out.push_back(upper("operator norm preservation" + tag, norm, 1e-5));
  }
  return out;
}

std::vector<Check> covariance(const SuiteSettings& s) {
  std::vector<Check> out;
  const std::size_t count = s.samples ? s.samples : 20;
  for (int n : dims(s)) {
    const Grid g = grid_for(s, n);
    const Signal phi = gaussian_window(g);
    const std::vector<std::string> fs = {"hermite(1)", "chirped-gaussian(0.5)", "translated-gaussian(1)"};
    const std::size_t used = n == 1 ? count : std::min<std::size_t>(count, 3);
    double worst = 0.0;
    for (const auto& name : fs) {
      const Signal f = make_test_signal(g, name);
      for (const UnitaryMatrix& u : sample_haar_unitary(n, SamplerConfig{s.seed, used})) {
        worst = std::max(worst, covariance_residual(u, f, phi));
      }
    }
    out.push_back(upper("covariance residual (n=" + std::to_string(n) + ")", worst, n == 1 ? 1e-2 : 1e-5));
  }
  return out;
}

std::vector<Check> equivalence(const SuiteSettings& s) {
  std::vector<Check> out;
  const int n = s.n ? s.n : 1;
  const Grid g = grid_for(s, n);
  const double tol = n == 1 ? 0.02 : 0.05;
  const SamplerConfig cfg{s.seed, s.samples ? s.samples : (std::isinf(s.p) ? std::size_t{500} : std::size_t{200})};
  std::vector<double> rot, rotf, tor, torf;
  double sup_dev = 0.0;
  for (const SignalDescriptor& d : equivalence_corpus()) {
    const Signal f = make_test_signal(g, d);
    const double stft_value = mp_norm_stft(f, s.p).value;
    if (std::isinf(s.p)) {
      for (NormMethod m : {NormMethod::sup_rotation, NormMethod::sup_torus, NormMethod::sup_rotation_freq,
                           NormMethod::sup_torus_freq}) {
        sup_dev = std::max(sup_dev, std::abs(evaluate_norm(m, f, s.p, cfg).value / stft_value - 1.0));
      }
      continue;
    }
    rot.push_back(rotation_functional(f, s.p, cfg).value / stft_value);
    rotf.push_back(rotation_functional_freq(f, s.p, cfg).value / stft_value);
    tor.push_back(torus_functional(f, s.p, cfg).value / stft_value);
    torf.push_back(torus_functional_freq(f, s.p, cfg).value / stft_value);
  }
  const std::string tag = " (n=" + std::to_string(n) + ")";
  if (std::isinf(s.p)) {
    out.push_back(upper("sup functionals vs stft sup" + tag, sup_dev, 0.05));
    return out;
  }
  auto spread = [](const std::vector<double>& r) {
    double mean = 0.0;
    for (double v : r) mean += v;
    mean /= static_cast<double>(r.size());
    double dev = 0.0;
    for (double v : r) dev = std::max(dev, std::abs(v / mean - 1.0));
    return dev;
  };
  auto against = [](const std::vector<double>& r, double c) {
    double dev = 0.0;
    for (double v : r) dev = std::max(dev, std::abs(v / c - 1.0));
    return dev;
  };
  const double ct = equivalence_constant(GroupKind::torus, n);
  const double cr = equivalence_constant(GroupKind::rotation, n);
  out.push_back(upper("torus / stft = 2^n" + tag, against(tor, ct), tol));
  out.push_back(upper("torus-freq / stft = 2^n" + tag, against(torf, ct), tol));
  out.push_back(upper("rotation / stft constant" + tag, spread(rot), tol));
  out.push_back(upper("rotation-freq / stft constant" + tag, spread(rotf), tol));
  out.push_back(upper("rotation / stft = 1/pi" + tag, against(rot, cr), tol));
  out.push_back(upper("rotation-freq / stft = 1/pi" + tag, against(rotf, cr), tol));
  return out;
}

std::vector<Check> measure(const SuiteSettings& s) {
  std::vector<Check> out;
  std::vector<double> eps;
  for (int k = 3; k <= 10; ++k) eps.push_back(std::ldexp(1.0, -k));
  const SamplerConfig cfg{s.seed, s.samples ? s.samples : 20000};
  const bool torus = s.mode == "all" || s.mode == "torus";
  const bool rotation = s.mode == "all" || s.mode == "rotation";
  if (!torus && !rotation) throw InvalidArgument("measure mode must be torus, rotation or all");
  if (torus) {
    const auto a = convergence_study(std::vector<double>{1.0, 0.0}, eps, cfg, PsiMode::torus_closed_form);
    const auto b = convergence_study(std::vector<double>{1.0, 1.0, 0.0, 0.0}, eps, cfg, PsiMode::torus_closed_form);
    out.push_back(upper("torus limit 2 (n=1)", std::abs(a.limit / 2.0 - 1.0), 0.01));
    out.push_back(upper("torus limit 4 (n=2)", std::abs(b.limit / 4.0 - 1.0), 0.01));
    const std::vector<std::vector<double>> zs = {{0, 0}, {1, 0}, {0.5, 0.3}, {2, 1}, {0.05, 0}};
    const auto lb = lower_bound_check(zs, {1.0, 0.3, 0.1, 0.01}, cfg, PsiMode::torus_closed_form);
    out.push_back(Check{"torus lower bound worst ratio", lb.worst_ratio, 0.5, lb.passed});
    const auto nc = normalization_check({{1, 0}, {0.2, 0.7}}, 0.1, cfg, PsiMode::torus_closed_form);
    out.push_back(Check{"torus normalization deviation", nc.max_deviation, nc.tolerance, nc.passed});
  }
  if (rotation) {
    const auto c = convergence_study(std::vector<double>{2.0, 0.0}, eps, cfg, PsiMode::quadrature);
    out.push_back(upper("rotation limit 1/pi (n=1)", std::abs(c.limit * kPi - 1.0), 0.02));
    const std::vector<std::vector<double>> zs = {{0, 0}, {1, 0}, {0.5, 0.3}, {2, 1}, {0.05, 0}};
    const auto lb = lower_bound_check(zs, {1.0, 0.3, 0.1, 0.01}, cfg, PsiMode::quadrature);
    out.push_back(Check{"rotation lower bound worst ratio", lb.worst_ratio, 0.5, lb.passed});
    const auto nc = normalization_check({{0, 0}, {1, 0}}, 0.1, cfg, PsiMode::quadrature);
    out.push_back(Check{"rotation normalization deviation", nc.max_deviation, nc.tolerance, nc.passed});
  }
  return out;
}

}  // namespace

std::vector<Check> run_suite(const std::string& suite, const SuiteSettings& s) {
  if (suite == "frft-group") return frft_group(s);
  if (suite == "gaussian-invariance") return gaussian_invariance(s);
  if (suite == "covariance") return covariance(s);
  if (suite == "equivalence") return equivalence(s);
  if (suite == "measure") return measure(s);
  if (suite == "all") {
    std::vector<Check> all;
    for (const char* name : {"frft-group", "gaussian-invariance", "covariance", "equivalence", "measure"}) {
      auto part = run_suite(name, s);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  throw InvalidArgument("unknown suite '" + suite + "'");
}

void print_checks(std::ostream& os, const std::vector<Check>& checks) {
  char buf[64];
  for (const Check& c : checks) {
    std::snprintf(buf, sizeof buf, "measured=%.6g tol=%.3g", c.measured, c.tolerance);
    os << (c.passed ? "PASS " : "FAIL ") << c.name << ' ' << buf << '\n';
  }
}

}  // namespace tfrotor::cli
