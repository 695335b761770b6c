// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tfrotor/tfrotor.hpp"

using namespace tfrotor;

namespace {

constexpr std::uint64_t kSeed = 2024;

struct Outcome {
  bool passed = true;
  std::vector<std::string> notes;

  void check(bool ok, const char* fmt, double measured, double tol) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, measured, tol);
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + buf);
    passed = passed && ok;
  }
};

Grid default_grid(int n) { return Grid(n, n == 1 ? 256 : 64, 8.0); }

double rel(double value, double target) { return std::abs(value / target - 1.0); }

/// Ratios functional / stft (p = 2) over the corpus, with Monte-Carlo standard errors of the ratios.
struct CorpusTable {
  std::vector<double> torus, torus_freq, rotation, rotation_freq;
  std::vector<double> rotation_se, rotation_freq_se;
};

const CorpusTable& corpus_table(int n) {
  static std::optional<CorpusTable> cache[2];
  auto& slot = cache[n - 1];
  if (slot) return *slot;
  CorpusTable t;
  const SamplerConfig cfg{kSeed, 200};
  for (const SignalDescriptor& d : equivalence_corpus()) {
    const Signal f = make_test_signal(default_grid(n), d);
    const double s = mp_norm_stft(f, 2.0).value;
    t.torus.push_back(torus_functional(f, 2.0, cfg).value / s);
    t.torus_freq.push_back(torus_functional_freq(f, 2.0, cfg).value / s);
    const NormReport r = rotation_functional(f, 2.0, cfg);
    const NormReport rf = rotation_functional_freq(f, 2.0, cfg);
    t.rotation.push_back(r.value / s);
    t.rotation_se.push_back(r.std_error / s);
    t.rotation_freq.push_back(rf.value / s);
    t.rotation_freq_se.push_back(rf.std_error / s);
  }
  slot = t;
  return *slot;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double max_dev_from(const std::vector<double>& v, double target) {
  double d = 0.0;
  for (double x : v) d = std::max(d, rel(x, target));
  return d;
}

Outcome gaussian_baselines() {
  Outcome o;
  const Signal phi = gaussian_window(default_grid(1));
  const auto r = mp_norms_stft(phi, {2.0, 1.0, kInf});
  o.check(rel(r[0].value, 1.0) <= 1e-3, "stft p=2 relative error %.3g (tol %.0e)", rel(r[0].value, 1.0), 1e-3);
  o.check(rel(r[1].value, 2.0) <= 1e-3, "stft p=1 relative error %.3g (tol %.0e)", rel(r[1].value, 2.0), 1e-3);
  o.check(rel(r[2].value, 1.0) <= 1e-3, "stft p=inf relative error %.3g (tol %.0e)", rel(r[2].value, 1.0), 1e-3);
  return o;
}

Outcome torus_constant() {
  Outcome o;
  const double t1 = torus_functional(gaussian_window(default_grid(1)), 2.0).value;
  const double t2 = torus_functional(gaussian_window(default_grid(2)), 2.0).value;
  o.check(rel(t1, 2.0) <= 1e-3, "torus(gaussian) n=1 relative error %.3g (tol %.0e)", rel(t1, 2.0), 1e-3);
  o.check(rel(t2, 4.0) <= 1e-2, "torus(gaussian) n=2 relative error %.3g (tol %.0e)", rel(t2, 4.0), 1e-2);
  const double d1 = max_dev_from(corpus_table(1).torus, 2.0);
  const double d2 = max_dev_from(corpus_table(2).torus, 4.0);
  o.check(d1 <= 0.02, "corpus torus/stft vs 2, n=1: max deviation %.3g (tol %.2g)", d1, 0.02);
  o.check(d2 <= 0.05, "corpus torus/stft vs 4, n=2: max deviation %.3g (tol %.2g)", d2, 0.05);
  return o;
}

Outcome rotation_constant() {
  Outcome o;
  const double r1 = rotation_functional(gaussian_window(default_grid(1)), 2.0).value;
  o.check(rel(r1, 1.0 / kPi) <= 1e-3, "rotation(gaussian) n=1 vs 1/pi: relative error %.3g (tol %.0e)",
          rel(r1, 1.0 / kPi), 1e-3);
  const CorpusTable& a = corpus_table(1);
  const CorpusTable& b = corpus_table(2);
  const double c1 = max_dev_from(a.rotation, mean(a.rotation));
  const double c2 = max_dev_from(b.rotation, mean(b.rotation));
  o.check(c1 <= 0.02, "corpus rotation/stft constancy n=1: max deviation from mean %.3g (tol %.2g)", c1, 0.02);
  o.check(c2 <= 0.05, "corpus rotation/stft constancy n=2 (K=200): max deviation from mean %.3g (tol %.2g)", c2,
          0.05);

  // The samples are shared across the corpus, so the errors are treated as fully correlated.
  const double ratio = mean(b.rotation);
  const double ratio_se = mean(b.rotation_se);
  const ConvergenceStudy fit = fit_limit_constant(2, {kSeed, 2000000}, PsiMode::monte_carlo);
  const double combined = std::sqrt(ratio_se * ratio_se + fit.limit_error * fit.limit_error);
  const double gap = std::abs(ratio - fit.limit);
  char buf[200];
  std::snprintf(buf, sizeof buf, "n=2 corpus ratio %.5f +- %.5f, fitted limit %.5f +- %.5f", ratio, ratio_se, fit.limit,
                fit.limit_error);
  o.notes.push_back(std::string("     ") + buf);
  o.check(gap <= 3.0 * combined, "n=2 ratio vs fitted limit: gap %.3g (tol 3 sigma = %.3g)", gap, 3.0 * combined);
  return o;
}

Outcome frequency_variants() {
  Outcome o;
  const double t1 = max_dev_from(corpus_table(1).torus_freq, 2.0);
  const double t2 = max_dev_from(corpus_table(2).torus_freq, 4.0);
  o.check(t1 <= 0.02, "torus-freq/stft vs 2, n=1: max deviation %.3g (tol %.2g)", t1, 0.02);
  o.check(t2 <= 0.05, "torus-freq/stft vs 4, n=2: max deviation %.3g (tol %.2g)", t2, 0.05);
  const auto& r1 = corpus_table(1).rotation_freq;
  const auto& r2 = corpus_table(2).rotation_freq;
  const double g1 = max_dev_from(r1, 1.0 / kPi);
  const double c2 = max_dev_from(r2, mean(r2));
  o.check(g1 <= 0.02, "rotation-freq/stft vs 1/pi, n=1: max deviation %.3g (tol %.2g)", g1, 0.02);
  o.check(c2 <= 0.05, "rotation-freq/stft constancy n=2: max deviation from mean %.3g (tol %.2g)", c2, 0.05);
  const double cross = rel(mean(r2), mean(corpus_table(2).rotation));
  o.check(cross <= 0.05, "rotation-freq vs rotation mean ratio, n=2: relative gap %.3g (tol %.2g)", cross, 0.05);
  return o;
}

Outcome sup_characterizations() {
  Outcome o;
  for (int n : {1, 2}) {
    const SamplerConfig cfg{kSeed, 500};
    double worst = 0.0;
    for (const SignalDescriptor& d : equivalence_corpus()) {
      const Signal f = make_test_signal(default_grid(n), d);
      const double s = mp_norm_stft(f, kInf).value;
      for (NormMethod m : {NormMethod::sup_rotation, NormMethod::sup_torus, NormMethod::sup_rotation_freq,
                           NormMethod::sup_torus_freq}) {
        worst = std::max(worst, rel(evaluate_norm(m, f, kInf, cfg).value, s));
      }
    }
    char fmt[128];
    std::snprintf(fmt, sizeof fmt, "sup functionals vs stft sup, n=%d: max deviation %%.3g (tol %%.2g)", n);
    o.check(worst <= 0.05, fmt, worst, 0.05);
  }
  return o;
}

Outcome strip_asymptotics() {
  Outcome o;
  std::vector<double> eps;
  for (int k = 3; k <= 10; ++k) eps.push_back(std::ldexp(1.0, -k));
  const SamplerConfig cfg{kSeed, 20000};
  const double t1 = convergence_study(std::vector<double>{1.0, 0.0}, eps, cfg, PsiMode::torus_closed_form).limit;
  const double t2 =
      convergence_study(std::vector<double>{1.0, 1.0, 0.0, 0.0}, eps, cfg, PsiMode::torus_closed_form).limit;
  const double r1 = convergence_study(std::vector<double>{2.0, 0.0}, eps, cfg, PsiMode::quadrature).limit;
  o.check(rel(t1, 2.0) <= 0.02, "torus n=1 limit vs 2: relative error %.3g (tol %.2g)", rel(t1, 2.0), 0.02);
  o.check(rel(t2, 4.0) <= 0.02, "torus n=2 limit vs 4: relative error %.3g (tol %.2g)", rel(t2, 4.0), 0.02);
  o.check(rel(r1, 1.0 / kPi) <= 0.02, "rotation n=1 limit vs 1/pi: relative error %.3g (tol %.2g)",
          rel(r1, 1.0 / kPi), 0.02);

  const std::vector<std::vector<double>> z1 = {{1, 0}, {0.2, 0.7}};
  const std::vector<std::vector<double>> z2 = {{1, 0, 0, 0}, {0.5, 0.3, -0.4, 0.2}};
  for (const auto& [label, rep] : std::vector<std::pair<std::string, NormalizationReport>>{
           {"quadrature n=1", normalization_check(z1, 0.1, cfg, PsiMode::quadrature)},
           {"monte-carlo n=2", normalization_check(z2, 0.5, cfg, PsiMode::monte_carlo)},
           {"torus n=1", normalization_check(z1, 0.1, cfg, PsiMode::torus_closed_form)},
           {"torus n=2", normalization_check(z2, 0.1, cfg, PsiMode::torus_closed_form)}}) {
    const std::string fmt = "normalization " + label + ": max deviation %.3g (tol %.3g)";
    o.check(rep.passed, fmt.c_str(), rep.max_deviation, rep.tolerance);
  }

  const std::vector<std::vector<double>> p1 = {{0, 0}, {1, 0}, {0.5, 0.3}, {2, 1}, {0.05, 0}, {-3, 2}};
  const std::vector<std::vector<double>> p2 = {{0, 0, 0, 0}, {1, 1, 0, 0}, {0.5, 0.3, 0.2, 0.1}, {2, 1, -1, 0.5}};
  for (const auto& [label, rep] : std::vector<std::pair<std::string, LowerBoundReport>>{
           {"quadrature n=1", lower_bound_check(p1, {1.0, 0.3, 0.1, 0.01}, cfg, PsiMode::quadrature)},
           {"torus n=1", lower_bound_check(p1, {1.0, 0.3, 0.1, 0.01}, cfg, PsiMode::torus_closed_form)},
           {"torus n=2", lower_bound_check(p2, {1.0, 0.3, 0.1, 0.01}, cfg, PsiMode::torus_closed_form)}}) {
    const std::string fmt = "lower bound " + label + ": worst ratio %.4g (threshold %.2g)";
    o.check(rep.worst_ratio > 0.5, fmt.c_str(), rep.worst_ratio, 0.5);
  }
  return o;
}

double worst_covariance(std::size_t N) {
  const Grid g(1, N, 8.0);
  const Signal phi = gaussian_window(g);
  double worst = 0.0;
  for (const char* name : {"hermite(1)", "chirped-gaussian(0.5)", "translated-gaussian(1)"}) {
    const Signal f = make_test_signal(g, name);
    for (const UnitaryMatrix& u : sample_haar_unitary(1, {kSeed, 20})) {
      worst = std::max(worst, covariance_residual(u, f, phi));
    }
  }
  return worst;
}

Outcome covariance() {
  Outcome o;
  const double a = worst_covariance(256);
  const double b = worst_covariance(512);
  o.check(a <= 1e-2, "max residual at N=256: %.3g (tol %.0e)", a, 1e-2);
  o.check(b / a <= 0.6, "residual ratio N=512 / N=256: %.3g (tol %.2g)", b / a, 0.6);
  return o;
}

Outcome metaplectic_structure() {
  Outcome o;
  const Grid g1 = default_grid(1);
  double group = 0.0, norm = 0.0;
  for (int k = 0; k <= 2; ++k) {
    const Signal h = make_test_signal(g1, SignalDescriptor{SignalKind::hermite, {double(k)}});
    for (int i = 0; i < 10; ++i) {
      const double a = -kPi + 2 * kPi * (i + 0.5) / 10;
      for (int j = 0; j < 10; ++j) {
        group = std::max(group, frft_compose_check(a, -kPi + 2 * kPi * (j + 0.5) / 10, h));
      }
      norm = std::max(norm, std::abs(frft(h, 0, a).l2_norm() - 1.0));
    }
  }
  o.check(group <= 1e-5, "frft group law: max residual %.3g (tol %.0e)", group, 1e-5);

  double invariance = 0.0, consistency = 0.0, factor = 0.0;
  for (int n : {1, 2}) {
    const Grid g = default_grid(n);
    const Signal phi = gaussian_window(g);
    const Signal f = make_test_signal(g, n == 1 ? "chirped-gaussian(0.5)" : "translated-gaussian(1,0.5)");
    for (const UnitaryMatrix& u : sample_haar_unitary(n, {kSeed, 20})) {
      const Signal o1 = apply_unitary(u, phi);
      invariance = std::max(invariance, modulus_distance(o1, phi));
      norm = std::max(norm, std::abs(o1.l2_norm() - 1.0));
      const Signal o2 = apply_unitary(u, f);
      norm = std::max(norm, std::abs(o2.l2_norm() - 1.0));
      for (double shift : {0.7, -1.9}) {
        consistency = std::max(consistency, phase_aligned_distance(apply_unitary_shifted(u, shift, f), o2));
      }
      if (n == 2) factor = std::max(factor, (factor_unitary(u).reconstruct() - u.matrix()).cwiseAbs().maxCoeff());
    }
    const TorusElement t(std::vector<double>(static_cast<std::size_t>(n), 0.9));
    norm = std::max(norm, std::abs(apply_torus(t, f).l2_norm() - 1.0));
    norm = std::max(norm, std::abs(apply_quadratic_fourier(generating_function_of(torus_to_rotation(t)), f).l2_norm() -
                                   1.0));
  }
  o.check(invariance <= 1e-5, "gaussian invariance over 20 Haar samples (n=1,2): %.3g (tol %.0e)", invariance, 1e-5);
  o.check(std::max(consistency, factor) <= 1e-5, "apply_unitary factorization self-consistency: %.3g (tol %.0e)",
          std::max(consistency, factor), 1e-5);
  o.check(norm <= 1e-5, "norm preservation of all operators: %.3g (tol %.0e)", norm, 1e-5);
  return o;
}

Outcome haar_sanity() {
  Outcome o;
  const std::size_t K = 10000;
  std::vector<double> u;
  for (const UnitaryMatrix& m : sample_haar_unitary(1, {kSeed, K})) {
    const double a = std::arg(m(0, 0)) / (2 * kPi);
    u.push_back(a < 0 ? a + 1 : a);
  }
  std::sort(u.begin(), u.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    ks = std::max({ks, (i + 1.0) / K - u[i], u[i] - static_cast<double>(i) / K});
  }
  o.check(ks <= 1.628 / std::sqrt(double(K)), "KS statistic of U(1) angles: %.4g (1%% critical %.4g)", ks,
          1.628 / std::sqrt(double(K)));

  double m = 0.0;
  const auto two = sample_haar_unitary(2, {kSeed, 100000});
  for (const UnitaryMatrix& v : two) m += std::norm(v(0, 0));
  m /= static_cast<double>(two.size());
  o.check(std::abs(m - 0.5) <= 0.01, "E|u11|^2 over 1e5 samples: |mean - 1/2| = %.3g (tol %.2g)", std::abs(m - 0.5),
          0.01);

  const auto again = sample_haar_unitary(2, {kSeed, 100});
  double diff = 0.0;
  for (std::size_t k = 0; k < again.size(); ++k) {
    diff = std::max(diff, (again[k].matrix() - two[k].matrix()).cwiseAbs().maxCoeff());
  }
  o.check(diff == 0.0, "reproducibility per seed: max difference %.3g (tol %.0e)", diff, 0.0);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"gaussian STFT baselines", gaussian_baselines},
      {"torus characterization constant", torus_constant},
      {"rotation characterization constant", rotation_constant},
      {"frequency-slice variants", frequency_variants},
      {"p = inf characterizations", sup_characterizations},
      {"strip-average asymptotics", strip_asymptotics},
      {"STFT covariance", covariance},
      {"metaplectic structure", metaplectic_structure},
      {"Haar sampling sanity", haar_sanity},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.passed = false;
      o.notes.push_back(std::string("FAIL exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& note : o.notes) std::printf("    %s\n", note.c_str());
    std::printf("%s criterion %zu: %s (%.1f s)\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs);
    std::fflush(stdout);
    failed += !o.passed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
