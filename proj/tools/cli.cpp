#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "suites.hpp"
#include "tfrotor/report.hpp"
#include "tfrotor/tfrotor.hpp"

namespace tfrotor::cli {
namespace {

using nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  int n = 1;
  std::size_t N = 0;
  double T = 8.0;
  std::string p = "2";
  std::string method = "stft";
  std::string signal = "gaussian";
  std::string input;
  std::string theta;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double eps_from = 0.0;
  double eps_to = 0.0;
  int eps_steps = 0;
  std::string config;
  std::string out;
  bool compare = false;
  std::string suite = "all";
  std::string mode;
  std::string z;
};

std::vector<double> parse_list(const std::string& flag, const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), [](unsigned char c) { return std::isspace(c); }), tok.end());
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size() || !std::isfinite(v)) {
      throw UsageError(flag + ": invalid value '" + tok + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw UsageError(flag + ": expected a comma-separated list of numbers");
  return values;
}

double parse_exponent(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return kInf;
  const auto v = parse_list("--p", text);
  if (v.size() != 1) throw UsageError("--p: expected a single exponent");
  return v[0];
}

Grid make_grid_from(const Options& o) {
  return Grid(o.n, o.N ? o.N : (o.n == 1 ? 256 : 64), o.T);
}

Signal source_signal(const Options& o) {
  if (!o.input.empty()) {
    Signal s = load_signal(o.input);
    if (s.grid().dim() != o.n) throw InvalidArgument("--input: file holds a " + std::to_string(s.grid().dim()) +
                                                     "-D signal but --n is " + std::to_string(o.n));
    return s;
  }
  return make_test_signal(make_grid_from(o), o.signal);
}

/// Writes `body` to --out when given and returns true, otherwise returns false.
bool write_out(const Options& o, const std::string& body) {
  if (o.out.empty()) return false;
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + o.out + "' for writing");
  f << body;
  if (!f) throw std::runtime_error("write to '" + o.out + "' failed");
  return true;
}

ordered_json grid_json(const Grid& g) {
  ordered_json j;
  j["n"] = g.dim();
  j["N"] = g.points();
  j["T"] = g.side();
  return j;
}

int cmd_frft(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.theta.empty()) throw UsageError("--theta: required");
  const std::vector<double> theta = parse_list("--theta", o.theta);
  if (theta.size() != 1 && theta.size() != static_cast<std::size_t>(o.n)) {
    throw UsageError("--theta: expected 1 or " + std::to_string(o.n) + " angles");
  }
  const Signal in = source_signal(o);
  Signal s = in;
  std::vector<double> angles;
  for (int axis = 0; axis < o.n; ++axis) {
    angles.push_back(theta.size() == 1 ? theta[0] : theta[static_cast<std::size_t>(axis)]);
    s = frft(s, axis, angles.back());
  }
  std::ostringstream csv;
  write_signal(csv, s);

  ordered_json diag = grid_json(s.grid());
  diag["theta"] = angles;
  diag["input_norm"] = in.l2_norm();
  diag["output_norm"] = s.l2_norm();
  diag["norm_defect"] = std::abs(s.l2_norm() - in.l2_norm());
  if (write_out(o, csv.str())) {
    out << diag.dump(2) << '\n';
  } else {
    out << csv.str();
    err << diag.dump(2) << '\n';
  }
  return 0;
}

int cmd_mpnorm(const Options& o, std::ostream& out) {
  const NormMethod method = parse_method(o.method);
  const double p = parse_exponent(o.p);
  const Signal f = source_signal(o);
  const std::size_t samples = o.samples ? o.samples : (is_sup_method(method) ? 500 : 200);
  const SamplerConfig cfg{o.seed, samples};
  const NormReport r = evaluate_norm(method, f, is_sup_method(method) ? kInf : p, cfg);

  ordered_json j;
  if (o.compare && method != NormMethod::stft) {
    const NormReport s = mp_norm_stft(f, r.p);
    j["report"] = to_json(r);
    j["stft"] = to_json(s);
    j["ratio"] = r.value / s.value;
    if (is_sup_method(method)) {
      j["expected_ratio"] = 1.0;
    } else if (method == NormMethod::torus || method == NormMethod::torus_freq) {
      j["expected_ratio"] = equivalence_constant(GroupKind::torus, f.grid().dim());
    } else {
      j["expected_ratio"] = equivalence_constant(GroupKind::rotation, f.grid().dim());
    }
  } else {
    j = to_json(r);
  }
  const std::string body = j.dump(2) + "\n";
  if (write_out(o, body)) return 0;
  out << body;
  return 0;
}

int cmd_verify(const Options& o, std::ostream& out, const std::vector<std::string>& given) {
  SuiteSettings s;
  // --n narrows the suites to one dimension only when given explicitly.
  const bool has_n = std::any_of(given.begin(), given.end(), [](const std::string& a) {
    return a == "--n" || a.rfind("--n=", 0) == 0;
  });
  s.n = has_n ? o.n : 0;
  s.N = o.N;
  s.T = o.T;
  s.p = parse_exponent(o.p);
  s.seed = o.seed;
  s.samples = o.samples;
  s.mode = o.mode.empty() ? "all" : o.mode;
  const auto checks = run_suite(o.suite, s);
  std::ostringstream text;
  print_checks(text, checks);
  const std::size_t failed = static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; }));
  text << (failed ? "FAILED " : "OK ") << checks.size() - failed << "/" << checks.size() << " checks passed\n";
  if (!write_out(o, text.str())) out << text.str();
  return failed ? 1 : 0;
}

int cmd_lemma(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.z.empty()) throw UsageError("--z: required");
  const std::vector<double> z = parse_list("--z", o.z);
  if (z.size() != 2 && z.size() != 4) throw UsageError("--z: expected 2 or 4 coordinates");
  const int n = static_cast<int>(z.size() / 2);
  const std::string mode_text = o.mode.empty() ? "torus" : o.mode;
  PsiMode mode = mode_text == "rotation" ? (n == 1 ? PsiMode::quadrature : PsiMode::monte_carlo)
                                         : parse_mode(mode_text);

  double from = o.eps_from, to = o.eps_to;
  int steps = o.eps_steps;
  if (from == 0.0) from = mode == PsiMode::monte_carlo ? 1.0 : 0.125;
  if (to == 0.0) to = mode == PsiMode::monte_carlo ? 0.25 : std::ldexp(1.0, -10);
  if (steps == 0) steps = mode == PsiMode::monte_carlo ? 3 : 8;
  if (!(from > 0.0) || !(to > 0.0) || !(to < from)) throw UsageError("--eps-from/--eps-to: need 0 < eps-to < eps-from");
  if (steps < 2) throw UsageError("--eps-steps: need at least 2 steps");
  std::vector<double> eps;
  for (int k = 0; k < steps; ++k) eps.push_back(from * std::pow(to / from, static_cast<double>(k) / (steps - 1)));

  const SamplerConfig cfg{o.seed, o.samples ? o.samples : 200000};
  const ConvergenceStudy study = convergence_study(z, eps, cfg, mode);
  std::ostringstream csv;
  write_convergence_csv(csv, {study});

  ordered_json summary;
  summary["mode"] = mode_name(mode);
  summary["n"] = n;
  summary["z"] = z;
  summary["eps"] = eps;
  summary["seed"] = o.seed;
  summary["samples"] = mode == PsiMode::monte_carlo ? cfg.count : 0;
  summary["fitted_C1"] = study.limit;
  summary["stderr"] = study.limit_error;
  if (mode == PsiMode::torus_closed_form) {
    summary["reference"] = std::pow(2.0, n);
  } else if (n == 1) {
    summary["reference"] = 1.0 / kPi;
  } else {
    summary["reference"] = nullptr;
  }
  if (write_out(o, csv.str())) {
    out << summary.dump(2) << '\n';
  } else {
    out << csv.str();
    err << summary.dump(2) << '\n';
  }
  return 0;
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

std::string config_value(const std::string& key, const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number()) return detail::format_double(v.get<double>());
  if (v.is_array()) {
    std::string joined;
    for (const auto& item : v) {
      if (!item.is_number()) throw UsageError("--config: '" + key + "' must be a list of numbers");
      joined += (joined.empty() ? "" : ",") + detail::format_double(item.get<double>());
    }
    return joined;
  }
  throw UsageError("--config: unsupported value for '" + key + "'");
}

/// Appends the entries of the --config file that the command line does not set.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream f(path);
  if (!f) throw UsageError("--config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("--config: " + std::string(e.what()));
  }
  if (!j.is_object()) throw UsageError("--config: expected a JSON object");
  std::vector<std::string> merged = args;
  for (const auto& [key, value] : j.items()) {
    const std::string flag = "--" + key;
    if (key == "config" || given_on_command_line(args, flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) merged.push_back(flag);
      continue;
    }
    merged.push_back(flag);
    merged.push_back(config_value(key, value));
  }
  return merged;
}

void add_grid_options(CLI::App* c, Options& o) {
  c->add_option("--n", o.n, "phase-space half dimension (1 or 2)");
  c->add_option("--N", o.N, "points per axis (default 256 for n=1, 64 for n=2)");
  c->add_option("--T", o.T, "side length of the time window");
  c->add_option("--seed", o.seed, "sampler seed");
  c->add_option("--samples", o.samples, "number of group samples");
  c->add_option("--config", o.config, "JSON file of defaults; command-line flags win");
  c->add_option("--out", o.out, "output file");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Modulation-space norms via symplectic rotations and the torus", "tfrotor"};
  app.require_subcommand(1);

  CLI::App* frft_cmd = app.add_subcommand("frft", "partial fractional Fourier transform of a signal");
  add_grid_options(frft_cmd, o);
  frft_cmd->add_option("--signal", o.signal, "test signal descriptor");
  frft_cmd->add_option("--input", o.input, "signal CSV to transform");
  frft_cmd->add_option("--theta", o.theta, "angle per axis, comma separated");

  CLI::App* norm_cmd = app.add_subcommand("mpnorm", "modulation-space norm of a signal");
  add_grid_options(norm_cmd, o);
  norm_cmd->add_option("--signal", o.signal, "test signal descriptor");
  norm_cmd->add_option("--input", o.input, "signal CSV");
  norm_cmd->add_option("--p", o.p, "exponent in [1, inf]");
  norm_cmd->add_option("--method", o.method, "stft, rotation, rotation-freq, torus, torus-freq, sup-rotation, ...");
  norm_cmd->add_flag("--compare", o.compare, "also evaluate the STFT norm and print the ratio");

  CLI::App* verify_cmd = app.add_subcommand("verify", "run a property suite");
  add_grid_options(verify_cmd, o);
  verify_cmd->add_option("--suite", o.suite, "covariance, gaussian-invariance, frft-group, equivalence, measure, all");
  verify_cmd->add_option("--p", o.p, "exponent for the equivalence suite");
  verify_cmd->add_option("--mode", o.mode, "measure suite: torus, rotation or all");

  CLI::App* lemma_cmd = app.add_subcommand("lemma", "small-eps sweep of the averaged strip indicator");
  add_grid_options(lemma_cmd, o);
  lemma_cmd->add_option("--z", o.z, "phase-space point, comma separated");
  lemma_cmd->add_option("--mode", o.mode, "torus, rotation, quadrature or monte-carlo");
  lemma_cmd->add_option("--eps-from", o.eps_from, "largest width");
  lemma_cmd->add_option("--eps-to", o.eps_to, "smallest width");
  lemma_cmd->add_option("--eps-steps", o.eps_steps, "number of geometric steps");

  try {
    std::vector<std::string> merged = merge_config(args);
    std::reverse(merged.begin(), merged.end());
    app.parse(merged);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (frft_cmd->parsed()) return cmd_frft(o, out, err);
    if (norm_cmd->parsed()) return cmd_mpnorm(o, out);
    if (verify_cmd->parsed()) return cmd_verify(o, out, args);
    if (lemma_cmd->parsed()) return cmd_lemma(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const SupportViolation& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace tfrotor::cli
