#pragma once

// Modulation-space norms: the classical STFT integral and the functionals
// obtained by averaging Gaussian-window slices over symplectic rotations or
// over the torus.

#include <cmath>
#include <cstdint>
#include <algorithm>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "tfrotor/detail/parallel.hpp"
#include "tfrotor/metaplectic.hpp"
#include "tfrotor/sampling.hpp"
#include "tfrotor/stft.hpp"

namespace tfrotor {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class NormMethod {
  stft,
  rotation,
  rotation_freq,
  torus,
  torus_freq,
  sup_rotation,
  sup_torus,
  sup_rotation_freq,
  sup_torus_freq,
};

inline std::string method_name(NormMethod m) {
  switch (m) {
    case NormMethod::stft: return "stft";
    case NormMethod::rotation: return "rotation";
    case NormMethod::rotation_freq: return "rotation-freq";
    case NormMethod::torus: return "torus";
    case NormMethod::torus_freq: return "torus-freq";
    case NormMethod::sup_rotation: return "sup-rotation";
    case NormMethod::sup_torus: return "sup-torus";
    case NormMethod::sup_rotation_freq: return "sup-rotation-freq";
    case NormMethod::sup_torus_freq: return "sup-torus-freq";
  }
  return "?";
}

inline NormMethod parse_method(const std::string& name) {
  for (NormMethod m : {NormMethod::stft, NormMethod::rotation, NormMethod::rotation_freq, NormMethod::torus,
                       NormMethod::torus_freq, NormMethod::sup_rotation, NormMethod::sup_torus,
                       NormMethod::sup_rotation_freq, NormMethod::sup_torus_freq}) {
    if (method_name(m) == name) return m;
  }
  throw InvalidArgument("unknown norm method '" + name + "'");
}

inline bool is_sup_method(NormMethod m) {
  return m == NormMethod::sup_rotation || m == NormMethod::sup_torus || m == NormMethod::sup_rotation_freq ||
         m == NormMethod::sup_torus_freq;
}

struct NormReport {
  std::string method;
  double p = 2.0;
  /// p-th power of the functional, or the supremum for p = inf.
  double value = 0.0;
  /// Monte-Carlo standard error; zero for deterministic quadrature.
  double std_error = 0.0;
  Grid grid{1, 256, 8.0};
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  /// Share of the (weighted) integrand coming from the outer band of the lattice.
  double tail_fraction = 0.0;

  double root_value() const { return std::isinf(p) ? value : std::pow(value, 1.0 / p); }
};

inline void validate_exponent(double p) {
  if (std::isnan(p) || p < 1.0) throw InvalidArgument("exponent p must lie in [1, inf]");
}

namespace detail {

inline double power(double m, double p) { return p == 2.0 ? m * m : (p == 1.0 ? m : std::pow(m, p)); }

inline bool in_outer_band(double coord, double side) { return std::abs(coord) >= 0.4375 * side; }

}  // namespace detail

/// p-th powers of the STFT norm (Gaussian window) for several exponents at once.
/// Infinite entries of `ps` yield the maximum modulus.
inline std::vector<NormReport> mp_norms_stft(const Signal& f, const std::vector<double>& ps) {
  for (double p : ps) validate_exponent(p);
  const Grid& g = f.grid();
  const Signal phi = gaussian_window(g);
  const std::size_t rows = g.total_points();
  const std::size_t N = g.points();
  const std::size_t np = ps.size();
  std::vector<std::vector<double>> row_sums(np, std::vector<double>(rows, 0.0));
  std::vector<double> row_max(rows, 0.0);
  std::vector<char> row_outer(rows, 0);
  for_each_stft_row(f, phi, [&](std::size_t m, std::span<const cplx> row) {
    const double x1 = g.coordinate(g.dim() == 1 ? m : m / N);
    bool outer = detail::in_outer_band(x1, g.side());
    if (g.dim() == 2) outer = outer || detail::in_outer_band(g.coordinate(m % N), g.side());
    row_outer[m] = outer;
    for (std::size_t i = 0; i < np; ++i) {
      if (std::isinf(ps[i])) continue;
      double acc = 0.0;
      for (const cplx& v : row) acc += detail::power(std::abs(v), ps[i]);
      row_sums[i][m] = acc;
    }
    double mx = 0.0;
    for (const cplx& v : row) mx = std::max(mx, std::abs(v));
    row_max[m] = mx;
  });

  const double cell = g.cell_volume() * g.freq_cell_volume();
  std::vector<NormReport> out;
  for (std::size_t i = 0; i < np; ++i) {
    NormReport r;
    r.method = "stft";
    r.p = ps[i];
    r.grid = g;
    r.samples = rows;
    if (std::isinf(ps[i])) {
      r.value = *std::max_element(row_max.begin(), row_max.end());
    } else {
      const double total = detail::pairwise_sum(row_sums[i]);
      std::vector<double> edge(rows);
      for (std::size_t m = 0; m < rows; ++m) edge[m] = row_outer[m] ? row_sums[i][m] : 0.0;
      r.value = total * cell;
      r.tail_fraction = total > 0.0 ? detail::pairwise_sum(edge) / total : 0.0;
    }
    out.push_back(r);
  }
  return out;
}

inline NormReport mp_norm_stft(const Signal& f, double p) { return mp_norms_stft(f, {p}).front(); }

enum class GroupKind { rotation, torus };
enum class SliceKind { time, freq };

inline constexpr std::size_t kCircleQuadrature = 64;
inline constexpr std::size_t kTorusQuadrature2d = 32;
inline constexpr std::size_t kConditioningPoints = 8;

/// Per group element sums of the weighted slice integrand for a set of
/// exponents, plus the slice maxima. Computing these once lets several
/// exponents share the metaplectic work.
struct OrbitSums {
  Grid grid{1, 256, 8.0};
  GroupKind group = GroupKind::rotation;
  SliceKind slice = SliceKind::time;
  bool monte_carlo = false;
  std::uint64_t seed = 0;
  std::vector<double> exponents;
  std::vector<double> element_weights;
  /// sums[i][k]: sum over the lattice of weight * |slice|^{p_i} for element k.
  std::vector<std::vector<double>> sums;
  std::vector<std::vector<double>> edge_sums;
  std::vector<double> maxima;
};

namespace detail {

/// Lattice weight (|x|^n for rotations, |x_1 ... x_n| for the torus) times the
/// cell volume, with an Euler-Maclaurin correction at the origin for the
/// non-smooth weights |x| and |x_1 x_2|: the kink costs -h^2 F(0) / 6 per axis
/// in a plain Riemann sum, restored by giving the origin the weight h^2 / 6.
struct LatticeWeights {
  std::vector<double> weight;
  std::vector<char> outer;
};

inline LatticeWeights lattice_weights(const Grid& g, GroupKind group, SliceKind slice) {
  const int n = g.dim();
  const std::size_t N = g.points();
  const bool time = slice == SliceKind::time;
  const double h = time ? g.spacing() : g.freq_spacing();
  const double side = h * static_cast<double>(N);
  auto coord = [&](std::size_t k) { return (static_cast<double>(k) - static_cast<double>(N / 2)) * h; };
  auto axis_weight = [&](std::size_t k) { return k == N / 2 ? h * h / 6.0 : h * std::abs(coord(k)); };
  LatticeWeights lw;
  lw.weight.resize(g.total_points());
  lw.outer.resize(g.total_points());
  for (std::size_t i = 0; i < g.total_points(); ++i) {
    if (n == 1) {
      lw.weight[i] = axis_weight(i);
      lw.outer[i] = in_outer_band(coord(i), side);
      continue;
    }
    const std::size_t k1 = i / N, k2 = i % N;
    if (group == GroupKind::rotation) {
      const double r2 = coord(k1) * coord(k1) + coord(k2) * coord(k2);
      lw.weight[i] = r2 * h * h;
    } else {
      lw.weight[i] = axis_weight(k1) * axis_weight(k2);
    }
    lw.outer[i] = in_outer_band(coord(k1), side) || in_outer_band(coord(k2), side);
  }
  return lw;
}

struct ElementSums {
  std::vector<double> sums;
  std::vector<double> edge;
  double maximum = 0.0;
};

inline void accumulate(ElementSums& acc, const LatticeWeights& lw, const std::vector<double>& ps,
                       const double* moduli, double scale) {
  const std::size_t M = lw.weight.size();
  std::vector<double> terms(M), edge(M);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = 0; j < M; ++j) {
      terms[j] = lw.weight[j] * power(moduli[j], ps[i]);
      edge[j] = lw.outer[j] ? terms[j] : 0.0;
    }
    acc.sums[i] += scale * pairwise_sum(terms);
    acc.edge[i] += scale * pairwise_sum(edge);
  }
  for (std::size_t j = 0; j < M; ++j) acc.maximum = std::max(acc.maximum, moduli[j]);
}

/// Right-torus average for a 2-D signal h = S^{-1} f: the integrand of
/// S D is averaged over a uniform 8 x 8 grid of torus elements D. This is the
/// conditional expectation of the Haar integrand given the coset S T^2.
inline ElementSums conditioned_sums(const Signal& h, SliceKind slice, const LatticeWeights& lw,
                                    const std::vector<double>& ps,
                                    const std::vector<Eigen::MatrixXcd>& axis_ops) {
  using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Grid& g = h.grid();
  const std::size_t N = g.points();
  const Eigen::Map<const RowMat> H(h.values().data(), static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  ElementSums acc{std::vector<double>(ps.size(), 0.0), std::vector<double>(ps.size(), 0.0), 0.0};
  const double scale = 1.0 / static_cast<double>(axis_ops.size() * axis_ops.size());
  std::vector<double> moduli(N * N);
  std::vector<cplx> block(N * N);
  const Signal window = gaussian_window(g);
  for (const auto& A1 : axis_ops) {
    const Eigen::MatrixXcd left = A1 * H;
    for (const auto& A2 : axis_ops) {
      RowMat r = left * A2.transpose();
      if (slice == SliceKind::time) {
        for (std::size_t i = 0; i < N * N; ++i) moduli[i] = std::abs(r.data()[i]);
      } else {
        for (std::size_t i = 0; i < N * N; ++i) block[i] = r.data()[i] * window[i];
        centered_dft_block(block, N, 2, g.spacing());
        for (std::size_t i = 0; i < N * N; ++i) moduli[i] = std::abs(block[i]);
      }
      accumulate(acc, lw, ps, moduli.data(), scale);
    }
  }
  return acc;
}

}  // namespace detail

/// Evaluates the slice integrands of the group functional over its
/// quadrature (n = 1 circle, n = 2 torus grid) or Monte-Carlo sample (n = 2
/// rotations). `conditioning` enables the right-torus average for n = 2
/// rotations; sup functionals use plain samples.
inline OrbitSums orbit_sums(const Signal& f, GroupKind group, SliceKind slice, const SamplerConfig& cfg,
                            std::vector<double> exponents, bool conditioning = true) {
  cfg.validate();
  for (double p : exponents) {
    validate_exponent(p);
    if (std::isinf(p)) throw InvalidArgument("integral functionals need a finite p; use the sup methods");
  }
  const Grid& g = f.grid();
  const int n = g.dim();
  OrbitSums out;
  out.grid = g;
  out.group = group;
  out.slice = slice;
  out.seed = cfg.seed;
  out.exponents = exponents;

  // Each element is the operator S^{-1} applied to f.
  std::vector<std::function<Signal()>> elements;
  if (group == GroupKind::rotation && n == 1) {
    for (std::size_t j = 0; j < kCircleQuadrature; ++j) {
      const double theta = 2.0 * kPi * static_cast<double>(j) / kCircleQuadrature;
      elements.emplace_back([&f, theta] { return apply_unitary(UnitaryMatrix::diagonal({-theta}), f); });
      out.element_weights.push_back(1.0 / kCircleQuadrature);
    }
  } else if (group == GroupKind::rotation) {
    out.monte_carlo = true;
    for (std::size_t k = 0; k < cfg.count; ++k) {
      elements.emplace_back([&f, &cfg, k] { return apply_unitary(haar_unitary(2, cfg.seed, k).inverse(), f); });
      out.element_weights.push_back(1.0 / static_cast<double>(cfg.count));
    }
  } else if (n == 1) {
    for (std::size_t j = 0; j < kCircleQuadrature; ++j) {
      const double theta = 2.0 * kPi * static_cast<double>(j) / kCircleQuadrature;
      elements.emplace_back([&f, theta] { return apply_torus(TorusElement({-theta}), f); });
      out.element_weights.push_back(2.0 * kPi / kCircleQuadrature);
    }
  } else {
    const double step = 2.0 * kPi / kTorusQuadrature2d;
    for (std::size_t a = 0; a < kTorusQuadrature2d; ++a) {
      for (std::size_t b = 0; b < kTorusQuadrature2d; ++b) {
        const double t1 = step * static_cast<double>(a);
        const double t2 = step * static_cast<double>(b);
        elements.emplace_back([&f, t1, t2] { return apply_torus(TorusElement({-t1, -t2}), f); });
        out.element_weights.push_back(step * step);
      }
    }
  }

  const detail::LatticeWeights lw = detail::lattice_weights(g, group, slice);
  const GaussianSlicer slicer(g);
  const bool conditioned = conditioning && out.monte_carlo;
  std::vector<Eigen::MatrixXcd> axis_ops;
  if (conditioned) {
    const Grid line(1, g.points(), g.side());
    for (std::size_t j = 0; j < kConditioningPoints; ++j) {
      const double theta = 2.0 * kPi * static_cast<double>(j) / kConditioningPoints;
      Eigen::MatrixXcd K = frft_kernel(line, theta).entries;
      axis_ops.push_back(slice == SliceKind::time ? Eigen::MatrixXcd(slicer.toeplitz().cast<cplx>() * K) : K);
    }
  }

  auto results = detail::parallel_map<detail::ElementSums>(elements.size(), [&](std::size_t i) {
    const Signal h = elements[i]();
    if (conditioned) return detail::conditioned_sums(h, slice, lw, exponents, axis_ops);
    const std::vector<double> mod = slice == SliceKind::time ? slicer.time_slice(h) : slicer.freq_slice(h);
    detail::ElementSums acc{std::vector<double>(exponents.size(), 0.0), std::vector<double>(exponents.size(), 0.0), 0.0};
    detail::accumulate(acc, lw, exponents, mod.data(), 1.0);
    return acc;
  });

  out.sums.assign(exponents.size(), std::vector<double>(elements.size()));
  out.edge_sums.assign(exponents.size(), std::vector<double>(elements.size()));
  out.maxima.resize(elements.size());
  for (std::size_t k = 0; k < elements.size(); ++k) {
    for (std::size_t i = 0; i < exponents.size(); ++i) {
      out.sums[i][k] = results[k].sums[i];
      out.edge_sums[i][k] = results[k].edge[i];
    }
    out.maxima[k] = results[k].maximum;
  }
  return out;
}

inline std::string functional_name(GroupKind group, SliceKind slice, bool sup) {
  std::string name = group == GroupKind::rotation ? "rotation" : "torus";
  if (slice == SliceKind::freq) name += "-freq";
  return sup ? "sup-" + name : name;
}

/// p-th power of the functional for an exponent contained in `orbit.exponents`.
inline NormReport integrate_orbit(const OrbitSums& orbit, double p) {
  const auto it = std::find(orbit.exponents.begin(), orbit.exponents.end(), p);
  if (it == orbit.exponents.end()) throw InvalidArgument("exponent was not evaluated for this orbit");
  const std::size_t i = static_cast<std::size_t>(it - orbit.exponents.begin());
  const std::size_t K = orbit.element_weights.size();
  NormReport r;
  r.method = functional_name(orbit.group, orbit.slice, false);
  r.p = p;
  r.grid = orbit.grid;
  r.seed = orbit.seed;
  r.samples = K;
  std::vector<double> weighted(K), weighted_edge(K);
  for (std::size_t k = 0; k < K; ++k) {
    weighted[k] = orbit.element_weights[k] * orbit.sums[i][k];
    weighted_edge[k] = orbit.element_weights[k] * orbit.edge_sums[i][k];
  }
  r.value = detail::pairwise_sum(weighted);
  r.tail_fraction = r.value > 0.0 ? detail::pairwise_sum(weighted_edge) / r.value : 0.0;
  if (orbit.monte_carlo && K > 1) {
    std::vector<double> dev(K);
    for (std::size_t k = 0; k < K; ++k) dev[k] = (orbit.sums[i][k] - r.value) * (orbit.sums[i][k] - r.value);
    r.std_error = std::sqrt(detail::pairwise_sum(dev) / static_cast<double>(K - 1) / static_cast<double>(K));
  }
  return r;
}

/// Supremum over the group elements and lattice points of the slice modulus.
inline NormReport sup_orbit(const OrbitSums& orbit) {
  NormReport r;
  r.method = functional_name(orbit.group, orbit.slice, true);
  r.p = kInf;
  r.grid = orbit.grid;
  r.seed = orbit.seed;
  r.samples = orbit.maxima.size();
  for (double v : orbit.maxima) r.value = std::max(r.value, v);
  return r;
}

inline SamplerConfig default_sampler(std::uint64_t seed = 0, std::size_t count = 200) { return {seed, count}; }

inline NormReport rotation_functional(const Signal& f, double p, const SamplerConfig& cfg = default_sampler()) {
  return integrate_orbit(orbit_sums(f, GroupKind::rotation, SliceKind::time, cfg, {p}), p);
}

inline NormReport rotation_functional_freq(const Signal& f, double p, const SamplerConfig& cfg = default_sampler()) {
  return integrate_orbit(orbit_sums(f, GroupKind::rotation, SliceKind::freq, cfg, {p}), p);
}

inline NormReport torus_functional(const Signal& f, double p, const SamplerConfig& cfg = default_sampler()) {
  return integrate_orbit(orbit_sums(f, GroupKind::torus, SliceKind::time, cfg, {p}), p);
}

inline NormReport torus_functional_freq(const Signal& f, double p, const SamplerConfig& cfg = default_sampler()) {
  return integrate_orbit(orbit_sums(f, GroupKind::torus, SliceKind::freq, cfg, {p}), p);
}

inline NormReport sup_rotation(const Signal& f, const SamplerConfig& cfg = default_sampler(0, 500),
                               SliceKind slice = SliceKind::time) {
  return sup_orbit(orbit_sums(f, GroupKind::rotation, slice, cfg, {}, false));
}

inline NormReport sup_torus(const Signal& f, const SamplerConfig& cfg = default_sampler(),
                            SliceKind slice = SliceKind::time) {
  return sup_orbit(orbit_sums(f, GroupKind::torus, slice, cfg, {}, false));
}

/// Dispatch by method; sup methods ignore p.
inline NormReport evaluate_norm(NormMethod method, const Signal& f, double p, const SamplerConfig& cfg) {
  validate_exponent(p);
  if (!is_sup_method(method) && method != NormMethod::stft && std::isinf(p)) {
    throw InvalidArgument("method " + method_name(method) + " needs a finite p; use the sup methods for p = inf");
  }
  switch (method) {
    case NormMethod::stft: return mp_norm_stft(f, p);
    case NormMethod::rotation: return rotation_functional(f, p, cfg);
    case NormMethod::rotation_freq: return rotation_functional_freq(f, p, cfg);
    case NormMethod::torus: return torus_functional(f, p, cfg);
    case NormMethod::torus_freq: return torus_functional_freq(f, p, cfg);
    case NormMethod::sup_rotation: return sup_rotation(f, cfg);
    case NormMethod::sup_torus: return sup_torus(f, cfg);
    case NormMethod::sup_rotation_freq: return sup_rotation(f, cfg, SliceKind::freq);
    case NormMethod::sup_torus_freq: return sup_torus(f, cfg, SliceKind::freq);
  }
  throw InvalidArgument("unknown norm method");
}

/// Known ratio functional / stft-norm (p-th powers) for the Gaussian window.
inline double equivalence_constant(GroupKind group, int n) {
  return group == GroupKind::torus ? std::pow(2.0, n) : 1.0 / kPi;
}

}  // namespace tfrotor
