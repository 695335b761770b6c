#pragma once

// Centered DFT and fractional Fourier transforms along one axis of a Signal.

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <tuple>

#include "tfrotor/detail/fft.hpp"
#include "tfrotor/grid.hpp"
#include "tfrotor/signals.hpp"

namespace tfrotor {

namespace detail {

inline void check_axis(const Grid& g, int axis) { (void)line_layout(g, axis); }

/// Applies fn to the N x L matrix whose columns are the lines along `axis`.
template <class Fn>
std::vector<cplx> map_lines(std::span<const cplx> values, const Grid& g, int axis, Fn&& fn) {
  const LineLayout layout = line_layout(g, axis);
  const std::size_t N = g.points();
  Eigen::MatrixXcd lines(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(layout.count));
  for (std::size_t l = 0; l < layout.count; ++l) {
    const std::size_t s0 = layout.start(l, N);
    for (std::size_t k = 0; k < N; ++k) lines(k, l) = values[s0 + k * layout.stride];
  }
  fn(lines);
  std::vector<cplx> out(values.size());
  for (std::size_t l = 0; l < layout.count; ++l) {
    const std::size_t s0 = layout.start(l, N);
    for (std::size_t k = 0; k < N; ++k) out[s0 + k * layout.stride] = lines(k, l);
  }
  return out;
}

inline void centered_fft_line(std::span<cplx> line, bool inverse, double scale) {
  // The (-1)^j factors move the origin to index N/2; N divisible by 4 makes
  // the leftover constant phase e^{-2 pi i (N/2)^2 / N} equal to one.
  for (std::size_t j = 1; j < line.size(); j += 2) line[j] = -line[j];
  if (inverse) {
    ifft(line);
  } else {
    fft(line);
  }
  for (std::size_t k = 0; k < line.size(); ++k) line[k] *= (k % 2 ? -scale : scale);
}

inline Signal centered_transform(const Signal& s, int axis, bool inverse) {
  const Grid& g = s.grid();
  check_axis(g, axis);
  if (g.dim() == 2 && !g.self_dual()) {
    throw InvalidArgument("a partial DFT of a 2-D signal needs a self-dual grid (T*T == N)");
  }
  std::vector<cplx> data(s.values().begin(), s.values().end());
  const double scale = g.spacing();
  for_each_line(data, g, axis, [&](std::span<cplx> line) { centered_fft_line(line, inverse, scale); });
  return Signal(g.dual(), std::move(data));
}

}  // namespace detail

/// Unitary centered DFT along `axis`:
/// out[k] = spacing * sum_j f[j] e^{-2 pi i t_j nu_k}, indexed by the dual grid.
inline Signal dft_centered(const Signal& s, int axis = 0) {
  return detail::centered_transform(s, axis, false);
}

/// Inverse of dft_centered; the input grid is read as a frequency lattice.
inline Signal idft_centered(const Signal& s, int axis = 0) {
  return detail::centered_transform(s, axis, true);
}

/// t -> -t along `axis` (index k -> N - k mod N).
inline Signal reflect(const Signal& s, int axis = 0) {
  const Grid& g = s.grid();
  const std::size_t N = g.points();
  auto out = detail::map_lines(s.values(), g, axis, [N](Eigen::MatrixXcd& m) {
    Eigen::MatrixXcd r(m.rows(), m.cols());
    for (std::size_t k = 0; k < N; ++k) r.row(k) = m.row((N - k) % N);
    m = r;
  });
  return Signal(g, std::move(out));
}

/// Phase constant of the FrFT kernel, chosen so that angle pi/2 is exactly F
/// and the family is 2 pi periodic with F_a F_b = F_{a+b}.
inline cplx frft_phase(double theta) {
  const double sgn = std::sin(theta) >= 0.0 ? 1.0 : -1.0;
  return std::polar(1.0, -(0.25 * kPi * sgn - 0.5 * theta));
}

/// Riemann-sum sampling of the FrFT integral kernel on a centered lattice:
/// c(theta) |sin theta|^{-1/2} e^{i pi (cot theta x^2 - 2 x x' / sin theta + cot theta x'^2)} * spacing.
/// Accurate only when |sin theta| is not small compared with spacing * T.
inline Eigen::MatrixXcd frft_direct_kernel(std::size_t N, double spacing, double theta) {
  const double s = std::sin(theta);
  if (std::abs(s) < 1e-12) throw InvalidArgument("FrFT kernel undefined for sin(theta) = 0");
  const double cot = std::cos(theta) / s;
  const cplx amp = frft_phase(theta) * spacing / std::sqrt(std::abs(s));
  Eigen::MatrixXcd K(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  std::vector<double> x(N);
  for (std::size_t k = 0; k < N; ++k) {
    x[k] = (static_cast<double>(k) - static_cast<double>(N / 2)) * spacing;
  }
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      const double ph = kPi * (cot * x[i] * x[i] - 2.0 * x[i] * x[j] / s + cot * x[j] * x[j]);
      K(i, j) = amp * std::polar(1.0, ph);
    }
  }
  return K;
}

namespace detail {

class KernelCache {
 public:
  static KernelCache& instance() {
    static KernelCache cache;
    return cache;
  }

  std::shared_ptr<const Eigen::MatrixXcd> get(std::size_t N, double spacing, double theta) {
    const Key key{N, std::bit_cast<std::uint64_t>(spacing), std::bit_cast<std::uint64_t>(theta)};
    {
      std::shared_lock lock(mutex_);
      auto it = entries_.find(key);
      if (it != entries_.end()) return it->second;
    }
    auto kernel = std::make_shared<const Eigen::MatrixXcd>(frft_direct_kernel(N, spacing, theta));
    std::unique_lock lock(mutex_);
    if (entries_.size() >= kMaxEntries) entries_.clear();
    return entries_.emplace(key, std::move(kernel)).first->second;
  }

 private:
  using Key = std::tuple<std::size_t, std::uint64_t, std::uint64_t>;
  static constexpr std::size_t kMaxEntries = 256;
  std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<const Eigen::MatrixXcd>> entries_;
};

/// Splits theta into a quarter-turn count q and an angle a with |sin a| >= sin(3 pi / 8),
/// such that F_theta = F_{q pi/2} F_a F_a. When theta sits on a multiple of
/// pi/2 only the quarter turns are used (a = 0, twice = false).
struct FrftPlan {
  int quarter_turns = 0;
  bool halves = false;
  double half_angle = 0.0;
};

inline FrftPlan plan_frft(double theta) {
  constexpr double kSnap = 1e-12;
  const double quarter = 0.5 * kPi;
  const double nearest = std::nearbyint(theta / quarter);
  FrftPlan plan;
  if (std::abs(theta - nearest * quarter) <= kSnap * std::max(1.0, std::abs(theta))) {
    plan.quarter_turns = static_cast<int>(((static_cast<long long>(nearest) % 4) + 4) % 4);
    return plan;
  }
  double r = std::fmod(theta - 0.75 * kPi, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  int j = static_cast<int>(std::floor(r / quarter));
  j = std::clamp(j, 0, 3);
  plan.quarter_turns = j;
  plan.halves = true;
  plan.half_angle = 0.5 * (0.75 * kPi + (r - j * quarter));
  return plan;
}

inline void apply_frft_lines(Eigen::MatrixXcd& lines, std::size_t N, double spacing, double theta) {
  const FrftPlan plan = plan_frft(theta);
  auto& cache = KernelCache::instance();
  if (plan.halves) {
    auto K = cache.get(N, spacing, plan.half_angle);
    Eigen::MatrixXcd tmp = (*K) * lines;
    lines.noalias() = (*K) * tmp;
  }
  switch (plan.quarter_turns) {
    case 1:
    case 3: {
      auto K = cache.get(N, spacing, plan.quarter_turns == 1 ? 0.5 * kPi : -0.5 * kPi);
      Eigen::MatrixXcd tmp = (*K) * lines;
      lines = std::move(tmp);
      break;
    }
    case 2: {
      Eigen::MatrixXcd r(lines.rows(), lines.cols());
      for (std::size_t k = 0; k < N; ++k) r.row(k) = lines.row((N - k) % N);
      lines = std::move(r);
      break;
    }
    default: break;
  }
}

}  // namespace detail

/// Fractional Fourier transform of angle theta along `axis`.
/// frft(s, a, pi/2) is the Fourier transform sampled on the same lattice
/// (equal to dft_centered on a self-dual grid); frft(s, a, pi) reflects the axis.
inline Signal frft(const Signal& s, int axis, double theta) {
  if (!std::isfinite(theta)) throw InvalidArgument("FrFT angle must be finite");
  const Grid& g = s.grid();
  detail::check_axis(g, axis);
  const std::size_t N = g.points();
  const double spacing = g.spacing();
  auto out = detail::map_lines(s.values(), g, axis, [&](Eigen::MatrixXcd& m) {
    detail::apply_frft_lines(m, N, spacing, theta);
  });
  return Signal(g, std::move(out));
}

/// Dense matrix of the 1-D FrFT operator actually applied by frft() on a grid.
struct FrftKernel {
  double theta;
  Grid grid;
  Eigen::MatrixXcd entries;

  /// max |<K h_j, K h_k> - <h_j, h_k>| over the Hermite functions h_0..h_max_order.
  double hermite_unitarity_defect(int max_order = 10) const {
    const std::size_t N = grid.points();
    Eigen::MatrixXcd H(static_cast<Eigen::Index>(N), max_order + 1);
    for (int k = 0; k <= max_order; ++k) {
      for (std::size_t j = 0; j < N; ++j) H(j, k) = hermite_function(k, grid.coordinate(j));
    }
    const Eigen::MatrixXcd KH = entries * H;
    const Eigen::MatrixXcd gram_out = KH.adjoint() * KH * grid.spacing();
    const Eigen::MatrixXcd gram_in = H.adjoint() * H * grid.spacing();
    return (gram_out - gram_in).cwiseAbs().maxCoeff();
  }
};

inline FrftKernel frft_kernel(const Grid& grid, double theta) {
  if (grid.dim() != 1) throw InvalidArgument("frft_kernel is defined on 1-D grids");
  const std::size_t N = grid.points();
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  detail::apply_frft_lines(M, N, grid.spacing(), theta);
  return FrftKernel{theta, grid, std::move(M)};
}

/// Phase-minimized distance between F_{theta2} F_{theta1} s and F_{theta1 + theta2} s.
inline double frft_compose_check(double theta1, double theta2, const Signal& s) {
  if (s.grid().dim() != 1) throw InvalidArgument("frft_compose_check expects a 1-D signal");
  const Signal two_step = frft(frft(s, 0, theta1), 0, theta2);
  const Signal one_step = frft(s, 0, theta1 + theta2);
  return phase_aligned_distance(two_step, one_step);
}

}  // namespace tfrotor
