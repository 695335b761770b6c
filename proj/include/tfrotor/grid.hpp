#pragma once

// Centered sampling lattices on R^n (n = 1, 2) and complex signals sampled on them.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tfrotor/errors.hpp"

namespace tfrotor {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Centered lattice t_k = (k - N/2) * T/N, k = 0..N-1, on each of n axes.
///
/// The dual (frequency) lattice has spacing 1/T and N points per axis, so
/// time spacing * frequency spacing * N = 1. The lattice is self-dual when
/// T * T == N.
class Grid {
 public:
  Grid(int dim, std::size_t points, double side) : dim_(dim), points_(points), side_(side) {
    if (dim != 1 && dim != 2) {
      throw InvalidArgument("grid dimension must be 1 or 2, got " + std::to_string(dim));
    }
    if (points < 8 || (points & (points - 1)) != 0) {
      throw InvalidArgument("points per axis must be a power of two >= 8, got " +
                            std::to_string(points));
    }
    if (!(side > 0.0) || !std::isfinite(side)) {
      throw InvalidArgument("grid side length must be positive and finite");
    }
  }

  int dim() const { return dim_; }
  std::size_t points() const { return points_; }
  double side() const { return side_; }

  double spacing() const { return side_ / static_cast<double>(points_); }
  double freq_spacing() const { return 1.0 / side_; }

  /// Time coordinate of index k along any axis.
  double coordinate(std::size_t k) const {
    return (static_cast<double>(k) - static_cast<double>(points_ / 2)) * spacing();
  }
  /// Frequency coordinate of index k on the dual lattice.
  double frequency(std::size_t k) const {
    return (static_cast<double>(k) - static_cast<double>(points_ / 2)) * freq_spacing();
  }

  std::size_t total_points() const { return dim_ == 1 ? points_ : points_ * points_; }

  /// Volume of one lattice cell, spacing^n.
  double cell_volume() const { return std::pow(spacing(), dim_); }
  double freq_cell_volume() const { return std::pow(freq_spacing(), dim_); }

  Grid dual() const { return Grid(dim_, points_, static_cast<double>(points_) / side_); }

  bool self_dual() const {
    return std::abs(side_ * side_ - static_cast<double>(points_)) <= 1e-12 * static_cast<double>(points_);
  }

  /// Largest |t| covered by the lattice on one axis.
  double half_width() const { return 0.5 * side_; }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dim_ == b.dim_ && a.points_ == b.points_ && a.side_ == b.side_;
  }

 private:
  int dim_;
  std::size_t points_;
  double side_;
};

inline Grid make_grid(int dim, std::size_t points, double side) { return Grid(dim, points, side); }

/// Complex samples in row-major order (axis 0 varies slowest).
class Signal {
 public:
  Signal(Grid grid, std::vector<cplx> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.total_points()) {
      throw InvalidArgument("signal has " + std::to_string(values_.size()) + " samples, grid needs " +
                            std::to_string(grid_.total_points()));
    }
    for (const cplx& v : values_) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw InvalidArgument("signal contains a non-finite sample");
      }
    }
  }

  const Grid& grid() const { return grid_; }
  std::span<const cplx> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  const cplx& operator[](std::size_t i) const { return values_[i]; }

  std::vector<cplx> take_values() && { return std::move(values_); }

  double l2_norm() const {
    double acc = 0.0;
    for (const cplx& v : values_) acc += std::norm(v);
    return std::sqrt(acc * grid_.cell_volume());
  }

 private:
  Grid grid_;
  std::vector<cplx> values_;
};

inline void require_same_grid(const Signal& a, const Signal& b) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("signals live on different grids");
}

/// <a, b> = sum a conj(b) * cell volume.
inline cplx inner_product(const Signal& a, const Signal& b) {
  require_same_grid(a, b);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * std::conj(b[i]);
  return acc * a.grid().cell_volume();
}

/// min over unit-modulus c of ||a - c b||.
inline double phase_aligned_distance(const Signal& a, const Signal& b) {
  const cplx ip = inner_product(a, b);
  const cplx c = std::abs(ip) > 0.0 ? ip / std::abs(ip) : cplx(1.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - c * b[i]);
  return std::sqrt(acc * a.grid().cell_volume());
}

/// Max pointwise difference of the moduli.
inline double modulus_distance(const Signal& a, const Signal& b) {
  require_same_grid(a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(std::abs(a[i]) - std::abs(b[i])));
  }
  return worst;
}

/// Fraction of the squared L2 mass sitting in the outer 1/16 band of any axis.
inline double edge_fraction(const Signal& s) {
  const Grid& g = s.grid();
  const std::size_t N = g.points();
  const double cut = 0.4375 * g.side();
  double total = 0.0;
  double edge = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double m = std::norm(s[i]);
    total += m;
    bool outer = std::abs(g.coordinate(i % N)) >= cut;
    if (g.dim() == 2) outer = outer || std::abs(g.coordinate(i / N)) >= cut;
    if (outer) edge += m;
  }
  return total > 0.0 ? edge / total : 0.0;
}

namespace detail {

/// Stride and count of the 1-D lines running along `axis` in row-major storage.
struct LineLayout {
  std::size_t count;
  std::size_t stride;
  std::size_t start(std::size_t line, std::size_t N) const {
    return stride == 1 ? line * N : line;
  }
};

inline LineLayout line_layout(const Grid& g, int axis) {
  if (axis < 0 || axis >= g.dim()) {
    throw InvalidArgument("axis " + std::to_string(axis) + " out of range for a " +
                          std::to_string(g.dim()) + "-D grid");
  }
  if (g.dim() == 1) return {1, 1};
  return axis == 0 ? LineLayout{g.points(), g.points()} : LineLayout{g.points(), 1};
}

/// Calls fn(std::span<cplx>) on a contiguous copy of every line along `axis`
/// and writes the result back.
template <class Fn>
void for_each_line(std::vector<cplx>& data, const Grid& g, int axis, Fn&& fn) {
  const LineLayout layout = line_layout(g, axis);
  const std::size_t N = g.points();
  std::vector<cplx> line(N);
  for (std::size_t l = 0; l < layout.count; ++l) {
    const std::size_t s0 = layout.start(l, N);
    for (std::size_t k = 0; k < N; ++k) line[k] = data[s0 + k * layout.stride];
    fn(std::span<cplx>(line));
    for (std::size_t k = 0; k < N; ++k) data[s0 + k * layout.stride] = line[k];
  }
}

}  // namespace detail
}  // namespace tfrotor
