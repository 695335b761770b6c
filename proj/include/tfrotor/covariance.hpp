#pragma once

// Numerical check of the covariance |V_{S g}(S f)(z)| = |V_g f(S^{-1} z)| for
// metaplectic operators of symplectic rotations.

#include <cmath>
#include <vector>

#include "tfrotor/metaplectic.hpp"
#include "tfrotor/stft.hpp"

namespace tfrotor {

/// V_g f(x, xi) at an arbitrary phase-space point; g is translated by band-limited interpolation.
inline cplx stft_point(const Signal& f, const Signal& g, std::span<const double> x, std::span<const double> xi) {
  require_same_grid(f, g);
  const Grid& grid = f.grid();
  const int n = grid.dim();
  const std::size_t N = grid.points();
  std::vector<cplx> shifted(g.values().begin(), g.values().end());
  for (int axis = 0; axis < n; ++axis) {
    const double s = x[static_cast<std::size_t>(axis)] / grid.spacing();
    detail::for_each_line(shifted, grid, axis, [s](std::span<cplx> line) { detail::fractional_shift(line, s); });
  }
  cplx acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double phase = 0.0;
    if (n == 1) {
      phase = grid.coordinate(i) * xi[0];
    } else {
      phase = grid.coordinate(i / N) * xi[0] + grid.coordinate(i % N) * xi[1];
    }
    acc += f[i] * std::conj(shifted[i]) * std::polar(1.0, -2.0 * kPi * phase);
  }
  return acc * grid.cell_volume();
}

struct CovarianceOptions {
  /// Phase-space radius of the n = 1 check region.
  double radius = 3.5;
  /// Coordinates of the n = 2 check lattice (each of x1, x2, xi1, xi2).
  std::vector<double> coarse = {-1.0, 0.0, 1.0};
};

/// Max over a check lattice of | |V_{Sg}(S f)(z)| - |V_g f(S^{-1} z)| |, S the
/// metaplectic operator of iota(U). For n = 1 the right side is bilinear
/// interpolation of |V_g f| on a lattice refined in frequency to the time
/// spacing; for n = 2 both sides are evaluated pointwise on a coarse lattice.
inline double covariance_residual(const UnitaryMatrix& u, const Signal& f, const Signal& g,
                                  const CovarianceOptions& opt = {}) {
  require_same_grid(f, g);
  const Grid& grid = f.grid();
  if (u.dim() != grid.dim()) throw InvalidArgument("unitary dimension does not match the signals");
  const Signal sf = apply_unitary(u, f);
  const Signal sg = apply_unitary(u, g);
  const RMatrix S = iota(u).matrix();
  const RMatrix Sinv = S.transpose();

  if (grid.dim() == 1) {
    const std::size_t N = grid.points();
    const double ratio = static_cast<double>(N) / (grid.side() * grid.side());
    std::size_t pad = 1;
    while (static_cast<double>(pad) < ratio) pad *= 2;
    const StftMap before = stft(f, g, pad);
    const StftMap after = stft(sf, sg, pad);
    const std::size_t F = before.frequencies();
    const double hx = grid.spacing();
    const double hxi = before.freq_spacing();
    const double x0 = grid.coordinate(0);
    const double xi0 = -static_cast<double>(F / 2) * hxi;
    auto modulus_at = [&](double x, double xi) {
      const double fx = (x - x0) / hx;
      const double fy = (xi - xi0) / hxi;
      const double ix = std::floor(fx), iy = std::floor(fy);
      const double ax = fx - ix, ay = fy - iy;
      auto m = [&](double a, double b) {
        if (a < 0 || b < 0 || a >= static_cast<double>(N) || b >= static_cast<double>(F)) return 0.0;
        return std::abs(before.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b)));
      };
      double v = (1 - ax) * (1 - ay) * m(ix, iy);
      if (ax > 0) v += ax * (1 - ay) * m(ix + 1, iy);
      if (ay > 0) v += (1 - ax) * ay * m(ix, iy + 1);
      if (ax > 0 && ay > 0) v += ax * ay * m(ix + 1, iy + 1);
      return v;
    };
    double worst = 0.0;
    for (std::size_t m = 0; m < N; ++m) {
      const double x = grid.coordinate(m);
      for (std::size_t k = 0; k < F; ++k) {
        const double xi = xi0 + static_cast<double>(k) * hxi;
        if (x * x + xi * xi > opt.radius * opt.radius) continue;
        const double wx = Sinv(0, 0) * x + Sinv(0, 1) * xi;
        const double wxi = Sinv(1, 0) * x + Sinv(1, 1) * xi;
        worst = std::max(worst, std::abs(std::abs(after.at(m, k)) - modulus_at(wx, wxi)));
      }
    }
    return worst;
  }

  double worst = 0.0;
  const auto& c = opt.coarse;
  for (double x1 : c) {
    for (double x2 : c) {
      for (double k1 : c) {
        for (double k2 : c) {
          Eigen::Vector4d z(x1, x2, k1, k2);
          const Eigen::Vector4d w = Sinv * z;
          const double lhs = std::abs(stft_point(sf, sg, std::vector<double>{x1, x2}, std::vector<double>{k1, k2}));
          const double rhs =
              std::abs(stft_point(f, g, std::vector<double>{w(0), w(1)}, std::vector<double>{w(2), w(3)}));
          worst = std::max(worst, std::abs(lhs - rhs));
        }
      }
    }
  }
  return worst;
}

}  // namespace tfrotor
