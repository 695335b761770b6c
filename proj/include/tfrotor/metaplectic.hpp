#pragma once

// Metaplectic operators acting on sampled signals: quadratic Fourier
// transforms of free symplectic matrices, torus elements (per-axis FrFTs),
// and general elements of U(n) for n = 1, 2.
//
// Conventions: the operator attached to a symplectic matrix S satisfies
// |V_{S g}(S f)(z)| = |V_g f(S^{-1} z)|. With iota(e^{i theta}) the
// counter-clockwise rotation of the (x, xi) plane, this makes the operator of
// e^{i theta} the FrFT of angle -theta, so U = -i gives the Fourier transform.

#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "tfrotor/detail/fft.hpp"
#include "tfrotor/detail/parallel.hpp"
#include "tfrotor/symplectic.hpp"
#include "tfrotor/transforms.hpp"

namespace tfrotor {

inline constexpr double kTailTolerance = 1e-8;
inline constexpr double kDirectKernelThreshold = 1e-4;

namespace detail {

inline void require_tails(const Signal& s, const char* which) {
  const double edge = edge_fraction(s);
  if (edge > kTailTolerance) {
    std::ostringstream os;
    os << which << " carries " << edge << " of its mass in the outer band of the grid";
    throw TailViolation(os.str());
  }
}

}  // namespace detail

/// Quadratic Fourier transform
/// (S_{W,m} psi)(x) = i^{-n/2} i^m sqrt|det L| * sum_{x'} e^{2 pi i W(x, x')} psi(x') * cell volume.
inline Signal apply_quadratic_fourier(const GeneratingFunction& w, const Signal& s) {
  w.validate();
  const Grid& g = s.grid();
  const int n = g.dim();
  if (w.dim() != n) throw InvalidArgument("generating function dimension does not match the signal");
  detail::require_tails(s, "input");

  const std::size_t N = g.points();
  const cplx amp = std::polar(std::sqrt(std::abs(w.L.determinant())) * g.cell_volume(),
                              0.5 * kPi * w.m - 0.25 * kPi * n);
  std::vector<double> x(N);
  for (std::size_t k = 0; k < N; ++k) x[k] = g.coordinate(k);
  std::vector<cplx> out(g.total_points());

  if (n == 1) {
    const double P = w.P(0, 0), Q = w.Q(0, 0), L = w.L(0, 0);
    std::vector<cplx> chirped(N);
    for (std::size_t j = 0; j < N; ++j) chirped[j] = s[j] * std::polar(1.0, kPi * Q * x[j] * x[j]);
    for (std::size_t i = 0; i < N; ++i) {
      cplx acc = 0.0;
      for (std::size_t j = 0; j < N; ++j) acc += chirped[j] * std::polar(1.0, -2.0 * kPi * L * x[i] * x[j]);
      out[i] = amp * std::polar(1.0, kPi * P * x[i] * x[i]) * acc;
    }
  } else {
    std::vector<cplx> chirped(N * N);
    for (std::size_t j1 = 0; j1 < N; ++j1) {
      for (std::size_t j2 = 0; j2 < N; ++j2) {
        const Eigen::Vector2d xp(x[j1], x[j2]);
        chirped[j1 * N + j2] = s[j1 * N + j2] * std::polar(1.0, kPi * xp.dot(w.Q * xp));
      }
    }
    const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> S(
        chirped.data(), static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    auto rows = detail::parallel_map<std::vector<cplx>>(N, [&](std::size_t i1) {
      std::vector<cplx> row(N);
      Eigen::VectorXcd e1(N), e2(N);
      for (std::size_t i2 = 0; i2 < N; ++i2) {
        const Eigen::Vector2d xo(x[i1], x[i2]);
        const Eigen::Vector2d u = w.L * xo;
        for (std::size_t j = 0; j < N; ++j) {
          e1(j) = std::polar(1.0, -2.0 * kPi * u(0) * x[j]);
          e2(j) = std::polar(1.0, -2.0 * kPi * u(1) * x[j]);
        }
        const cplx acc = e1.transpose() * (S * e2);
        row[i2] = amp * std::polar(1.0, kPi * xo.dot(w.P * xo)) * acc;
      }
      return row;
    });
    for (std::size_t i1 = 0; i1 < N; ++i1) std::copy(rows[i1].begin(), rows[i1].end(), out.begin() + i1 * N);
  }
  Signal result(g, std::move(out));
  detail::require_tails(result, "output");
  return result;
}

/// Operator of the torus element diag(e^{i theta_1}, ..., e^{i theta_n}): the
/// FrFT of angle -theta_i along axis i (axes act independently).
inline Signal apply_torus(const TorusElement& t, const Signal& s) {
  if (t.dim() != s.grid().dim()) throw InvalidArgument("torus dimension does not match the signal");
  Signal out = s;
  for (int axis = 0; axis < t.dim(); ++axis) out = frft(out, axis, -t[static_cast<std::size_t>(axis)]);
  return out;
}

/// psi(x) -> psi(R(beta)^T x) on a 2-D grid, R(beta) the counter-clockwise
/// rotation. Quarter turns are exact index permutations; the remainder
/// (|r| <= pi/4) is three band-limited shears.
inline Signal rotate_coordinates(const Signal& s, double beta) {
  const Grid& g = s.grid();
  if (g.dim() != 2) throw InvalidArgument("coordinate rotation needs a 2-D signal");
  const std::size_t N = g.points();
  const double h = g.spacing();
  const double quarter = 0.5 * kPi;
  const double q = std::nearbyint(beta / quarter);
  const double r = beta - q * quarter;
  std::vector<cplx> data(s.values().begin(), s.values().end());

  if (r != 0.0) {
    const double a = -std::tan(0.5 * r);
    const double b = std::sin(r);
    std::vector<cplx> line(N);
    auto shear_axis0 = [&](double coef) {
      for (std::size_t k2 = 0; k2 < N; ++k2) {
        for (std::size_t k1 = 0; k1 < N; ++k1) line[k1] = data[k1 * N + k2];
        detail::fractional_shift(line, coef * g.coordinate(k2) / h);
        for (std::size_t k1 = 0; k1 < N; ++k1) data[k1 * N + k2] = line[k1];
      }
    };
    auto shear_axis1 = [&](double coef) {
      for (std::size_t k1 = 0; k1 < N; ++k1) {
        detail::fractional_shift(std::span<cplx>(data.data() + k1 * N, N), coef * g.coordinate(k1) / h);
      }
    };
    shear_axis0(a);
    shear_axis1(b);
    shear_axis0(a);
  }

  const int turns = static_cast<int>(((static_cast<long long>(q) % 4) + 4) % 4);
  for (int t = 0; t < turns; ++t) {
    std::vector<cplx> rotated(N * N);
    for (std::size_t k1 = 0; k1 < N; ++k1) {
      for (std::size_t k2 = 0; k2 < N; ++k2) rotated[k1 * N + k2] = data[k2 * N + (N - k1) % N];
    }
    data = std::move(rotated);
  }
  return Signal(g, std::move(data));
}

/// U = diag(e^{i alpha}) R(beta) diag(e^{i gamma}) with R(beta) a real rotation, beta in [0, pi/2].
struct UnitaryFactorization {
  std::array<double, 2> alpha{};
  double beta = 0.0;
  std::array<double, 2> gamma{};

  CMatrix reconstruct() const {
    CMatrix d1 = CMatrix::Zero(2, 2), d2 = CMatrix::Zero(2, 2), r(2, 2);
    d1(0, 0) = std::polar(1.0, alpha[0]);
    d1(1, 1) = std::polar(1.0, alpha[1]);
    d2(0, 0) = std::polar(1.0, gamma[0]);
    d2(1, 1) = std::polar(1.0, gamma[1]);
    r << std::cos(beta), -std::sin(beta), std::sin(beta), std::cos(beta);
    return d1 * r * d2;
  }
};

inline UnitaryFactorization factor_unitary(const UnitaryMatrix& u) {
  if (u.dim() != 2) throw InvalidArgument("factor_unitary expects a 2 x 2 unitary");
  constexpr double tiny = 1e-14;
  const double c = std::abs(u(0, 0));
  const double s = std::abs(u(1, 0));
  UnitaryFactorization f;
  if (s <= tiny) {
    f.gamma = {std::arg(u(0, 0)), 0.0};
    f.alpha = {0.0, std::arg(u(1, 1))};
  } else if (c <= tiny) {
    f.beta = 0.5 * kPi;
    f.gamma = {0.0, std::arg(-u(0, 1))};
    f.alpha = {0.0, std::arg(u(1, 0))};
  } else {
    f.beta = std::atan2(s, c);
    f.gamma = {std::arg(u(0, 0)), std::arg(-u(0, 1))};
    f.alpha = {0.0, std::arg(u(1, 0)) - f.gamma[0]};
  }
  const double err = (f.reconstruct() - u.matrix()).cwiseAbs().maxCoeff();
  if (err > 1e-12) {
    std::ostringstream os;
    os << "unitary factorization residual " << err;
    throw FactorizationFailed(os.str());
  }
  return f;
}

/// Metaplectic operator of iota(U), defined up to a global unit phase.
/// n = 1: FrFT of angle -arg U. n = 2: torus(alpha) . rotation(beta) . torus(gamma).
inline Signal apply_unitary(const UnitaryMatrix& u, const Signal& s) {
  const int n = s.grid().dim();
  if (u.dim() != n) throw InvalidArgument("unitary dimension does not match the signal");
  if (n == 1) return frft(s, 0, -std::arg(u(0, 0)));
  const UnitaryFactorization f = factor_unitary(u);
  Signal out = apply_torus(TorusElement({f.gamma[0], f.gamma[1]}), s);
  out = rotate_coordinates(out, f.beta);
  return apply_torus(TorusElement({f.alpha[0], f.alpha[1]}), out);
}

/// Same operator, routed through U = (U diag(e^{-i shift})) diag(e^{i shift}).
inline Signal apply_unitary_shifted(const UnitaryMatrix& u, double shift, const Signal& s) {
  const int n = u.dim();
  const std::vector<double> angles(static_cast<std::size_t>(n), shift);
  const UnitaryMatrix rest = u * UnitaryMatrix::diagonal(std::vector<double>(angles.size(), -shift));
  return apply_unitary(rest, apply_torus(TorusElement(angles), s));
}

/// Torus shift used by apply_unitary_direct (nullopt: U itself is applied).
struct DirectRoute {
  std::optional<double> shift;
  GeneratingFunction w;
  double det_b = 0.0;
};

inline constexpr std::array<double, 8> kShiftCandidates = {
    kPi / 2, kPi / 3, kPi / 5, kPi / 7, 2 * kPi / 3, 3 * kPi / 4, kPi / 4, kPi / 6};

/// Picks the best-conditioned free matrix among iota(U) and iota(U diag(e^{-i shift})).
inline DirectRoute plan_unitary_direct(const UnitaryMatrix& u) {
  auto smallest_singular = [](const UnitaryMatrix& v) {
    const RMatrix b = v.matrix().imag();
    return Eigen::JacobiSVD<RMatrix>(b).singularValues().minCoeff();
  };
  std::optional<double> best_shift;
  double best = smallest_singular(u);
  for (double shift : kShiftCandidates) {
    const UnitaryMatrix v = u * UnitaryMatrix::diagonal(std::vector<double>(static_cast<std::size_t>(u.dim()), -shift));
    const double sv = smallest_singular(v);
    if (sv > best + 1e-12) {
      best = sv;
      best_shift = shift;
    }
  }
  const UnitaryMatrix chosen =
      best_shift ? u * UnitaryMatrix::diagonal(std::vector<double>(static_cast<std::size_t>(u.dim()), -*best_shift))
                 : u;
  const double det_b = chosen.matrix().imag().determinant();
  if (!(std::abs(det_b) > kDirectKernelThreshold)) {
    throw FactorizationFailed("no torus shift makes the symplectic matrix free");
  }
  return DirectRoute{best_shift, generating_function_of(iota(chosen)), det_b};
}

/// Metaplectic operator of iota(U) evaluated as a quadratic Fourier transform,
/// preceded by a torus element when iota(U) itself is badly conditioned.
inline Signal apply_unitary_direct(const UnitaryMatrix& u, const Signal& s) {
  if (u.dim() != s.grid().dim()) throw InvalidArgument("unitary dimension does not match the signal");
  const DirectRoute route = plan_unitary_direct(u);
  if (!route.shift) return apply_quadratic_fourier(route.w, s);
  const std::vector<double> angles(static_cast<std::size_t>(u.dim()), *route.shift);
  return apply_quadratic_fourier(route.w, apply_torus(TorusElement(angles), s));
}

}  // namespace tfrotor
