#pragma once

// Short-time Fourier transform V_g f(x, xi) = <f, M_xi T_x g> on the product
// of the time lattice (shifts) and the dual lattice (frequencies).

#include <cmath>
#include <span>
#include <vector>

#include "tfrotor/detail/fft.hpp"
#include "tfrotor/detail/parallel.hpp"
#include "tfrotor/grid.hpp"
#include "tfrotor/signals.hpp"
#include "tfrotor/transforms.hpp"

namespace tfrotor {

namespace detail {

/// out[k] = scale * sum_j in[j] e^{-2 pi i (j - N/2)(k - M/2)/M}, the input
/// centered inside a zero-padded buffer of length M = N * pad.
inline std::vector<cplx> centered_dft_padded(std::span<const cplx> in, std::size_t pad, double scale) {
  const std::size_t N = in.size();
  const std::size_t M = N * pad;
  std::vector<cplx> buf(M, cplx(0.0));
  const std::size_t offset = (M - N) / 2;
  for (std::size_t j = 0; j < N; ++j) buf[offset + j] = in[j];
  centered_fft_line(buf, false, scale);
  return buf;
}

/// Centered DFT along every axis of an N^dim block (no grid bookkeeping).
inline void centered_dft_block(std::vector<cplx>& data, std::size_t N, int dim, double scale) {
  if (dim == 1) {
    centered_fft_line(data, false, scale);
    return;
  }
  std::vector<cplx> line(N);
  for (std::size_t k1 = 0; k1 < N; ++k1) centered_fft_line(std::span<cplx>(data.data() + k1 * N, N), false, scale);
  for (std::size_t k2 = 0; k2 < N; ++k2) {
    for (std::size_t k1 = 0; k1 < N; ++k1) line[k1] = data[k1 * N + k2];
    centered_fft_line(line, false, scale);
    for (std::size_t k1 = 0; k1 < N; ++k1) data[k1 * N + k2] = line[k1];
  }
}

}  // namespace detail

/// Calls fn(shift_index, row) for every lattice shift x_m, where row holds
/// V_g f(x_m, xi_k) over the dual lattice (N^n values, zero-padded by `pad`
/// along the frequency axis when n = 1). Rows for distinct shifts are
/// computed in parallel; fn is called in index order from the calling thread
/// per block of rows.
template <class Fn>
void for_each_stft_row(const Signal& f, const Signal& g, Fn&& fn, std::size_t pad = 1) {
  require_same_grid(f, g);
  const Grid& grid = f.grid();
  const std::size_t N = grid.points();
  const int n = grid.dim();
  if (pad < 1 || (pad & (pad - 1)) != 0) throw InvalidArgument("padding factor must be a power of two");
  if (n == 2 && pad != 1) throw InvalidArgument("frequency padding is available for 1-D signals only");
  const double scale = grid.spacing();
  const long half = static_cast<long>(N / 2);

  auto row_of = [&](std::size_t m) {
    std::vector<cplx> h(grid.total_points());
    if (n == 1) {
      const long shift = static_cast<long>(m) - half;
      for (std::size_t j = 0; j < N; ++j) {
        const long idx = static_cast<long>(j) - shift;
        h[j] = (idx >= 0 && idx < static_cast<long>(N)) ? f[j] * std::conj(g[static_cast<std::size_t>(idx)]) : 0.0;
      }
      if (pad > 1) return detail::centered_dft_padded(h, pad, scale);
      detail::centered_fft_line(h, false, scale);
      return h;
    }
    const long s1 = static_cast<long>(m / N) - half;
    const long s2 = static_cast<long>(m % N) - half;
    for (std::size_t j1 = 0; j1 < N; ++j1) {
      const long i1 = static_cast<long>(j1) - s1;
      for (std::size_t j2 = 0; j2 < N; ++j2) {
        const long i2 = static_cast<long>(j2) - s2;
        const bool inside = i1 >= 0 && i1 < static_cast<long>(N) && i2 >= 0 && i2 < static_cast<long>(N);
        h[j1 * N + j2] = inside ? f[j1 * N + j2] * std::conj(g[static_cast<std::size_t>(i1) * N + static_cast<std::size_t>(i2)])
                                : cplx(0.0);
      }
    }
    detail::centered_dft_block(h, N, 2, scale);
    return h;
  };

  const std::size_t shifts = grid.total_points();
  constexpr std::size_t kBlock = 256;
  for (std::size_t start = 0; start < shifts; start += kBlock) {
    const std::size_t count = std::min(kBlock, shifts - start);
    auto rows = detail::parallel_map<std::vector<cplx>>(count, [&](std::size_t i) { return row_of(start + i); });
    for (std::size_t i = 0; i < count; ++i) fn(start + i, std::span<const cplx>(rows[i]));
  }
}

/// Dense STFT on the full lattice. Row-major: shift index (time) outer,
/// frequency index inner.
struct StftMap {
  Grid grid;
  std::size_t pad = 1;
  std::vector<cplx> values;

  std::size_t shifts() const { return grid.total_points(); }
  std::size_t frequencies() const { return grid.total_points() * pad; }
  const cplx& at(std::size_t shift, std::size_t freq) const { return values[shift * frequencies() + freq]; }

  double freq_spacing() const { return grid.freq_spacing() / static_cast<double>(pad); }

  /// sqrt(sum |V|^2 * cell area), the discrete Moyal integral.
  double l2_norm() const {
    double acc = 0.0;
    for (const cplx& v : values) acc += std::norm(v);
    return std::sqrt(acc * grid.cell_volume() * std::pow(freq_spacing(), grid.dim()));
  }
};

inline StftMap stft(const Signal& f, const Signal& g, std::size_t pad = 1) {
  StftMap map{f.grid(), pad, {}};
  map.values.resize(f.grid().total_points() * f.grid().total_points() * pad);
  const std::size_t width = map.frequencies();
  for_each_stft_row(f, g, [&](std::size_t m, std::span<const cplx> row) {
    std::copy(row.begin(), row.end(), map.values.begin() + static_cast<std::ptrdiff_t>(m * width));
  }, pad);
  return map;
}

/// Slices of V_phi h through the origin for the Gaussian window phi, with phi
/// evaluated in closed form: time slice V(x_m, 0), frequency slice V(0, xi_k).
class GaussianSlicer {
 public:
  explicit GaussianSlicer(const Grid& grid) : grid_(grid) {
    const std::size_t N = grid.points();
    const double h = grid.spacing();
    toeplitz_.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    for (std::size_t m = 0; m < N; ++m) {
      for (std::size_t j = 0; j < N; ++j) {
        toeplitz_(m, j) = h * gaussian_1d(grid.coordinate(j) - grid.coordinate(m));
      }
    }
    const Signal phi = gaussian_window(grid);
    window_.assign(phi.values().begin(), phi.values().end());
  }

  const Grid& grid() const { return grid_; }
  /// T[m][j] = spacing * phi(t_j - x_m), one axis.
  const Eigen::MatrixXd& toeplitz() const { return toeplitz_; }

  /// |V_phi h(x_m, 0)| for every lattice point x_m.
  std::vector<double> time_slice(const Signal& s) const {
    const std::size_t N = grid_.points();
    std::vector<double> out(grid_.total_points());
    if (grid_.dim() == 1) {
      const Eigen::Map<const Eigen::VectorXcd> v(s.values().data(), static_cast<Eigen::Index>(N));
      const Eigen::VectorXcd r = toeplitz_.cast<cplx>() * v;
      for (std::size_t m = 0; m < N; ++m) out[m] = std::abs(r(m));
      return out;
    }
    using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMat> H(s.values().data(), static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    const Eigen::MatrixXcd G = toeplitz_.cast<cplx>();
    const RowMat r = G * H * G.transpose();
    for (std::size_t i = 0; i < N * N; ++i) out[i] = std::abs(r.data()[i]);
    return out;
  }

  /// |V_phi h(0, xi_k)| for every dual-lattice point xi_k.
  std::vector<double> freq_slice(const Signal& s) const {
    std::vector<cplx> prod(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) prod[i] = s[i] * window_[i];
    detail::centered_dft_block(prod, grid_.points(), grid_.dim(), grid_.spacing());
    std::vector<double> out(prod.size());
    for (std::size_t i = 0; i < prod.size(); ++i) out[i] = std::abs(prod[i]);
    return out;
  }

 private:
  Grid grid_;
  Eigen::MatrixXd toeplitz_;
  std::vector<cplx> window_;
};

}  // namespace tfrotor
