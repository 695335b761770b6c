#pragma once

// Reproducible Haar sampling on U(n) and uniform sampling on the torus T^n.
// Sample k depends only on (seed, k), so streams can be generated in parallel.

#include <Eigen/QR>

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "tfrotor/detail/parallel.hpp"
#include "tfrotor/symplectic.hpp"

namespace tfrotor {

struct SamplerConfig {
  std::uint64_t seed = 0;
  std::size_t count = 1;

  void validate() const {
    if (count < 1) throw InvalidArgument("sample count must be at least 1");
  }
};

/// SplitMix64 stream keyed by (seed, index); satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t index)
      : state_(mix(seed ^ mix(index + 0x632be59bd9b4e019ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

/// k-th Haar-distributed element of U(n): QR of a complex Ginibre matrix with
/// the columns of Q rephased so that R has a positive diagonal.
inline UnitaryMatrix haar_unitary(int n, std::uint64_t seed, std::uint64_t index) {
  if (n < 1) throw InvalidArgument("unitary dimension must be positive");
  CounterRng rng(seed, index);
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix z(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = cplx(re, im);
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const double mod = std::abs(r(j, j));
    const cplx phase = mod > 0.0 ? r(j, j) / mod : cplx(1.0);
    q.col(j) *= phase;
  }
  return UnitaryMatrix(q);
}

inline std::vector<UnitaryMatrix> sample_haar_unitary(int n, const SamplerConfig& cfg) {
  cfg.validate();
  if (n != 1 && n != 2) throw InvalidArgument("Haar sampling is provided for n = 1, 2");
  auto mats = detail::parallel_map<CMatrix>(cfg.count, [&](std::size_t k) {
    return haar_unitary(n, cfg.seed, k).matrix();
  });
  std::vector<UnitaryMatrix> out;
  out.reserve(cfg.count);
  for (auto& m : mats) out.emplace_back(std::move(m));
  return out;
}

inline TorusElement torus_sample(int n, std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, index);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  std::vector<double> t(static_cast<std::size_t>(n));
  for (double& v : t) v = angle(rng);
  return TorusElement(std::move(t));
}

inline std::vector<TorusElement> sample_torus(int n, const SamplerConfig& cfg) {
  cfg.validate();
  if (n < 1) throw InvalidArgument("torus dimension must be positive");
  std::vector<TorusElement> out;
  out.reserve(cfg.count);
  for (std::size_t k = 0; k < cfg.count; ++k) out.push_back(torus_sample(n, cfg.seed, k));
  return out;
}

}  // namespace tfrotor
