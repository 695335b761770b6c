#pragma once

// Thin FFTW wrapper: in-place complex transforms of arbitrary length with a
// process-wide plan cache.

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

namespace tfrotor::detail {

enum class FftDirection { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

class FftPlans {
 public:
  static FftPlans& instance() {
    static FftPlans plans;
    return plans;
  }

  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  ~FftPlans() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  // Unnormalized transform: forward uses e^{-2 pi i jk/N}, backward e^{+2 pi i jk/N}.
  void execute(std::span<std::complex<double>> data, FftDirection dir) {
    fftw_plan plan = get(data.size(), dir);
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, p, p);
  }

 private:
  FftPlans() = default;

  fftw_plan get(std::size_t n, FftDirection dir) {
    // Planner calls are not thread-safe in FFTW; execution with new-array
    // execute is.
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_pair(n, static_cast<int>(dir));
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<std::complex<double>> scratch(n);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), p, p, static_cast<int>(dir),
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

inline void fft(std::span<std::complex<double>> data) {
  FftPlans::instance().execute(data, FftDirection::forward);
}

inline void ifft(std::span<std::complex<double>> data) {
  FftPlans::instance().execute(data, FftDirection::backward);
}

/// Integer frequency of FFT bin k for a length-n transform.
inline double bin_frequency(std::size_t k, std::size_t n) {
  return k < n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
}

/// Periodic translation of one line by `shift` samples (fractional allowed):
/// out[j] = in(j - shift), band-limited interpolation.
inline void fractional_shift(std::span<std::complex<double>> line, double shift) {
  const std::size_t n = line.size();
  if (shift == 0.0) return;
  fft(line);
  constexpr double two_pi = 6.283185307179586476925;
  for (std::size_t k = 0; k < n; ++k) {
    double nu = bin_frequency(k, n);
    // The Nyquist bin is split symmetrically so real inputs stay real.
    const double phase = -two_pi * nu * shift / static_cast<double>(n);
    if (k == n / 2) {
      line[k] *= std::cos(two_pi * 0.5 * shift);
    } else {
      line[k] *= std::polar(1.0, phase);
    }
  }
  const double scale = 1.0 / static_cast<double>(n);
  ifft(line);
  for (auto& v : line) v *= scale;
}

}  // namespace tfrotor::detail
