// Modulus of the fractional Fourier transform of a translated Gaussian as the
// angle runs over a half turn. CSV: theta,t,modulus.

#include <cstdio>

#include "tfrotor/tfrotor.hpp"

int main() {
  using namespace tfrotor;
  const Grid grid(1, 64, 8.0);
  const Signal f = make_test_signal(grid, "translated-gaussian(1.5)");
  std::printf("theta,t,modulus\n");
  for (int k = 0; k <= 16; ++k) {
    const double theta = kPi * k / 16.0;
    const Signal o = frft(f, 0, theta);
    for (std::size_t i = 0; i < o.size(); ++i) {
      std::printf("%.6f,%.6f,%.9f\n", theta, grid.coordinate(i), std::abs(o[i]));
    }
  }
}
