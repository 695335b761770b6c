// Prints the STFT, rotation and torus norms (p-th powers) of the test corpus
// and their ratios, for a chosen exponent.

#include <cstdio>
#include <cstdlib>

#include "tfrotor/tfrotor.hpp"

int main(int argc, char** argv) {
  using namespace tfrotor;
  const double p = argc > 1 ? std::atof(argv[1]) : 1.0;
  const Grid grid(1, 256, 8.0);
  std::printf("%-24s %12s %12s %12s %10s %10s\n", "signal", "stft", "rotation", "torus", "pi*rot/stft",
              "torus/stft");
  for (const SignalDescriptor& d : equivalence_corpus()) {
    const Signal f = make_test_signal(grid, d);
    const double s = mp_norm_stft(f, p).value;
    const double r = rotation_functional(f, p).value;
    const double t = torus_functional(f, p).value;
    std::printf("%-24s %12.6f %12.6f %12.6f %10.6f %10.6f\n", to_string(d).c_str(), s, r, t, kPi * r / s, t / s);
  }
}
