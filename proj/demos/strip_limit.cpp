// Small-width behaviour of the group-averaged strip indicator for the circle
// (quadrature) and the two-dimensional torus (closed form).

#include <cstdio>
#include <vector>

#include <iostream>

#include "tfrotor/report.hpp"
#include "tfrotor/tfrotor.hpp"

int main() {
  using namespace tfrotor;
  std::vector<double> eps;
  for (int k = 2; k <= 9; ++k) eps.push_back(std::ldexp(1.0, -k));
  const SamplerConfig cfg{0, 1};
  const auto circle = convergence_study(std::vector<double>{1.0, 0.5}, eps, cfg, PsiMode::quadrature);
  const auto torus = convergence_study(std::vector<double>{1.0, 0.5, 0.0, 0.0}, eps, cfg, PsiMode::torus_closed_form);
  write_convergence_csv(std::cout, {circle, torus});
  std::printf("# circle limit %.6f (1/pi = %.6f), torus limit %.6f\n", circle.limit, 1.0 / kPi, torus.limit);
}
