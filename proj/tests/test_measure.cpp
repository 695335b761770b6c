#include <gtest/gtest.h>

#include <cmath>

#include "tfrotor/measure.hpp"

using namespace tfrotor;

namespace {

// Midpoint rule over the torus angles of the strip indicator applied to the rotated point.
double torus_psi_oracle(const std::vector<double>& z, double eps, int steps) {
  const int n = static_cast<int>(z.size() / 2);
  double value = 1.0;
  for (int i = 0; i < n; ++i) {
    const double x = z[i], xi = z[n + i];
    std::size_t hits = 0;
    for (int k = 0; k < steps; ++k) {
      const double t = 2 * kPi * (k + 0.5) / steps;
      hits += std::abs(std::sin(t) * x + std::cos(t) * xi) <= 0.5 * eps;
    }
    value *= 2 * kPi * static_cast<double>(hits) / steps / eps;
  }
  return value;
}

}  // namespace

TEST(Psi, StripIndicator) {
  const std::vector<double> z = {5.0, 0.2};
  EXPECT_DOUBLE_EQ(chi_eps(z, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(chi_eps(z, 0.3), 0.0);
  EXPECT_THROW(chi_eps(z, 0.0), InvalidArgument);
  EXPECT_THROW(chi_eps(std::vector<double>{1.0, 2.0, 3.0}, 0.1), InvalidArgument);
}

TEST(Psi, TorusClosedFormMatchesQuadrature) {
  for (const auto& z : std::vector<std::vector<double>>{{1.0, 0.0}, {0.3, 0.4}, {0.8, -0.2, 0.1, 0.5}}) {
    for (double eps : {0.5, 0.1}) {
      EXPECT_NEAR(torus_psi(z, eps), torus_psi_oracle(z, eps, 400000), 2e-3 * torus_psi(z, eps));
    }
  }
}

TEST(Psi, CircleQuadratureIsNormalizedTorusCase) {
  // Haar measure on U(1) has mass one, the torus angle measure has mass 2 pi.
  for (const auto& z : std::vector<std::vector<double>>{{1.0, 0.0}, {0.3, 0.4}, {2.0, -1.0}}) {
    for (double eps : {0.5, 0.05}) {
      const double t = torus_psi(z, eps) / (2 * kPi);
      EXPECT_NEAR(psi_eps(z, eps, {0, 1}, PsiMode::quadrature).value, t, 1e-3 * t);
    }
  }
}

TEST(Psi, MonteCarloAgreesWithQuadrature) {
  const std::vector<double> z = {1.0, 0.5};
  const auto mc = psi_eps(z, 0.2, {3, 200000}, PsiMode::monte_carlo);
  const double q = psi_eps(z, 0.2, {0, 1}, PsiMode::quadrature).value;
  EXPECT_LT(std::abs(mc.value - q), 4 * mc.std_error);
}

TEST(Psi, MonteCarloTwoDimensionsOnUnitSphere) {
  // For |z| = 1 and eps <= sqrt(2) the average is exactly 1/pi.
  const auto mc = psi_eps(std::vector<double>{1.0, 0.0, 0.0, 0.0}, 0.5, {4, 200000}, PsiMode::monte_carlo);
  EXPECT_LT(std::abs(mc.value - 1.0 / kPi), 4 * mc.std_error);
}

TEST(Convergence, ExtrapolationWeights) {
  const auto w = extrapolation_weights({0.25, 0.125, 0.0625});
  double sum = 0.0, first = 0.0, second = 0.0;
  const std::vector<double> nodes = {0.25, 0.125, 0.0625};
  for (std::size_t i = 0; i < 3; ++i) {
    sum += w[i];
    first += w[i] * nodes[i];
    second += w[i] * nodes[i] * nodes[i];
  }
  EXPECT_NEAR(sum, 1.0, 1e-14);
  EXPECT_NEAR(first, 0.0, 1e-14);
  EXPECT_NEAR(second, 0.0, 1e-14);
}

TEST(Convergence, TorusAndCircleLimits) {
  std::vector<double> eps;
  for (int k = 3; k <= 10; ++k) eps.push_back(std::ldexp(1.0, -k));
  const SamplerConfig cfg{0, 1};
  EXPECT_NEAR(convergence_study(std::vector<double>{1.0, 0.0}, eps, cfg, PsiMode::torus_closed_form).limit, 2.0, 1e-6);
  EXPECT_NEAR(convergence_study(std::vector<double>{1.0, 1.0, 0.0, 0.0}, eps, cfg, PsiMode::torus_closed_form).limit,
              4.0, 1e-6);
  EXPECT_NEAR(convergence_study(std::vector<double>{2.0, 0.0}, eps, cfg, PsiMode::quadrature).limit * kPi, 1.0, 5e-3);
  EXPECT_THROW(convergence_study(std::vector<double>{1.0, 0.0}, {0.1, 0.2}, cfg, PsiMode::torus_closed_form),
               InvalidArgument);
  EXPECT_THROW(convergence_study(std::vector<double>{0.0, 0.0}, eps, cfg, PsiMode::quadrature), InvalidArgument);
}

TEST(Checks, LowerBoundAndNormalization) {
  const std::vector<std::vector<double>> zs = {{0, 0}, {1, 0}, {0.5, 0.3}, {2, 1}};
  const SamplerConfig cfg{1, 2000};
  EXPECT_TRUE(lower_bound_check(zs, {1.0, 0.1, 0.01}, cfg, PsiMode::quadrature).passed);
  EXPECT_TRUE(lower_bound_check(zs, {1.0, 0.1, 0.01}, cfg, PsiMode::torus_closed_form).passed);
  EXPECT_TRUE(normalization_check({{1, 0}}, 0.1, cfg, PsiMode::quadrature).passed);
  EXPECT_TRUE(normalization_check({{1, 0}, {0.3, 0.2}}, 0.1, cfg, PsiMode::torus_closed_form).passed);
}
