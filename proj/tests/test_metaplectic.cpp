#include <gtest/gtest.h>

#include "tfrotor/metaplectic.hpp"
#include "tfrotor/sampling.hpp"

using namespace tfrotor;

namespace {

double max_diff(const Signal& a, const Signal& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST(QuadraticFourier, TorusElementMatchesFrft) {
  const Grid g(1, 256, 8.0);
  const Signal f = make_test_signal(g, "hermite(2)");
  // The quadratic Fourier transform carries the metaplectic phase e^{i theta / 2}.
  for (double theta : {0.25 * kPi, 1.0, 2.5, -1.2}) {
    const TorusElement t({theta});
    const Signal direct = apply_quadratic_fourier(generating_function_of(torus_to_rotation(t)), f);
    const Signal frac = apply_torus(t, f);
    std::vector<cplx> expect(frac.size());
    for (std::size_t i = 0; i < frac.size(); ++i) expect[i] = frac[i] * std::polar(1.0, 0.5 * theta);
    EXPECT_LT(max_diff(direct, Signal(g, expect)), 1e-10) << theta;
  }
}

TEST(QuadraticFourier, RejectsMassAtTheEdge) {
  const Grid g(1, 64, 8.0);
  const Signal f = make_test_signal(g, "translated-gaussian(2)");
  const auto w = generating_function_of(torus_to_rotation(TorusElement({1.0})));
  EXPECT_THROW(apply_quadratic_fourier(w, f), TailViolation);
}

TEST(ApplyUnitary, OneDimensionIsFrftOfMinusArgument) {
  const Grid g(1, 64, 8.0);
  const Signal f = make_test_signal(g, "translated-gaussian(0.5)");
  const UnitaryMatrix u = UnitaryMatrix::diagonal({0.9});
  EXPECT_LT(max_diff(apply_unitary(u, f), frft(f, 0, -0.9)), 1e-15);
  // iota(i) is the inverse of J, whose operator is the inverse transform.
  EXPECT_LT(max_diff(apply_unitary(UnitaryMatrix::diagonal({0.5 * kPi}), f), idft_centered(f)), 1e-12);
}

TEST(ApplyUnitary, GaussianModulusInvariant) {
  for (int n : {1, 2}) {
    const Grid g(n, n == 1 ? 256 : 64, 8.0);
    const Signal phi = gaussian_window(g);
    for (const auto& u : sample_haar_unitary(n, {7, 20})) {
      const Signal o = apply_unitary(u, phi);
      EXPECT_LT(modulus_distance(o, phi), 1e-10);
      EXPECT_NEAR(o.l2_norm(), 1.0, 1e-12);
    }
  }
}

TEST(ApplyUnitary, RepresentationUpToPhase) {
  const Grid g(2, 64, 8.0);
  const Signal f = make_test_signal(g, "translated-gaussian(1,0.5)");
  for (std::uint64_t k = 0; k < 3; ++k) {
    const UnitaryMatrix a = haar_unitary(2, 9, 2 * k), b = haar_unitary(2, 9, 2 * k + 1);
    EXPECT_LT(phase_aligned_distance(apply_unitary(a * b, f), apply_unitary(a, apply_unitary(b, f))), 1e-9);
    EXPECT_LT(phase_aligned_distance(apply_unitary_shifted(a, 0.7, f), apply_unitary(a, f)), 1e-8);
  }
}

TEST(ApplyUnitary, FactorizationReconstructs) {
  for (std::uint64_t k = 0; k < 50; ++k) {
    const UnitaryMatrix u = haar_unitary(2, 13, k);
    EXPECT_LT((factor_unitary(u).reconstruct() - u.matrix()).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_NO_THROW(factor_unitary(UnitaryMatrix::diagonal({0.3, -1.0})));
  CMatrix swap(2, 2);
  swap << 0, 1, cplx(0, 1), 0;
  EXPECT_LT((factor_unitary(UnitaryMatrix(swap)).reconstruct() - swap).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(RotateCoordinates, TranslatedGaussianFollowsTheRotation) {
  const Grid g(2, 64, 8.0);
  const Signal f = make_test_signal(g, "translated-gaussian(1,0.5)");
  for (double beta : {0.7, 2.0, -2.8}) {
    const double a0 = std::cos(beta) * 1.0 - std::sin(beta) * 0.5;
    const double a1 = std::sin(beta) * 1.0 + std::cos(beta) * 0.5;
    const Signal expect = make_test_signal(g, SignalDescriptor{SignalKind::translated, {a0, a1}});
    EXPECT_LT(max_diff(rotate_coordinates(f, beta), expect), 1e-10) << beta;
  }
}

TEST(ApplyUnitaryDirect, AgreesWithFactoredRouteOnBenignUnitary) {
  const Grid g(2, 64, 8.0);
  const Signal f = gaussian_window(g);
  const Signal h = make_test_signal(g, "hermite(1)");
  CMatrix m(2, 2);
  const double c = std::cos(0.6), s = std::sin(0.6);
  m << cplx(0, c), s, s, cplx(0, c);
  const UnitaryMatrix u(m);
  EXPECT_LT(phase_aligned_distance(apply_unitary_direct(u, h), apply_unitary(u, h)), 1e-6);
  EXPECT_LT(modulus_distance(apply_unitary_direct(u, f), f), 1e-8);
}
