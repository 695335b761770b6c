#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "tfrotor/signal_io.hpp"
#include "tfrotor/signals.hpp"

using namespace tfrotor;

namespace {

// Independent Hermite oracle built on the physicists' polynomials from <cmath>.
double hermite_oracle(unsigned k, double t) {
  return std::pow(2.0, 0.25) / std::sqrt(std::pow(2.0, k) * std::tgamma(k + 1.0)) *
         std::hermite(k, std::sqrt(2.0 * kPi) * t) * std::exp(-kPi * t * t);
}

}  // namespace

TEST(Grid, CenteredCoordinatesAndDual) {
  const Grid g(1, 256, 8.0);
  EXPECT_DOUBLE_EQ(g.spacing(), 8.0 / 256);
  EXPECT_DOUBLE_EQ(g.coordinate(0), -4.0);
  EXPECT_DOUBLE_EQ(g.coordinate(128), 0.0);
  EXPECT_DOUBLE_EQ(g.coordinate(255), 4.0 - 8.0 / 256);
  const Grid d = g.dual();
  EXPECT_EQ(d.points(), 256u);
  EXPECT_DOUBLE_EQ(d.side(), 32.0);
  EXPECT_DOUBLE_EQ(g.frequency(129), 1.0 / 8.0);
  EXPECT_FALSE(g.self_dual());
  EXPECT_TRUE(Grid(2, 64, 8.0).self_dual());
  EXPECT_EQ(Grid(2, 64, 8.0).total_points(), 4096u);
}

TEST(Grid, RejectsBadParameters) {
  EXPECT_THROW(Grid(3, 64, 8.0), InvalidArgument);
  EXPECT_THROW(Grid(1, 100, 8.0), InvalidArgument);
  EXPECT_THROW(Grid(1, 4, 8.0), InvalidArgument);
  EXPECT_THROW(Grid(1, 64, 0.0), InvalidArgument);
  EXPECT_THROW(Grid(1, 64, std::nan("")), InvalidArgument);
}

TEST(Signal, SizeMustMatchGrid) {
  EXPECT_THROW(Signal(Grid(1, 64, 8.0), std::vector<cplx>(63)), InvalidArgument);
  const Signal a(Grid(1, 64, 8.0), std::vector<cplx>(64, 1.0));
  const Signal b(Grid(1, 64, 4.0), std::vector<cplx>(64, 1.0));
  EXPECT_THROW(inner_product(a, b), InvalidArgument);
}

TEST(Signals, HermiteMatchesPolynomialOracle) {
  for (int k = 0; k <= 8; ++k) {
    for (double t : {-2.3, -0.7, 0.0, 0.4, 1.9}) {
      EXPECT_NEAR(hermite_function(k, t), hermite_oracle(static_cast<unsigned>(k), t), 1e-12) << k << ' ' << t;
    }
  }
}

TEST(Signals, CorpusIsNormalizedAndOrthogonal) {
  const Grid g(1, 256, 8.0);
  for (const auto& d : equivalence_corpus()) {
    EXPECT_NEAR(make_test_signal(g, d).l2_norm(), 1.0, 1e-12) << to_string(d);
  }
  const Signal h1 = make_test_signal(g, "hermite(1)");
  const Signal h2 = make_test_signal(g, "hermite(2)");
  EXPECT_LT(std::abs(inner_product(h1, h2)), 1e-14);
  EXPECT_NEAR(gaussian_window(Grid(2, 64, 8.0)).l2_norm(), 1.0, 1e-12);
}

TEST(Signals, DescriptorParsing) {
  const SignalDescriptor d = parse_descriptor("modulated-gaussian(1, 0.5)");
  EXPECT_EQ(d.kind, SignalKind::modulated);
  ASSERT_EQ(d.params.size(), 2u);
  EXPECT_DOUBLE_EQ(d.param(1), 0.5);
  EXPECT_EQ(to_string(parse_descriptor("hermite(2)")), "hermite(2)");
  EXPECT_THROW(parse_descriptor("sinc"), InvalidArgument);
  EXPECT_THROW(parse_descriptor("hermite(x)"), InvalidArgument);
  EXPECT_THROW(parse_descriptor("gaussian(1)"), InvalidArgument);
  EXPECT_THROW(parse_descriptor("translated-gaussian"), InvalidArgument);
  EXPECT_THROW(make_test_signal(Grid(1, 64, 8.0), "hermite(1.5)"), InvalidArgument);
  EXPECT_THROW(make_test_signal(Grid(1, 64, 8.0), "translated-gaussian(1,2)"), InvalidArgument);
}

TEST(Signals, SupportViolationNearEdge) {
  EXPECT_THROW(make_test_signal(Grid(1, 256, 8.0), "translated-gaussian(3.5)"), SupportViolation);
  // Frequency window of N=64, T=8 is [-4, 4): a modulation of 3.5 leaks.
  EXPECT_THROW(make_test_signal(Grid(1, 64, 8.0), "modulated-gaussian(3.5)"), SupportViolation);
  EXPECT_NO_THROW(make_test_signal(Grid(1, 256, 8.0), "translated-gaussian(1)"));
}

TEST(SignalIo, RoundTripIsExact) {
  for (int n : {1, 2}) {
    const Grid g(n, 64, 8.0);
    const Signal s = make_test_signal(g, "translated-gaussian(0.5)");
    std::stringstream buf;
    write_signal(buf, s);
    const Signal back = read_signal(buf);
    ASSERT_TRUE(back.grid() == g);
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(back[i], s[i]);
  }
}

TEST(SignalIo, MalformedInputs) {
  auto parse = [](const std::string& text) {
    std::istringstream is(text);
    return read_signal(is);
  };
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("0,1,0\n"), ParseError);
  EXPECT_THROW(parse("# 1 8 8\n0,1,0\n"), ParseError);
  EXPECT_THROW(parse("# 1 8 8\n0,1\n"), ParseError);
  EXPECT_THROW(parse("# 1 8 8\n0,1,0\n0,1,0\n"), ParseError);
  EXPECT_THROW(parse("# 1 8 8\n9,1,0\n"), ParseError);
  EXPECT_THROW(parse("# 1 8 8\n0,abc,0\n"), ParseError);
  EXPECT_THROW(parse("# 3 8 8\n"), ParseError);
  EXPECT_THROW(parse("# 1 12 8\n"), ParseError);
}
