#include <gtest/gtest.h>

#include <cmath>

#include "lcpol/rng.hpp"
#include "lcpol/scaling.hpp"

using namespace lcpol;

TEST(Scaling, PerWavelengthEtaMatchesDeskScale) {
  const auto c = nondimensionalize(0.633, 5.0, 1.52, 70.0, 200, 0.94, EtaConvention::PerWavelength);
  EXPECT_NEAR(c.eta, 0.084, 1e-3);
  EXPECT_NEAR(c.tau, 1.2, 0.02);
  EXPECT_EQ(c.lambda_grid.size(), 200u);
  EXPECT_NEAR(c.lambda_grid.front(), std::cos(70.0 * std::numbers::pi / 180.0), 1e-15);
  EXPECT_DOUBLE_EQ(c.lambda_grid.back(), 1.0);
}

TEST(Scaling, AngularConventionIsTwoPiSmaller) {
  const auto a = nondimensionalize(0.633, 5.0, 1.52, 70.0, 200, 0.94, EtaConvention::Angular);
  const auto p = nondimensionalize(0.633, 5.0, 1.52, 70.0, 200, 0.94, EtaConvention::PerWavelength);
  EXPECT_NEAR(p.eta / a.eta, 2.0 * std::numbers::pi, 1e-12);
}

TEST(Scaling, TauAtAlphaOneIsNotNearOnePointTwo) {
  // cos^2(70 deg)/eta at eta = 0.0833 is about 1.40.
  const auto c = nondimensionalize(0.633, 5.0, 1.52, 70.0, 200, 1.0, EtaConvention::PerWavelength);
  EXPECT_NEAR(c.tau, 1.40, 0.01);
}

TEST(Scaling, EtaDecreasesWithThickness) {
  double prev = 1.0;
  for (double h : {5.0, 10.0, 20.0, 40.0, 80.0}) {
    const auto c = nondimensionalize(0.633, h, 1.52, 30.0, 10, 0.94, EtaConvention::PerWavelength);
    EXPECT_LT(c.eta, prev);
    prev = c.eta;
  }
}

TEST(Scaling, RejectsEmptyInterval) {
  // 85 degrees: cos^2 is far below eta^alpha, so tau < 1.
  EXPECT_THROW(nondimensionalize(0.633, 5.0, 1.52, 85.0, 20, 0.94, EtaConvention::PerWavelength), PreconditionError);
  EXPECT_THROW(nondimensionalize(-1.0, 5.0, 1.52, 70.0, 20, 0.94), PreconditionError);
}

TEST(UniaxialDelta, IsotropicCase) {
  const auto d = uniaxial_delta(2.25, 2.25);
  EXPECT_EQ(d.delta, 0.0);
  EXPECT_NEAR(d.n0 * d.n0, 2.25, 1e-15);
}

TEST(UniaxialDelta, DirectEvaluation) {
  const auto d = uniaxial_delta(2.0, 3.0);
  EXPECT_NEAR(d.delta, -0.2, 1e-15);
  EXPECT_NEAR(d.n0 * d.n0, std::sqrt(6.0), 1e-15);
}

TEST(UniaxialDelta, BirefringenceMatchesAlpha) {
  // n_e - n_o = 0.15 with n_o n_e = 1.52^2; delta = -eta^alpha fixes alpha.
  const double s = 0.15, p = 1.52 * 1.52;
  const double no = (-s + std::sqrt(s * s + 4 * p)) / 2, ne = no + s;
  const auto d = uniaxial_delta(no * no, ne * ne);
  EXPECT_NEAR(d.n0, 1.52, 1e-12);
  EXPECT_NEAR(std::abs(d.delta), 0.0984, 5e-4);
  const double alpha = std::log(std::abs(d.delta)) / std::log(0.084);
  EXPECT_NEAR(alpha, 0.94, 0.01);
}

TEST(Rng, StreamsAreDeterministicAndDistinct) {
  EXPECT_EQ(normal_draw(5, 3), normal_draw(5, 3));
  EXPECT_NE(normal_draw(5, 3), normal_draw(5, 4));
  EXPECT_NE(normal_draw(5, 3), normal_draw(6, 3));
  double m = 0.0, v = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = normal_draw(11, i);
    m += x;
    v += x * x;
  }
  m /= n;
  v = v / n - m * m;
  EXPECT_NEAR(m, 0.0, 0.03);
  EXPECT_NEAR(v, 1.0, 0.04);
}

TEST(Grid, SteppedGridEndsInRange) {
  const auto g = stepped_grid(0.5, 1.0, 0.1);
  ASSERT_EQ(g.size(), 6u);
  EXPECT_NEAR(g.back(), 1.0, 1e-15);
  EXPECT_THROW(stepped_grid(0.5, 1.0, -0.1), PreconditionError);
}
