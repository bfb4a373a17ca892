#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "lcpol/profile.hpp"

using namespace lcpol;

TEST(Profile, ConstantPolynomialPiecewiseEvaluate) {
  EXPECT_DOUBLE_EQ(ScalarProfile::constant(0.3)(0.7), 0.3);
  const auto p = ScalarProfile::polynomial({0.2, 0.3});
  EXPECT_NEAR(p(0.5), 0.35, 1e-15);
  EXPECT_NEAR(p.derivative(0.5, 1), 0.3, 1e-15);
  const auto pw = ScalarProfile::piecewise({0.0, 0.4, 1.0}, {{1.0}, {-1.0}});
  EXPECT_EQ(pw(0.2), 1.0);
  EXPECT_EQ(pw(0.7), -1.0);
  EXPECT_TRUE(pw.is_piecewise_constant());
}

TEST(Profile, RejectsBadBreakpoints) {
  EXPECT_THROW(ScalarProfile::piecewise({0.0, 0.6, 0.5, 1.0}, {{1.0}, {2.0}, {3.0}}), PreconditionError);
  EXPECT_THROW(ScalarProfile::piecewise({0.1, 1.0}, {{1.0}}), PreconditionError);
}

TEST(Profile, SampledDerivatives) {
  std::vector<double> v(257);
  for (size_t i = 0; i < v.size(); ++i) v[i] = std::sin(static_cast<double>(i) / 256.0);
  const auto s = ScalarProfile::sampled(v, 3);
  EXPECT_NEAR(s(0.37), std::sin(0.37), 1e-9);
  EXPECT_NEAR(s.derivative(0.37, 1), std::cos(0.37), 1e-6);
  EXPECT_THROW(ScalarProfile::sampled(v, 5), PreconditionError);
}

TEST(Profile, FromFunctionAccuracy) {
  const auto f = ScalarProfile::from_function([](double t) { return std::exp(-t) * std::cos(3 * t); }, 16, 11);
  for (double t : {0.0, 0.13, 0.5, 0.91, 1.0}) EXPECT_NEAR(f(t), std::exp(-t) * std::cos(3 * t), 1e-12);
}

TEST(Flip, ConstantIsFixed) {
  const auto c = ScalarProfile::constant(0.42);
  const auto f = flip_profile(c);
  for (double t : {0.0, 0.3, 1.0}) EXPECT_DOUBLE_EQ(f(t), 0.42);
}

TEST(Flip, LinearBecomesReflected) {
  const auto f = flip_profile(ScalarProfile::polynomial({0.0, 1.0}));
  for (double t : {0.0, 0.25, 0.8, 1.0}) EXPECT_NEAR(f(t), 1.0 - t, 1e-15);
}

TEST(Flip, InvolutionOnSamples) {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> v(101);
  for (auto& x : v) x = u(g);
  const auto s = ScalarProfile::sampled(v, 3);
  const auto ff = flip_profile(flip_profile(s));
  EXPECT_EQ(ff.samples(), v);
  for (size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(ff(i / 100.0), v[i], 1e-14);
}

TEST(PatternFlip, CosineProfileIsSignBlind) {
  const auto base = bump_profile(0.1, 0.1, 0.6);
  const auto a = pattern_flip_family(base, 5, {1, 1, 1, 1, 1});
  const auto b = pattern_flip_family(base, 5, {1, -1, 1, -1, 1});
  for (int i = 0; i <= 200; ++i) {
    const double t = i / 200.0;
    EXPECT_NEAR(std::cos(2 * a(t)), std::cos(2 * b(t)), 1e-15);
  }
}

TEST(PatternFlip, SingleSlotNegates) {
  const auto base = bump_profile(0.5, 0.3, 0.4);
  const auto m = pattern_flip_family(base, 1, {-1});
  for (double t : {0.25, 0.5, 0.7}) EXPECT_NEAR(m(t), -base(t), 1e-12);
}

TEST(PatternFlip, RejectsBadSigns) {
  const auto base = bump_profile(0.1, 0.1, 0.6);
  EXPECT_THROW(pattern_flip_family(base, 5, {1, 1, 2, 1, 1}), PreconditionError);
  EXPECT_THROW(pattern_flip_family(base, 5, {1, 1}), PreconditionError);
}

TEST(Rearrange, ReflectionOfDecreasingLine) {
  const auto r = rearrange_monotone(ScalarProfile::polynomial({1.0, -1.0}));
  for (double t : {0.05, 0.3, 0.6, 0.95}) EXPECT_NEAR(r(t), t, 2e-3);
}

TEST(Rearrange, ConstantIsFixed) {
  const auto r = rearrange_monotone(ScalarProfile::constant(-0.2));
  for (double t : {0.0, 0.5, 1.0}) EXPECT_NEAR(r(t), -0.2, 1e-15);
}

TEST(Rearrange, PiecewiseConstantHistogramPreserved) {
  std::mt19937_64 g(17);
  std::uniform_real_distribution<double> u(0.05, 0.25), v(-0.9, 0.9);
  std::vector<double> br{0.0};
  std::vector<poly::Coeffs> cs;
  while (br.back() < 0.8) {
    br.push_back(br.back() + u(g));
    cs.push_back({v(g)});
  }
  br.push_back(1.0);
  cs.push_back({v(g)});
  const auto q = ScalarProfile::piecewise(br, cs);
  const auto r = rearrange_monotone(q);
  ASSERT_TRUE(r.is_piecewise_constant());
  std::map<double, double> hq, hr;
  for (size_t i = 0; i + 1 < br.size(); ++i) hq[cs[i][0]] += br[i + 1] - br[i];
  const auto& rb = r.breakpoints();
  for (size_t i = 0; i + 1 < rb.size(); ++i) hr[r.coefficients()[i][0]] += rb[i + 1] - rb[i];
  ASSERT_EQ(hq.size(), hr.size());
  for (auto& [k, w] : hq) EXPECT_NEAR(hr[k], w, 1e-14);
  for (size_t i = 1; i < r.coefficients().size(); ++i) EXPECT_LE(r.coefficients()[i - 1][0], r.coefficients()[i][0]);
}

TEST(Dielectric, UniaxialTensor) {
  const double ep = 2.0, ea = 3.0, psi = 0.4, phi = 0.3;
  const auto d = DielectricProfile::uniaxial(ScalarProfile::constant(psi), ScalarProfile::constant(phi), ep, ea);
  const auto e = d.at(0.5);
  const double n1 = std::cos(psi) * std::cos(phi), n2 = std::cos(psi) * std::sin(phi), n3 = std::sin(psi);
  EXPECT_NEAR(e.e11, ep + (ea - ep) * n1 * n1, 1e-15);
  EXPECT_NEAR(e.e13, (ea - ep) * n1 * n3, 1e-15);
  EXPECT_NEAR(e.e23, (ea - ep) * n2 * n3, 1e-15);
  EXPECT_NEAR(e.e33, ep + (ea - ep) * n3 * n3, 1e-15);
}

TEST(Dielectric, RejectsTiltOutOfRange) {
  EXPECT_THROW(DielectricProfile::uniaxial(ScalarProfile::constant(2.0), ScalarProfile::constant(0.0), 2, 3),
               PreconditionError);
  EXPECT_THROW(DielectricProfile::orthorhombic(ScalarProfile::constant(2), ScalarProfile::constant(2),
                                               ScalarProfile::constant(-1)),
               PreconditionError);
}
