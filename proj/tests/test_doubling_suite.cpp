#include <gtest/gtest.h>

#include <cmath>

#include "uclab/doubling_suite.hpp"

using namespace uclab;

namespace {

const ExponentSet& unit() {
  static const auto e = exponents(1, kInf, kInf, 1.0, 1.0);
  return e;
}

ScalarField cos1(const GridSpec& g) {
  return ScalarField::sample(g, [](const Point& x) { return std::cos(2.0 * kPi * x[0]); });
}

}  // namespace

TEST(Gamma, UnitNormsClosedForm) {
  for (double d : {0.5, 0.1, 0.015625}) EXPECT_NEAR(gamma(d, unit()), 3.5 + 4.0 * std::log(1.0 / d), 1e-13);
}

TEST(Gamma, LimitAndMonotone) {
  EXPECT_NEAR(gamma(1.0 - 1e-12, unit()), 3.5, 1e-10);
  EXPECT_GT(gamma(0.1, unit()), gamma(0.2, unit()));
  EXPECT_THROW(gamma(1.0, unit()), InvalidArgument);
}

TEST(ChooseDelta, WorkedExample) {
  const auto c = choose_delta(0.25, unit());
  EXPECT_NEAR(c.terms[0], 0.5, 1e-15);
  EXPECT_NEAR(c.terms[1], 0.25 / std::log(4.0), 1e-15);
  EXPECT_NEAR(c.terms[1], 0.1803, 1e-4);
  EXPECT_NEAR(c.terms[2], 0.015625, 1e-16);
  EXPECT_NEAR(c.terms[3], 0.25 / (3.0 + std::sqrt(0.5)), 1e-15);
  EXPECT_NEAR(c.terms[3], 0.0674, 1e-4);
  EXPECT_EQ(c.delta, 0.015625);
  EXPECT_TRUE(c.below_scales);
  EXPECT_TRUE(c.admissible);
}

TEST(ChooseDelta, NonincreasingInNorms) {
  double prev = 1.0;
  for (double m : {1.0, 2.0, 4.0, 8.0}) {
    const double d = choose_delta(0.25, exponents(2, kInf, kInf, m, m)).delta;
    EXPECT_LE(d, prev);
    EXPECT_LT(d, 0.25);
    prev = d;
  }
}

TEST(ChooseDelta, Deterministic) {
  const auto e = exponents(2, 3.0, 6.0, 2.0, 4.0);
  const auto a = choose_delta(0.125, e);
  const auto b = choose_delta(0.125, e);
  EXPECT_EQ(a.delta, b.delta);
  EXPECT_EQ(a.gamma, b.gamma);
  EXPECT_EQ(a.rhs, b.rhs);
}

TEST(ChooseDelta, RejectsRadius) {
  EXPECT_THROW(choose_delta(0.0, unit()), InvalidArgument);
  EXPECT_THROW(choose_delta(0.6, unit()), InvalidArgument);
}

TEST(Observability, VolumeRatioAndCosine) {
  const GridSpec g(1, 64);
  EXPECT_NEAR(observability_ratio(ScalarField::constant(g, 1.0), 0.25).ratio, 2.0, 1e-13);
  EXPECT_NEAR(observability_ratio(cos1(g), 0.25).ratio, 2.0, 1e-12);
}

TEST(Observability, SupportedInBall) {
  const GridSpec g(1, 64);
  const auto f = ScalarField::sample(g, [](const Point& x) { return std::abs(x[0]) < 0.2 ? 1.0 + x[0] : 0.0; });
  EXPECT_NEAR(observability_ratio(f, 0.25).ratio, 1.0, 1e-14);
}

TEST(Observability, EmptyBallSentinel) {
  const GridSpec g(1, 64);
  const auto f = ScalarField::sample(g, [](const Point& x) { return std::abs(x[0]) > 0.3 ? 1.0 : 0.0; });
  const auto r = observability_ratio(f, 0.25);
  EXPECT_TRUE(r.empty_ball);
  EXPECT_TRUE(std::isinf(r.ratio));
}

TEST(Observability, AtLeastOneAndMonotoneInRadius) {
  const GridSpec g(2, 32);
  const auto f = random_trig_field(g, 3, 31, 0);
  double prev = kInf;
  for (double d : {0.0625, 0.125, 0.25, 0.375, 0.5}) {
    const double r = observability_ratio(f, d).ratio;
    EXPECT_GE(r, 1.0 - 1e-14);
    EXPECT_LE(r, prev);
    prev = r;
  }
}

TEST(DoublingTimes, Ladder) {
  const auto t = doubling_times(0.1, 5);
  ASSERT_EQ(t.size(), 5u);
  EXPECT_DOUBLE_EQ(t[0], -0.01);
  for (double s : t) {
    EXPECT_LT(s, 0.0);
    EXPECT_GE(s, -0.01 * (1 + 1e-15));
  }
}

TEST(CheckDoubling, SingleModeZeroCoefficients) {
  const GridSpec g(1, 64);
  const double delta = choose_delta(0.25, unit()).delta;
  const auto times = doubling_times(delta, 5);
  SimulationConfig cfg;
  cfg.grid = g;
  cfg.t0 = -0.5;
  cfg.duration = 0.5;
  cfg.dt = 1e-3;
  cfg.sample_times = times;
  const auto tr = solve(cfg, cos1(g), Coefficients::zero());
  const auto r = check_doubling(tr, unit(), 0.25, times);
  EXPECT_TRUE(r.all_pass);
  ASSERT_EQ(r.verdicts.size(), 5u);
  for (const auto& v : r.verdicts) {
    EXPECT_NEAR(v.ratio, r.verdicts.front().ratio, 1e-10);
    EXPECT_GT(v.margin, 100.0);
  }
  EXPECT_DOUBLE_EQ(r.exponent, 2 * 0.0625 / (delta * delta));
  EXPECT_GE(r.exponent, r.choice.gamma);
  EXPECT_GE(r.exponent_poly, r.exponent);
}

TEST(Admissibility, ConstantFrozen) {
  EXPECT_EQ(admissibility_constant(1), 8.0);
  EXPECT_EQ(admissibility_constant(2), 16.0);
}
