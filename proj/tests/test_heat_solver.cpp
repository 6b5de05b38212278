#include <gtest/gtest.h>

#include <cmath>

#include "uclab/heat_solver.hpp"

using namespace uclab;

namespace {

ScalarField cos1(const GridSpec& g) {
  return ScalarField::sample(g, [](const Point& x) { return std::cos(2.0 * kPi * x[0]); });
}

double rel_l2(const ScalarField& a, const ScalarField& b) { return lp_norm(a - b, 2.0) / lp_norm(b, 2.0); }

SimulationConfig short_run(const GridSpec& g, double dt) {
  SimulationConfig c;
  c.grid = g;
  c.t0 = -0.1;
  c.duration = 0.1;
  c.dt = dt;
  return c;
}

}  // namespace

TEST(Step, PureHeatModeDecay) {
  const GridSpec g(1, 64);
  const double dt = 2e-3;
  const auto u = step(cos1(g), -1.0, dt, Coefficients::zero());
  EXPECT_LT(lp_norm(u - cos1(g).scaled(std::exp(-4 * kPi * kPi * dt)), kInf), 1e-12);
}

TEST(Step, ZeroStaysZero) {
  const GridSpec g(2, 16);
  const auto u = step(ScalarField::constant(g, 0.0), -1.0, 1e-3, Coefficients::constant(g, 3.0));
  EXPECT_EQ(lp_norm(u, kInf), 0.0);
}

TEST(Step, ConstantPotentialIntegratingFactor) {
  const GridSpec g(1, 64);
  const auto u0 = random_trig_field(g, 4, 1, 0);
  const double lambda = 1.5;
  for (double dt : {1e-2, 1e-3}) {
    const auto heat = step(u0, -1.0, dt, Coefficients::zero());
    const auto full = step(u0, -1.0, dt, Coefficients::constant(g, lambda));
    EXPECT_LT(rel_l2(full, heat.scaled(std::exp(lambda * dt))), 10 * dt * dt);
  }
}

TEST(Solve, ModeDecayAtFineStep) {
  const GridSpec g(1, 128);
  const auto tr = solve(short_run(g, 1e-4), cos1(g), Coefficients::zero());
  EXPECT_LT(rel_l2(tr.final(), cos1(g).scaled(std::exp(-0.4 * kPi * kPi))), 1e-8);
}

TEST(Solve, ConstantDataStaysConstant) {
  const GridSpec g(2, 16);
  const auto tr = solve(short_run(g, 1e-3), ScalarField::constant(g, 1.0), Coefficients::zero());
  EXPECT_LT(lp_norm(tr.final() - ScalarField::constant(g, 1.0), kInf), 1e-13);
}

TEST(Solve, ConstantPotentialAnalytic) {
  const GridSpec g(1, 128);
  const double lambda = -3.0;
  const auto tr = solve(short_run(g, 1e-4), cos1(g), Coefficients::constant(g, lambda));
  EXPECT_LT(rel_l2(tr.final(), cos1(g).scaled(std::exp((lambda - 4 * kPi * kPi) * 0.1))), 1e-6);
}

TEST(Solve, StrangSecondOrderInTime) {
  const GridSpec g(1, 32);
  RandomTrigSpec s;
  s.seed = 3;
  s.M0 = 3;
  s.M1 = 2;
  const auto c = random_trig_coefficients(s, g);
  const auto u0 = random_trig_field(g, 3, 3, 99);
  const auto ref = solve(short_run(g, 1.25e-5), u0, c).final();
  const double e1 = rel_l2(solve(short_run(g, 2e-3), u0, c).final(), ref);
  const double e2 = rel_l2(solve(short_run(g, 1e-3), u0, c).final(), ref);
  EXPECT_GT(e1 / e2, 3.0);
}

TEST(Solve, RecordsRequestedTimes) {
  const GridSpec g(1, 32);
  auto cfg = short_run(g, 1e-2);
  cfg.sample_times = {-0.0537, -0.001};
  const auto tr = solve(cfg, cos1(g), Coefficients::zero());
  EXPECT_NO_THROW(tr.at(-0.0537));
  EXPECT_NO_THROW(tr.at(-0.001));
  EXPECT_THROW(tr.at(-0.05), InvalidArgument);
  EXPECT_LT(rel_l2(tr.at(-0.0537), cos1(g).scaled(std::exp(-4 * kPi * kPi * (0.1 - 0.0537)))), 1e-12);
}

TEST(Solve, BlowUpDetected) {
  const GridSpec g(1, 16);
  auto cfg = short_run(g, 1e-3);
  cfg.duration = 0.1;
  EXPECT_THROW(solve(cfg, ScalarField::constant(g, 1.0), Coefficients::constant(g, 400.0)), BlowUpError);
}

TEST(RandomTrig, NormsHitTargets) {
  const GridSpec g(2, 32);
  RandomTrigSpec s;
  s.seed = 11;
  s.M0 = 4;
  s.M1 = 2;
  s.p = 3;
  s.q = 6;
  const auto c = random_trig_coefficients(s, g);
  for (double t : {-0.9, -0.3, -0.01}) {
    EXPECT_NEAR(lp_norm(c.v(t), 3.0), 4.0, 1e-12);
    EXPECT_NEAR(lp_norm(c.w(t), 6.0), 2.0, 1e-12);
  }
}

TEST(RandomTrig, DeterministicPerSeedAndRun) {
  const GridSpec g(1, 32);
  RandomTrigSpec s;
  s.seed = 5;
  s.run = 2;
  const auto a = random_trig_coefficients(s, g).v(-0.4);
  const auto b = random_trig_coefficients(s, g).v(-0.4);
  EXPECT_EQ(a.values(), b.values());
  s.run = 3;
  EXPECT_NE(random_trig_coefficients(s, g).v(-0.4).values(), a.values());
}

TEST(MeasureNorms, SupremumInTime) {
  const GridSpec g(1, 32);
  auto c = Coefficients::constant(g, 2.5);
  measure_norms(c, {-1.0, -0.5});
  EXPECT_NEAR(c.M0, 2.5, 1e-14);
  EXPECT_EQ(c.M1, 1.0);
}

TEST(CaloricPolynomial, LowDegreesClosedForm) {
  const Point x{0.7, 0, 0};
  const double t = -0.3;
  EXPECT_DOUBLE_EQ(caloric_polynomial(0, 1)(x, t), 1.0);
  EXPECT_DOUBLE_EQ(caloric_polynomial(1, 1)(x, t), 0.7);
  EXPECT_NEAR(caloric_polynomial(2, 1)(x, t), 0.49 + 2 * t, 1e-15);
  EXPECT_NEAR(caloric_polynomial(3, 1)(x, t), 0.343 + 6 * 0.7 * t, 1e-15);
  EXPECT_NEAR(caloric_polynomial(4, 1)(x, t), std::pow(0.7, 4) + 12 * 0.49 * t + 12 * t * t, 1e-14);
}

TEST(CaloricPolynomial, SolvesHeatEquation) {
  // Exact derivative identities: d/dx p_k = k p_{k-1}, d/dt p_k = k(k-1) p_{k-2}.
  for (int k = 2; k <= 6; ++k)
    for (double x : {-1.1, 0.3})
      for (double t : {-0.8, -0.05}) {
        const double uxx = k * (k - 1) * CaloricPolynomial::p(k - 2, x, t);
        // Five-point stencil is exact for the cubic-in-t dependence up to k = 6.
        const double h = 1e-3;
        const auto p = [&](double s) { return CaloricPolynomial::p(k, x, s); };
        const double ut = (p(t - 2 * h) - 8 * p(t - h) + 8 * p(t + h) - p(t + 2 * h)) / (12 * h);
        EXPECT_NEAR(ut, uxx, 1e-9);
      }
}

TEST(CaloricPolynomial, ParabolicHomogeneity) {
  const double lam = 0.37;
  for (int m = 0; m <= 6; ++m) {
    const auto p = caloric_polynomial(m, 2);
    EXPECT_NEAR(p({lam * 0.4, lam * -0.2, 0}, lam * lam * -0.6), std::pow(lam, m) * p({0.4, -0.2, 0}, -0.6), 1e-13);
  }
}

TEST(CaloricPolynomial, GradientMatchesDifference) {
  const CaloricPolynomial p(2, {2, 3, 0});
  const Point x{0.3, -0.4, 0};
  const double h = 1e-6;
  const auto g = p.gradient(x, -0.2);
  EXPECT_NEAR(g[0], (p({0.3 + h, -0.4, 0}, -0.2) - p({0.3 - h, -0.4, 0}, -0.2)) / (2 * h), 1e-8);
  EXPECT_NEAR(g[1], (p({0.3, -0.4 + h, 0}, -0.2) - p({0.3, -0.4 - h, 0}, -0.2)) / (2 * h), 1e-8);
}

TEST(HermiteData, GroundAndFirstStates) {
  for (double y : {-2.0, 0.0, 0.7, 3.0}) {
    EXPECT_NEAR(hermite_data(0, 1)({y, 0, 0}), std::exp(-y * y / 8), 1e-15);
    // H_1(y/2) = y.
    EXPECT_NEAR(hermite_data(1, 1)({y, 0, 0}), y * std::exp(-y * y / 8), 1e-15);
  }
}

TEST(HermiteData, OddVanishAtOrigin) {
  for (int m : {1, 3, 5, 7}) EXPECT_EQ(hermite_data(m, 1)({0, 0, 0}), 0.0);
}

TEST(HermiteData, PolynomialRecurrence) {
  for (double x : {-1.3, 0.4, 2.2})
    for (int k = 1; k < 8; ++k)
      EXPECT_NEAR(HermiteData::hermite(k + 1, x), 2 * x * HermiteData::hermite(k, x) - 2 * k * HermiteData::hermite(k - 1, x),
                  1e-9 * std::abs(HermiteData::hermite(k + 1, x)) + 1e-12);
}
