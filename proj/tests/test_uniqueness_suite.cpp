#include <gtest/gtest.h>

#include <cmath>

#include "uclab/uniqueness_suite.hpp"

using namespace uclab;

namespace {

AnalyticSolution caloric(int m, int dim = 1) { return AnalyticSolution::from(caloric_polynomial(m, dim)); }

// Independent route for the start-point quotient: node-by-node lattice sums.
double brute_min_ratio(const ScalarField& u, double eps) {
  const auto g2 = gradient(u).squared_magnitude();
  const auto u2 = u * u;
  double best = kInf;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const BackwardGaussian G(u.spec().dim(), u.spec().position(i), -eps);
    const double den = weighted_integral(u2, G).value;
    if (den > 0.0) best = std::min(best, eps * weighted_integral(g2, G).value / den);
  }
  return best;
}

ScalarField bump(const GridSpec& g, const Point& c, double w) {
  return ScalarField::sample(g, [&](const Point& x) {
    const auto d = periodic_displacement(x, c, g.dim());
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) r2 += d[static_cast<std::size_t>(a)] * d[static_cast<std::size_t>(a)];
    return std::exp(-r2 / (2 * w * w));
  });
}

}  // namespace

TEST(StartPoint, ConstantField) {
  const auto s = select_start_point(ScalarField::constant(GridSpec(1, 64), 1.0), 0.1);
  EXPECT_TRUE(s.certified);
  EXPECT_NEAR(s.achieved_ratio, 0.0, 1e-14);
}

TEST(StartPoint, CosineMatchesExhaustiveSearch) {
  const GridSpec g(1, 64);
  const auto f = ScalarField::sample(g, [](const Point& x) { return std::cos(2 * kPi * x[0]); });
  const auto s = select_start_point(f, 0.02);
  EXPECT_TRUE(s.certified);
  EXPECT_NEAR(s.achieved_ratio, brute_min_ratio(f, 0.02), 1e-10);
  const double x = s.x_eps[0];
  EXPECT_TRUE(std::abs(x) < 1e-12 || std::abs(std::abs(x) - 0.5) < 1e-12);
}

TEST(StartPoint, BumpCenterWithinOneCell) {
  const GridSpec g(1, 64);
  const Point c{0.203125, 0, 0};
  const auto s = select_start_point(bump(g, c, 0.06), 0.005);
  EXPECT_TRUE(s.certified);
  EXPECT_LE(std::abs(periodic_displacement(s.x_eps, c, 1)[0]), g.spacing());
}

TEST(StartPoint, RandomFieldTwoDimensions) {
  const GridSpec g(2, 32);
  const auto f = random_trig_field(g, 3, 4, 0);
  const auto s = select_start_point(f, 0.03);
  EXPECT_TRUE(s.certified);
  EXPECT_LE(s.achieved_ratio, s.bound);
  EXPECT_NEAR(s.achieved_ratio, brute_min_ratio(f, 0.03), 1e-9 * std::max(1.0, s.achieved_ratio));
}

TEST(LineFit, ExactLine) {
  const auto f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_LT(f.max_residual, 1e-14);
  EXPECT_THROW(fit_line({1, 1}, {0, 1}), InvalidArgument);
}

TEST(Cylinder, CaloricOrders) {
  const double tol[] = {0.02, 0.05, 0.05, 0.05, 0.05};
  for (int m = 0; m <= 4; ++m) EXPECT_NEAR(vanishing_order_cylinder(caloric(m), {}, 0.0).order, m, tol[m]) << m;
}

TEST(Cylinder, ScaleInvariant) {
  const auto u = caloric(3);
  AnalyticSolution v = u;
  v.value = [u](const Point& x, double t) { return 1e3 * u.value(x, t); };
  v.gradient = [u](const Point& x, double t) {
    auto g = u.gradient(x, t);
    for (auto& c : g) c *= 1e3;
    return g;
  };
  EXPECT_NEAR(vanishing_order_cylinder(u, {}, 0.0).order, vanishing_order_cylinder(v, {}, 0.0).order, 1e-10);
}

TEST(Cylinder, ConstantNormClosedForm) {
  // |B_r| r^2 in one dimension: 2 r^3.
  EXPECT_NEAR(cylinder_norm(caloric(0), {}, 0.0, 0.25), std::sqrt(2 * std::pow(0.25, 3)), 1e-13);
}

TEST(Cylinder, TrajectoryMatchesClosedFormForConstant) {
  const GridSpec g(1, 32);
  SimulationConfig cfg;
  cfg.grid = g;
  cfg.t0 = -0.1;
  cfg.duration = 0.1;
  cfg.dt = 1e-2;
  for (double r : default_radii())
    for (double t : cylinder_time_nodes(0.0, r)) cfg.sample_times.push_back(t);
  const auto tr = solve(cfg, ScalarField::constant(g, 1.0), Coefficients::zero());
  const auto fit = vanishing_order_cylinder(tr, {}, 0.0);
  EXPECT_NEAR(fit.order, 0.0, 0.02);
}

TEST(Cylinder, AllZeroIsResolutionLimited) {
  AnalyticSolution z;
  z.dim = 1;
  z.value = [](const Point&, double) { return 0.0; };
  z.gradient = [](const Point&, double) { return Point{}; };
  const auto f = vanishing_order_cylinder(z, {}, 0.0);
  EXPECT_TRUE(f.resolution_limited);
}

TEST(GaussianSlope, CaloricOrders) {
  for (int m = 0; m <= 4; ++m) {
    const auto s = gaussian_samples(caloric(m), {}, 0.0, default_gaussian_times());
    EXPECT_NEAR(vanishing_order_gaussian(s).order, m, 0.05) << m;
  }
}

TEST(GaussianSlope, LinearExactlyOne) {
  // int x^2 G = 4 sqrt(pi) |t| gives a slope of exactly 1.
  std::vector<GaussianSample> s;
  for (double t : default_gaussian_times()) s.push_back({t, 4 * std::sqrt(kPi) * -t});
  EXPECT_NEAR(vanishing_order_gaussian(s).order, 1.0, 1e-12);
}

TEST(GaussianSlope, NeedsFiveSamplesAndPositiveValues) {
  std::vector<GaussianSample> s{{-0.1, 1}, {-0.01, 1}, {-0.001, 1}, {-1e-4, 1}};
  EXPECT_THROW(vanishing_order_gaussian(s), InvalidArgument);
  s.push_back({-1e-5, 0.0});
  EXPECT_THROW(vanishing_order_gaussian(s), InvalidArgument);
}

TEST(VanishingReport, EstimatorAgreement) {
  const auto exps = exponents(1, kInf, kInf, 1.0, 1.0);
  for (int m = 0; m <= 4; ++m) {
    const auto r = vanishing_report(caloric(m), {}, exps);
    EXPECT_LE(std::abs(r.d_cyl - r.m_gauss), 0.1);
    EXPECT_LE(std::abs(r.m_gauss - r.m_freq), 0.1);
    EXPECT_EQ(r.m_freq, m);
    EXPECT_TRUE(r.freq_stable);
    EXPECT_NEAR(2 * r.qbar_final, r.m_freq, 0.2);
    EXPECT_EQ(r.bound, exps.M);
  }
}

TEST(OrderBound, ConstantCoefficientFamily) {
  const auto exps = exponents(1, kInf, kInf, 1.0, 1.0);
  const auto r = vanishing_report(caloric(4), {}, exps);
  // Degree 4 over the bound M = 2: any c above 2 leaves room for fit error.
  const auto v = verify_order_bound(r, exps, 2.5);
  EXPECT_TRUE(v.pass);
  EXPECT_GE(v.margin, 0.0);
  EXPECT_FALSE(verify_order_bound(r, exps, 1.0).pass);
}

TEST(FitConstant, SmallestDominatingConstant) {
  EXPECT_DOUBLE_EQ(fit_constant({1, 4, 3}, {1, 2, 6}), 2.0);
}
