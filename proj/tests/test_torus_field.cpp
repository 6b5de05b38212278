#include <gtest/gtest.h>

#include <cmath>

#include "uclab/heat_solver.hpp"
#include "uclab/torus_field.hpp"

using namespace uclab;

namespace {

ScalarField cos1(const GridSpec& g) {
  return ScalarField::sample(g, [](const Point& x) { return std::cos(2.0 * kPi * x[0]); });
}

double max_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST(GridSpec, NodesAndOrdering) {
  const GridSpec g(2, 16);
  EXPECT_EQ(g.size(), 256u);
  EXPECT_DOUBLE_EQ(g.node(0), -0.5);
  EXPECT_DOUBLE_EQ(g.node(8), 0.0);
  const auto p = g.position(1);
  EXPECT_DOUBLE_EQ(p[0], -0.5);
  EXPECT_DOUBLE_EQ(p[1], -0.4375);
  EXPECT_THROW(GridSpec(4, 16), InvalidArgument);
  EXPECT_THROW(GridSpec(2, 8), InvalidArgument);
  EXPECT_THROW(GridSpec(2, 24), InvalidArgument);
}

TEST(LpNorm, ConstantAnyExponent) {
  for (int n : {1, 2, 3}) {
    const GridSpec g(n, 16);
    for (double p : {1.0, 1.5, 2.0, 7.0, kInf}) EXPECT_NEAR(lp_norm(ScalarField::constant(g, -2.5), p), 2.5, 1e-13);
  }
}

TEST(LpNorm, CosineValues) {
  const GridSpec g(1, 64);
  EXPECT_NEAR(lp_norm(cos1(g), 2.0), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_DOUBLE_EQ(lp_norm(cos1(g), kInf), 1.0);
}

TEST(LpNorm, NondecreasingInExponent) {
  const GridSpec g(2, 32);
  const auto f = random_trig_field(g, 3, 5, 1);
  double prev = 0.0;
  for (double p : {1.0, 1.5, 2.0, 3.0, 6.0, 20.0, kInf}) {
    const double v = lp_norm(f, p);
    EXPECT_GE(v, prev - 1e-14);
    prev = v;
  }
}

TEST(Gradient, ConstantAndSine) {
  const GridSpec g(2, 32);
  const auto z = gradient(ScalarField::constant(g, 3.0));
  EXPECT_LT(lp_norm(z, kInf), 1e-12);
  const auto s = ScalarField::sample(g, [](const Point& x) { return std::sin(2.0 * kPi * x[0]); });
  const auto gs = gradient(s);
  EXPECT_LT(max_diff(gs[0], cos1(g).scaled(2.0 * kPi)), 1e-11);
  EXPECT_LT(lp_norm(gs[1], kInf), 1e-12);
}

TEST(Laplacian, CosineEigenfunction) {
  const GridSpec g(1, 64);
  EXPECT_LT(max_diff(laplacian(cos1(g)), cos1(g).scaled(-4.0 * kPi * kPi)), 1e-10);
  EXPECT_LT(lp_norm(laplacian(ScalarField::constant(g, 1.0)), kInf), 1e-12);
}

TEST(Divergence, OfGradientIsLaplacian) {
  const GridSpec g(2, 32);
  const auto f = random_trig_field(g, 4, 2, 0);
  EXPECT_LT(max_diff(divergence(gradient(f)), laplacian(f)), 1e-9);
}

TEST(BallNorm, ConstantHalfLengthAndFullPeriod) {
  const GridSpec g(1, 64);
  EXPECT_NEAR(ball_l2_norm(ScalarField::constant(g, 1.0), {}, 0.25), std::sqrt(0.5), 1e-14);
  const auto f = random_trig_field(g, 3, 9, 0);
  double fmax = lp_norm(f, kInf);
  EXPECT_NEAR(ball_l2_norm(f, {}, 0.5), lp_norm(f, 2.0), fmax * std::sqrt(g.spacing()));
}

TEST(BallNorm, SupportOutsideBall) {
  const GridSpec g(1, 64);
  const auto f = ScalarField::sample(g, [](const Point& x) { return std::abs(x[0]) > 0.3 ? 1.0 : 0.0; });
  EXPECT_EQ(ball_l2_norm(f, {}, 0.25), 0.0);
}

TEST(BallNorm, PeriodicWrap) {
  const GridSpec g(1, 64);
  const auto f = ScalarField::constant(g, 1.0);
  EXPECT_NEAR(ball_l2_norm(f, {0.45, 0, 0}, 0.125), ball_l2_norm(f, {}, 0.125), 1e-14);
}

TEST(DirichletQuotient, CosineAndConstant) {
  const GridSpec g(1, 64);
  EXPECT_NEAR(dirichlet_quotient(cos1(g)), 4.0 * kPi * kPi, 1e-10);
  EXPECT_NEAR(dirichlet_quotient(ScalarField::constant(g, 2.0)), 0.0, 1e-20);
}

TEST(Spectrum, RoundTrip) {
  const GridSpec g(3, 16);
  const auto f = random_trig_field(g, 3, 4, 2);
  EXPECT_LT(max_diff(from_spectrum(to_spectrum(f)), f), 1e-13);
}

TEST(Spectrum, InterpolantReproducesModes) {
  const GridSpec g(2, 16);
  const auto f = ScalarField::sample(g, [](const Point& x) { return std::cos(2 * kPi * x[0]) * std::sin(4 * kPi * x[1]); });
  const auto s = to_spectrum(f);
  const Point x{0.1234, -0.377, 0.0};
  EXPECT_NEAR(interpolate(s, x), std::cos(2 * kPi * x[0]) * std::sin(4 * kPi * x[1]), 1e-13);
}

TEST(Spectrum, SignedModeNyquistPositive) {
  EXPECT_EQ(signed_mode(0, 8), 0);
  EXPECT_EQ(signed_mode(3, 8), 3);
  EXPECT_EQ(signed_mode(4, 8), 4);
  EXPECT_EQ(signed_mode(5, 8), -3);
}

TEST(Spectrum, ProductSpectrumExact) {
  const GridSpec g(1, 32);
  const auto a = random_trig_field(g, 10, 1, 0);
  const auto b = random_trig_field(g, 10, 1, 1);
  const auto ps = product_spectrum(a, b);
  const auto sa = to_spectrum(a);
  const auto sb = to_spectrum(b);
  for (double x : {-0.4111, 0.03, 0.29}) {
    const Point p{x, 0, 0};
    EXPECT_NEAR(interpolate(ps, p), interpolate(sa, p) * interpolate(sb, p), 1e-12);
  }
}

TEST(PeriodicDisplacement, WrapsIntoPrincipalCell) {
  const auto d = periodic_displacement({0.45, -0.45, 0}, {-0.45, 0.45, 0}, 2);
  EXPECT_NEAR(d[0], -0.1, 1e-15);
  EXPECT_NEAR(d[1], 0.1, 1e-15);
}
