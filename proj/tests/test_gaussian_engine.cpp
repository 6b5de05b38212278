#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "uclab/gaussian_engine.hpp"
#include "uclab/heat_solver.hpp"

using namespace uclab;

namespace {

// Composite Simpson rule with n (even) panels; independent of the library.
double simpson(const std::function<double(double)>& f, double a, double b, int n = 200000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double g1(double x, double t) { return std::pow(-t, -0.5) * std::exp(-x * x / (4.0 * -t)); }

}  // namespace

TEST(GaussianWeight, CenterAndUnitExponent) {
  const BackwardGaussian g(2, {0.1, 0.2, 0}, -0.3);
  EXPECT_DOUBLE_EQ(gaussian_weight(g, {0.1, 0.2, 0}), std::pow(0.3, -1.0));
  const double r = std::sqrt(4.0 * 0.3);
  EXPECT_NEAR(gaussian_weight(g, {0.1 + r / std::sqrt(2.0), 0.2 + r / std::sqrt(2.0), 0}), std::exp(-1.0) / 0.3,
              1e-14);
}

TEST(GaussianWeight, RejectsNonnegativeTime) { EXPECT_THROW(BackwardGaussian(1, {}, 0.0), InvalidArgument); }

TEST(WeightedIntegral, MassOfConstant) {
  for (int n : {1, 2}) {
    const GridSpec g(n, n == 1 ? 64 : 32);
    for (double t : {-1e-3, -1e-2, -5e-2}) {
      const auto r = weighted_integral(ScalarField::constant(g, 1.0), BackwardGaussian(n, {0.07, -0.2, 0}, t));
      EXPECT_NEAR(r.value / gaussian_mass(n), 1.0, 1e-10) << n << " " << t;
      EXPECT_LE(r.truncation_bound, 1e-12);
    }
  }
}

TEST(WeightedIntegral, ZeroField) {
  const GridSpec g(1, 32);
  EXPECT_EQ(weighted_integral(ScalarField::constant(g, 0.0), BackwardGaussian(1, {}, -0.01)).value, 0.0);
}

TEST(WeightedIntegral, CosineAgainstDenseQuadrature) {
  const double t = -0.01;
  const double x0 = 0.21;
  const double oracle =
      simpson([&](double x) { return std::cos(2 * kPi * x) * g1(x - x0, t); }, x0 - 2.0, x0 + 2.0);
  // Frozen from the Simpson oracle above; the closed form agrees.
  EXPECT_NEAR(oracle, std::sqrt(4 * kPi) * std::exp(4 * kPi * kPi * t) * std::cos(2 * kPi * x0), 1e-12);
  const GridSpec g(1, 128);
  const auto f = ScalarField::sample(g, [](const Point& x) { return std::cos(2 * kPi * x[0]); });
  EXPECT_NEAR(weighted_integral(f, BackwardGaussian(1, {x0, 0, 0}, t)).value, oracle, 1e-10);
}

TEST(WeightedIntegral, ReportsUnreachableTolerance) {
  const GridSpec g(1, 32);
  LatticeQuadrature q;
  q.shells = 1;
  EXPECT_THROW(weighted_integral(ScalarField::constant(g, 1.0), BackwardGaussian(1, {}, -0.5), q), QuadratureError);
}

TEST(WeightedIntegral, SpectralRouteAgrees) {
  const GridSpec g(2, 32);
  const auto f = random_trig_field(g, 4, 3, 0);
  const BackwardGaussian G(2, {0.1, -0.3, 0}, -0.02);
  const auto s = spectral_gaussian_integrals(to_spectrum(f), G);
  EXPECT_NEAR(weighted_integral(f, G).value, s.mass, 1e-10);
  EXPECT_NEAR(weighted_first_moment(f, G, 1).value, s.first[1], 1e-10);
}

TEST(GaussianCorrelation, MatchesPointwiseIntegral) {
  const GridSpec g(1, 64);
  const auto f = random_trig_field(g, 5, 8, 0);
  const double t = -0.03;
  const auto c = gaussian_correlation(f, t);
  for (std::size_t i : {0u, 17u, 40u})
    EXPECT_NEAR(c[i], weighted_integral(f, BackwardGaussian(1, g.position(i), t)).value, 1e-12);
}

TEST(Moment, OddIndicesExactlyZero) {
  for (int n : {1, 2, 3}) {
    EXPECT_EQ(moment(n, {1, 0, 0}, 0, -0.4, kInf), 0.0);
    EXPECT_EQ(moment(n, {3, 0, 0}, 2, -1.7, kInf), 0.0);
  }
  EXPECT_EQ(moment(2, {2, 5, 0}, 1, -0.2, kInf), 0.0);
  EXPECT_EQ(moment(3, {0, 2, 1}, 0, -0.2, kInf), 0.0);
}

TEST(Moment, MassMatchesClosedForm) {
  for (int n : {1, 2, 3}) EXPECT_NEAR(moment(n, {0, 0, 0}, 0, -0.3, kInf) / gaussian_mass(n), 1.0, 1e-13);
}

TEST(Moment, SecondMomentAgainstDenseQuadrature) {
  const double t = -0.37;
  const double oracle = simpson([&](double x) { return x * x * g1(x, t); }, -20.0, 20.0);
  EXPECT_NEAR(oracle, 4.0 * std::sqrt(kPi) * 0.37, 1e-10);
  EXPECT_NEAR(moment(1, {2, 0, 0}, 0, t, kInf), oracle, 1e-10);
}

TEST(Moment, ScalingLaw) {
  const MultiIndex mus[] = {{0, 0, 0}, {2, 0, 0}, {4, 2, 0}, {2, 2, 2}, {6, 0, 0}};
  for (int n : {1, 2, 3})
    for (const auto& mu : mus)
      for (int l : {0, 1, 3})
        for (double s : {1e-3, 0.05, 3.0}) {
          int deg = 0;
          for (int a = 0; a < n; ++a) deg += mu[static_cast<std::size_t>(a)];
          const double ref = moment(n, mu, l, -1.0, kInf);
          const double v = moment(n, mu, l, -s, kInf);
          const double want = std::pow(s, l + 0.5 * deg) * ref;
          EXPECT_NEAR(v / want, 1.0, 1e-10);
        }
}

TEST(Moment, FiniteBallAgainstDenseQuadrature) {
  const double t = -0.2;
  const double R = 0.7;
  const double oracle = simpson([&](double x) { return x * x * x * x * g1(x, t); }, -R, R);
  EXPECT_NEAR(moment(1, {4, 0, 0}, 0, t, R), oracle, 1e-10);
}

TEST(Moment, FiniteBallIncreasesToFullMoment) {
  double prev = 0.0;
  for (double R : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    const double v = moment(2, {2, 0, 0}, 0, -0.1, R);
    EXPECT_GE(v, prev);
    prev = v;
  }
  EXPECT_NEAR(prev, moment(2, {2, 0, 0}, 0, -0.1, kInf), 1e-10);
}

TEST(TailBound, ZeroAmplitudeAndCertified) {
  EXPECT_EQ(tail_bound(1, 0.5, -0.1, 0.0), 0.0);
  for (int n : {1, 2, 3})
    for (double R : {0.3, 1.0, 2.0}) {
      const double t = -0.1;
      const double exact = moment(n, {0, 0, 0}, 0, t, kInf) - moment(n, {0, 0, 0}, 0, t, R);
      EXPECT_GE(tail_bound(n, R, t, 1.0), exact * (1 - 1e-12)) << n << " " << R;
    }
}

TEST(LatticeQuadrature, DefaultShells) {
  EXPECT_EQ(LatticeQuadrature::default_shells(-1e-6), 1);
  EXPECT_EQ(LatticeQuadrature::default_shells(-0.05), 4);
}
