#include <gtest/gtest.h>

#include <cmath>

#include "uclab/frequency_tracker.hpp"
#include "uclab/gaussian_engine.hpp"

using namespace uclab;

namespace {

SimilarityState hermite_state(int m, int dim = 1, Point drift = {}) {
  const auto h = hermite_data(m, dim);
  return SimilarityState::from_function(default_ygrid(dim), 0.0, [&](const Point& y) { return h(y); }, drift);
}

AnalyticSolution caloric(int m, int dim = 1) { return AnalyticSolution::from(caloric_polynomial(m, dim)); }

}  // namespace

TEST(Exponents, SharpCaseExact) {
  for (int n : {1, 2, 3}) {
    const auto e = exponents(n, kInf, kInf, 2.0, 3.0);
    EXPECT_EQ(e.a, 2.0 / 3.0);
    EXPECT_EQ(e.b, 2.0);
    EXPECT_DOUBLE_EQ(e.M, std::pow(2.0, 2.0 / 3.0) + 9.0);
    EXPECT_DOUBLE_EQ(e.eps, 1.0 / (2.0 * e.M));
    EXPECT_DOUBLE_EQ(e.tau0, std::log(1.0 / e.eps));
  }
}

TEST(Exponents, DirectEvaluation) {
  const auto e = exponents(3, 3.0, 12.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(e.alpha, 0.5);
  EXPECT_DOUBLE_EQ(e.beta, 0.625);
  EXPECT_NEAR(e.a, 2.0, 1e-14);
  EXPECT_NEAR(e.b, 4.0, 1e-14);
}

TEST(Exponents, DefaultBoundGivesQuarterEps) {
  const auto e = exponents(1, kInf, kInf, 1.0, 1.0);
  EXPECT_EQ(e.M, 2.0);
  EXPECT_EQ(e.eps, 0.25);
}

TEST(Exponents, TemporalLimitRecoversSpatial) {
  const auto s = exponents(2, 4.0, 8.0, 2.0, 3.0);
  const auto t = exponents(2, 4.0, 8.0, 2.0, 3.0, 1e15, 1e15);
  EXPECT_NEAR(t.a, s.a, 1e-12);
  EXPECT_NEAR(t.b, s.b, 1e-12);
}

TEST(Exponents, MonotoneInAlphaAndBeta) {
  double prev_a = 0.0;
  double prev_b = 0.0;
  for (double p : {200.0, 20.0, 8.0, 5.0, 3.5}) {
    const auto e = exponents(2, p, 4.0 * p, 1.0, 1.0);
    EXPECT_GT(e.a, prev_a);
    EXPECT_GT(e.b, prev_b);
    prev_a = e.a;
    prev_b = e.b;
  }
}

TEST(Exponents, GatesNameTheInequality) {
  EXPECT_THROW(exponents(3, 2.0, kInf, 1, 1), GateViolation);
  EXPECT_THROW(exponents(3, kInf, 6.0, 1, 1), GateViolation);
  EXPECT_THROW(exponents(1, 1.5, kInf, 1, 1), GateViolation);
  EXPECT_THROW(exponents(1, kInf, 3.0, 1, 1), GateViolation);
  EXPECT_THROW(exponents(1, kInf, kInf, 0.5, 1), GateViolation);
  try {
    exponents(3, 2.0, kInf, 1, 1);
  } catch (const GateViolation& e) {
    EXPECT_NE(std::string(e.what()).find("p"), std::string::npos);
  }
}

TEST(Exponents, MixedNormGate) {
  EXPECT_NO_THROW(exponents(2, kInf, kInf, 1, 1, 10.0, 10.0));
  EXPECT_THROW(exponents(2, kInf, kInf, 1, 1, 1.5, 10.0), GateViolation);
}

TEST(Similarity, ConstantGivesGroundState) {
  const auto U = to_similarity(caloric(0), 1.3, {});
  for (std::size_t j = 0; j < U.values.size(); j += 17) {
    const double y = U.grid.node(static_cast<int>(j));
    EXPECT_NEAR(U.values[j], std::exp(-y * y / 8), 1e-15);
  }
}

TEST(Similarity, LinearGivesFirstState) {
  const double tau = 0.8;
  const auto U = to_similarity(caloric(1), tau, {});
  for (std::size_t j = 3; j < U.values.size(); j += 23) {
    const double y = U.grid.node(static_cast<int>(j));
    EXPECT_NEAR(U.values[j], std::exp(-tau / 2) * y * std::exp(-y * y / 8), 1e-14);
  }
}

TEST(ApplyH, HermiteEigenvalues) {
  for (int m = 0; m <= 6; ++m) {
    const auto U = hermite_state(m);
    const auto HU = apply_H(U);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < HU.size(); ++i) {
      num += std::pow(HU[i] - 0.5 * m * U.values[i], 2);
      den += U.values[i] * U.values[i];
    }
    EXPECT_LT(std::sqrt(num / den), 1e-8) << m;
  }
}

TEST(ApplyH, TwoDimensionalEigenvalue) {
  const auto h = HermiteData(2, {2, 1, 0});
  const auto U = SimilarityState::from_function(default_ygrid(2), 0.0, [&](const Point& y) { return h(y); });
  EXPECT_NEAR(frequency(U), 1.5, 1e-8);
}

TEST(ApplyH, ZeroState) {
  auto U = hermite_state(0);
  std::fill(U.values.begin(), U.values.end(), 0.0);
  for (double v : apply_H(U)) EXPECT_EQ(v, 0.0);
}

TEST(ApplyH, MutatedShiftBreaksEigenvalues) {
  EXPECT_GT(std::abs(frequency(hermite_state(2), 1.0 / 3.0) - 1.0), 1e-2);
}

TEST(ApplyH, RejectsUndecayedState) {
  const auto U = SimilarityState::from_function(default_ygrid(1), 0.0, [](const Point&) { return 1.0; });
  EXPECT_THROW(apply_H(U), DecayError);
}

TEST(ModifiedFrequency, EigenfunctionsZeroDrift) {
  for (int m = 0; m <= 6; ++m) EXPECT_NEAR(modified_frequency(hermite_state(m)), 0.5 * m, 1e-8);
}

TEST(ModifiedFrequency, EvenStateIgnoresDrift) {
  const auto U = hermite_state(2, 1, {3.0, 0, 0});
  EXPECT_NEAR(modified_frequency(U), frequency(U), 1e-12);
}

TEST(ModifiedFrequency, ZeroDriftEqualsQ) {
  const auto U = hermite_state(3);
  EXPECT_EQ(modified_frequency(U), frequency(U));
}

TEST(FrequencyPhysical, ConstantAndLinear) {
  const GridSpec g(1, 64);
  EXPECT_NEAR(frequency_physical(ScalarField::constant(g, 2.0), -0.01, {}), 0.0, 1e-14);
  for (double t : {-0.9, -0.05, -1e-3}) EXPECT_NEAR(frequency_physical(caloric(1), t, {}), 0.5, 1e-12);
}

TEST(FrequencyPhysical, QuadraticTendsToOne) {
  // Frozen oracle: |t| int (2x)^2 G / int (x^2 + 2t)^2 G = 4 * 2|t|^2 / (8|t|^2) = 1 at every t.
  for (double t : {-0.5, -0.01, -1e-4}) EXPECT_NEAR(frequency_physical(caloric(2), t, {}), 1.0, 1e-10);
}

TEST(FrequencyPhysical, LatticeAndSpectralRoutesAgree) {
  const GridSpec g(2, 32);
  const auto f = random_trig_field(g, 3, 21, 0);
  const double a = frequency_physical(f, -0.02, {0.1, -0.1, 0}, QuadratureRoute::Lattice);
  const double b = frequency_physical(f, -0.02, {0.1, -0.1, 0}, QuadratureRoute::Spectral);
  EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, std::abs(a)));
}

TEST(SpectrumDistance, Examples) {
  EXPECT_EQ(spectrum_distance(1.0), 0.0);
  EXPECT_NEAR(spectrum_distance(0.3), 0.2, 1e-15);
  EXPECT_NEAR(spectrum_distance(-0.1), 0.1, 1e-15);
  EXPECT_NEAR(spectrum_distance(2.74), 0.24, 1e-14);
}

TEST(LimitMode, CaloricAndConstantTraces) {
  const auto taus = tau_ladder(1.0, 3.0);
  for (int m : {0, 2}) {
    const auto lm = limit_mode(trace_analytic(caloric(m), taus, {}, {}, 0.25));
    EXPECT_EQ(lm.m, m);
    EXPECT_TRUE(lm.stable);
    EXPECT_GE(lm.window_samples, 20u);
  }
}

TEST(LimitMode, ThresholdFlagsOffSpectrum) {
  FrequencyTrace tr;
  for (double tau : tau_ladder(0.0, 3.0)) tr.append({tau, 1.0, 0.26, 0.26, spectrum_distance(0.26)});
  const auto lm = limit_mode(tr);
  EXPECT_EQ(lm.m, 1);
  EXPECT_FALSE(lm.stable);
  EXPECT_NEAR(lm.max_distance, 0.24, 1e-12);
}

TEST(LimitMode, RequiresTwoUnitsOfTau) {
  FrequencyTrace tr;
  for (double tau : tau_ladder(0.0, 3.0)) {
    if (tau > 1.5) break;
    tr.append({tau, 1.0, 0.5, 0.5, 0.0});
  }
  EXPECT_THROW(limit_mode(tr), InvalidArgument);
}

TEST(NormIdentity, CaloricExactPaths) {
  for (int m = 0; m <= 4; ++m)
    for (double tau : {0.3, 2.0, 5.0})
      EXPECT_LT(norm_identity_residual(to_similarity(caloric(m), tau, {}), caloric(m), -std::exp(-tau), {}), 1e-8);
}

TEST(NormIdentity, ConstantMassMatches) {
  const auto U = to_similarity(caloric(0), 1.0, {});
  EXPECT_NEAR(U.norm2(), gaussian_mass(1), 1e-10);
}

TEST(NormIdentity, RandomTorusField) {
  for (int dim : {1, 2}) {
    const GridSpec g(dim, dim == 1 ? 64 : 32);
    const auto f = random_trig_field(g, 3, 77, static_cast<std::uint64_t>(dim));
    EXPECT_LT(norm_identity_residual(to_similarity(f, -std::log(0.01), {}), f, -0.01, {}), 1e-6) << dim;
  }
}

TEST(Trace, PureHeatConstancyAndEnergyIdentity) {
  const auto taus = tau_ladder(std::log(4.0), 3.0);
  for (int m = 0; m <= 4; ++m) {
    const auto tr = trace_analytic(caloric(m), taus, {}, {}, 0.25);
    for (const auto& s : tr.samples) EXPECT_NEAR(s.Qbar, 0.5 * m, 1e-6);
    EXPECT_LT(energy_identity_residual(tr), 1e-6);
  }
}

TEST(Trace, MovingCenterEndpoints) {
  const Point x0{0.1, 0, 0};
  const Point xe{0.3, 0, 0};
  const auto c0 = moving_center(x0, xe, 0.2, -0.2, 1);
  const auto c1 = moving_center(x0, xe, 0.2, 0.0, 1);
  EXPECT_NEAR(c0[0], 0.3, 1e-15);
  EXPECT_NEAR(c1[0], 0.1, 1e-15);
  EXPECT_NEAR(drift_vector(x0, xe, 0.2, 1)[0], -1.0, 1e-15);
}

TEST(TauLadder, UniformAndComplete) {
  const auto t = tau_ladder(2.0, 3.0, 20);
  EXPECT_EQ(t.size(), 61u);
  EXPECT_DOUBLE_EQ(t.front(), 2.0);
  EXPECT_NEAR(t.back(), 5.0, 1e-14);
}
