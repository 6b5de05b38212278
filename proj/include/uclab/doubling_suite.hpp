#pragma once

#include <array>
#include <vector>

#include "uclab/frequency_tracker.hpp"
#include "uclab/heat_solver.hpp"

namespace uclab {

/// gamma(delta) = M1^2 + M0 + M1 M^{2 beta - 1} + M0 M^{2 alpha - 1} + M log(1/delta^2).
double gamma(double delta, const ExponentSet& exps);

/// Constant resolving the implicit factor in the admissibility condition on delta.
double admissibility_constant(int dim);

struct DeltaChoice {
  double delta = 0.0;
  /// sqrt(eps), d0/log(1/d0), d0^2/M^2 and the mixed-norm term, in that order.
  std::array<double, 4> terms{};
  double gamma = 0.0;
  /// 1/delta^2 against C log(1/delta)/d0^2 + C (gamma + 1)/d0^2.
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 0.0;
  bool admissible = false;
  /// delta < min(sqrt(eps), d0).
  bool below_scales = false;
};

DeltaChoice choose_delta(double delta0, const ExponentSet& exps);

struct ObservabilityRatio {
  double ratio = 0.0;
  /// Set when the ball norm vanishes; ratio is then +inf.
  bool empty_ball = false;
};

/// ||u||^2_{L^2(Omega)} / ||u||^2_{L^2(B_{delta0}(center))}.
ObservabilityRatio observability_ratio(const ScalarField& u, double delta0, const Point& center = {});

struct DoublingVerdict {
  double t = 0.0;
  double ratio = 0.0;
  double log_ratio = 0.0;
  /// Natural log of the bound, (n+1) d0^2 / delta^2.
  double log_bound = 0.0;
  double margin = 0.0;
  bool pass = false;
};

struct DoublingReport {
  double delta0 = 0.0;
  DeltaChoice choice;
  /// (n+1) d0^2 / delta^2.
  double exponent = 0.0;
  /// Sum form (n+1) d0^2 (1/eps + log^2(1/d0)/d0^2 + M^4/d0^4 + S^2/d0^2), a
  /// polynomial-type upper bound for the exponent.
  double exponent_poly = 0.0;
  std::vector<DoublingVerdict> verdicts;
  bool all_pass = false;
};

/// Sample times -delta^2 (1 - j/count), j = 0..count-1.
std::vector<double> doubling_times(double delta, int count = 5);

/// Compares the observability ratio at each time with exp((n+1) d0^2 / delta^2).
DoublingReport check_doubling(const Trajectory& traj, const ExponentSet& exps, double delta0,
                              const std::vector<double>& times, const Point& center = {});

}  // namespace uclab
