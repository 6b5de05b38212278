#include "uclab/doubling_suite.hpp"

#include <algorithm>
#include <cmath>

namespace uclab {
namespace {

double mixed_term(const ExponentSet& e) {
  const double s0 = std::sqrt(e.M0);
  return e.M1 + s0 + std::pow(e.M, e.beta - 0.5) * s0 + s0 * std::pow(e.M, e.alpha - 0.5);
}

void check_delta0(double delta0) {
  if (!(delta0 > 0.0) || delta0 > 0.5) throw InvalidArgument("delta0 must lie in (0, 1/2]");
}

}  // namespace

double gamma(double delta, const ExponentSet& e) {
  if (!(delta > 0.0) || !(delta < 1.0)) throw InvalidArgument("gamma needs delta in (0, 1)");
  return e.M1 * e.M1 + e.M0 + e.M1 * std::pow(e.M, 2.0 * e.beta - 1.0) +
         e.M0 * std::pow(e.M, 2.0 * e.alpha - 1.0) + e.M * std::log(1.0 / (delta * delta));
}

double admissibility_constant(int dim) { return 8.0 * dim; }

DeltaChoice choose_delta(double delta0, const ExponentSet& e) {
  check_delta0(delta0);
  DeltaChoice c;
  c.terms = {std::sqrt(e.eps), delta0 / std::log(1.0 / delta0), delta0 * delta0 / (e.M * e.M),
             delta0 / mixed_term(e)};
  c.delta = *std::min_element(c.terms.begin(), c.terms.end());
  c.gamma = gamma(c.delta, e);
  c.constant = admissibility_constant(e.dim);
  const double d02 = delta0 * delta0;
  c.lhs = 1.0 / (c.delta * c.delta);
  c.rhs = c.constant * std::log(1.0 / c.delta) / d02 + c.constant * (c.gamma + 1.0) / d02;
  c.admissible = c.lhs >= c.rhs;
  c.below_scales = c.delta < std::min(std::sqrt(e.eps), delta0);
  return c;
}

ObservabilityRatio observability_ratio(const ScalarField& u, double delta0, const Point& center) {
  check_delta0(delta0);
  const double total = lp_norm(u, 2.0);
  const double ball = ball_l2_norm(u, center, delta0);
  if (!(ball > 0.0)) return {kInf, true};
  return {(total * total) / (ball * ball), false};
}

std::vector<double> doubling_times(double delta, int count) {
  if (count < 1) throw InvalidArgument("need at least one doubling time");
  std::vector<double> t;
  for (int j = 0; j < count; ++j) t.push_back(-delta * delta * (1.0 - static_cast<double>(j) / count));
  return t;
}

DoublingReport check_doubling(const Trajectory& traj, const ExponentSet& e, double delta0,
                              const std::vector<double>& times, const Point& center) {
  DoublingReport r;
  r.delta0 = delta0;
  r.choice = choose_delta(delta0, e);
  const double d02 = delta0 * delta0;
  const double delta = r.choice.delta;
  r.exponent = (e.dim + 1) * d02 / (delta * delta);
  const double log_term = std::log(1.0 / delta0);
  const double s = mixed_term(e);
  r.exponent_poly = (e.dim + 1) * d02 *
                    (1.0 / e.eps + log_term * log_term / d02 + std::pow(e.M, 4) / (d02 * d02) + s * s / d02);
  r.all_pass = true;
  for (double t : times) {
    DoublingVerdict v;
    v.t = t;
    const auto obs = observability_ratio(traj.at(t), delta0, center);
    v.ratio = obs.ratio;
    v.log_ratio = std::log(obs.ratio);
    v.log_bound = r.exponent;
    v.margin = v.log_bound - v.log_ratio;
    v.pass = !obs.empty_ball && v.log_ratio <= v.log_bound;
    r.all_pass = r.all_pass && v.pass;
    r.verdicts.push_back(v);
  }
  return r;
}

}  // namespace uclab
