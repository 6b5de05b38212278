#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "uclab/gaussian_engine.hpp"
#include "uclab/torus_field.hpp"

namespace uclab {

using ScalarSampler = std::function<ScalarField(double)>;
using VectorSampler = std::function<VectorField(double)>;

/// Lower-order coefficients of  u_t - Lap u = w . grad u + v u.
/// Empty samplers stand for identically zero coefficients.
struct Coefficients {
  ScalarSampler v;
  VectorSampler w;
  double p = kInf;
  double q = kInf;
  std::optional<double> p2;
  std::optional<double> q2;
  double M0 = 1.0;
  double M1 = 1.0;

  static Coefficients zero();
  /// v == lambda, w == 0; M0 = max(1, |lambda|).
  static Coefficients constant(const GridSpec& grid, double lambda);
};

/// Recomputes M0 and M1 from samples of the coefficients at `times`: the
/// supremum of the spatial norm, or its discrete L^{p2} (L^{q2}) norm in time
/// when temporal exponents are present. Both are floored at 1.
void measure_norms(Coefficients& c, const std::vector<double>& times);

struct RandomTrigSpec {
  std::uint64_t seed = 0;
  std::uint64_t run = 0;
  /// Modes with |k|_inf <= mode_cap.
  int mode_cap = 3;
  double M0 = 1.0;
  double M1 = 1.0;
  double p = kInf;
  double q = kInf;
  std::optional<double> p2;
  std::optional<double> q2;
  /// Temporal angular frequency of the slice rotation A cos(wt) + B sin(wt).
  double omega = 2.0 * kPi;
};

/// Random band-limited coefficients rescaled per time slice so that
/// lp_norm(v(t), p) == M0 and lp_norm(|w(t)|, q) == M1 exactly.
Coefficients random_trig_coefficients(const RandomTrigSpec& spec, const GridSpec& grid);

/// Random band-limited field with modes |k|_inf <= mode_cap, unnormalized.
ScalarField random_trig_field(const GridSpec& grid, int mode_cap, std::uint64_t seed, std::uint64_t stream);

enum class Scheme { Lie, Strang };

struct SimulationConfig {
  GridSpec grid{1, 64};
  double t0 = -1.0;
  double duration = 1.0;
  double dt = 1e-3;
  Scheme scheme = Scheme::Strang;
  /// Extra times to record; T0 and T0 + T are always recorded. Steps are
  /// shortened so that every sample time is hit exactly.
  std::vector<double> sample_times;
};

class BlowUpError : public std::runtime_error {
 public:
  explicit BlowUpError(double time);
  double time() const { return time_; }

 private:
  double time_;
};

inline constexpr double kBlowUpThreshold = 1e12;

struct Trajectory {
  std::vector<std::pair<double, ScalarField>> samples;

  const ScalarField& final() const { return samples.back().second; }
  /// Sample exactly at time t; throws if t was not recorded.
  const ScalarField& at(double t) const;
};

/// One split step from t to t + dt: exact spectral diffusion, explicit
/// midpoint treatment of w . grad u + v u. Throws BlowUpError when any node
/// leaves [-1e12, 1e12] or turns non-finite.
ScalarField step(const ScalarField& u, double t, double dt, const Coefficients& c,
                 Scheme scheme = Scheme::Strang);

Trajectory solve(const SimulationConfig& cfg, const ScalarField& u0, const Coefficients& c);

/// Caloric polynomial prod_i p_{k_i}(x_i, t) with
/// p_k(x, t) = sum_j k! / (j! (k-2j)!) x^{k-2j} t^j.
class CaloricPolynomial {
 public:
  CaloricPolynomial(int dim, MultiIndex degrees);

  int dim() const { return dim_; }
  int degree() const;
  const MultiIndex& degrees() const { return k_; }

  double operator()(const Point& x, double t) const;
  Point gradient(const Point& x, double t) const;

  /// One-dimensional p_k(x, t).
  static double p(int k, double x, double t);

 private:
  int dim_;
  MultiIndex k_;
};

/// p_m in the first coordinate, constant in the others; 0 <= m <= 6.
CaloricPolynomial caloric_polynomial(int m, int dim);

/// prod_i H_{k_i}(y_i / 2) exp(-|y|^2 / 8), an eigenfunction of
/// -Lap + |y|^2/16 - n/4 with eigenvalue |k|/2.
class HermiteData {
 public:
  HermiteData(int dim, MultiIndex degrees);

  int dim() const { return dim_; }
  int degree() const;
  double operator()(const Point& y) const;

  /// Physicists' Hermite polynomial H_k(x).
  static double hermite(int k, double x);

 private:
  int dim_;
  MultiIndex k_;
};

/// Total degree m in the first coordinate; 0 <= m <= 8.
HermiteData hermite_data(int m, int dim);

}  // namespace uclab
