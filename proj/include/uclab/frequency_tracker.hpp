#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "uclab/gaussian_engine.hpp"
#include "uclab/heat_solver.hpp"
#include "uclab/torus_field.hpp"

namespace uclab {

/// Raised when (n, p, q [, p2, q2], M0, M1) fall outside the admissible range.
/// The message names the violated inequality.
class GateViolation : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct ExponentSet {
  int dim = 1;
  double p = kInf;
  double q = kInf;
  std::optional<double> p2;
  std::optional<double> q2;
  double M0 = 1.0;
  double M1 = 1.0;
  double alpha = 0.0;
  double beta = 0.5;
  double a = 2.0 / 3.0;
  double b = 2.0;
  double M = 2.0;
  double eps = 0.25;
  double tau0 = 0.0;
};

/// alpha = n/(2p), beta = n/(2q) + 1/2, a = 2/(3 - 4 alpha), b = 2/(3 - 4 beta),
/// M = M0^a + M1^b, eps = 1/(2M), tau0 = log(1/eps). With temporal exponents
/// a = 2/(3 - 2/p2 - 4 alpha) and b = 2/(3 - 2/q2 - 4 beta); an absent temporal
/// exponent counts as infinity.
ExponentSet exponents(int dim, double p, double q, double M0, double M1,
                      std::optional<double> p2 = std::nullopt, std::optional<double> q2 = std::nullopt);

/// Uniform periodic box [-L, L)^n in similarity variables.
struct YGrid {
  int dim = 1;
  double half_width = 20.0;
  int points = 256;

  double spacing() const { return 2.0 * half_width / points; }
  double node(int j) const { return -half_width + j * spacing(); }
  std::size_t size() const;
};

/// Default box for the given dimension: L = 20 with 256, 128, 48 points per axis.
YGrid default_ygrid(int dim);

class DecayError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct SimilarityState {
  double tau = 0.0;
  YGrid grid;
  /// Row-major samples of U, last axis fastest.
  std::vector<double> values;
  /// a = -x_eps / eps.
  Point drift{0.0, 0.0, 0.0};

  double time() const;
  double norm2() const;
  /// int y_axis U^2 dy.
  double first_moment(int axis) const;

  static SimilarityState from_function(const YGrid& grid, double tau,
                                       const std::function<double(const Point&)>& f, Point drift = {});
};

/// Closed-form solution with its spatial gradient.
struct AnalyticSolution {
  int dim = 1;
  std::function<double(const Point&, double)> value;
  std::function<Point(const Point&, double)> gradient;

  static AnalyticSolution from(const CaloricPolynomial& p);
};

/// Spatial center of the translated solution at time t: the path from
/// x_eps at t = -eps to x0 at t = 0.
Point moving_center(const Point& x0, const Point& x_eps, double eps, double t, int dim);

/// Drift a = -(x_eps - x0) / eps of the translated equation.
Point drift_vector(const Point& x0, const Point& x_eps, double eps, int dim);

/// U(y, tau) = exp(-|y|^2/8) u(c + y sqrt|t|, t) with t = -exp(-tau).
SimilarityState to_similarity(const AnalyticSolution& u, double tau, const Point& center,
                              const Point& drift = {}, std::optional<YGrid> grid = std::nullopt);
/// Torus input, sampled through its trigonometric interpolant. The default
/// box is refined until the oscillation of u is resolved in y.
SimilarityState to_similarity(const ScalarField& u, double tau, const Point& center,
                              const Point& drift = {}, std::optional<YGrid> grid = std::nullopt);

/// HU = -Lap U + (|y|^2/16 - shift) U on the periodic y-box; shift defaults to n/4.
/// Throws DecayError when U is not negligible at the box edge.
std::vector<double> apply_H(const SimilarityState& U, std::optional<double> shift = std::nullopt);

/// (HU, U) / ||U||^2.
double frequency(const SimilarityState& U, std::optional<double> shift = std::nullopt);

enum class QuadratureRoute { Lattice, Spectral };

/// Q = |t| int |grad u|^2 G(x - x0, t) dx / int u^2 G(x - x0, t) dx.
double frequency_physical(const ScalarField& u, double t, const Point& x0,
                          QuadratureRoute route = QuadratureRoute::Lattice);
double frequency_physical(const AnalyticSolution& u, double t, const Point& x0);

/// Q minus the drift correction e^{-tau/2} a . int y U^2 / ||U||^2.
double modified_frequency(const SimilarityState& U, std::optional<double> shift = std::nullopt);

/// The three Gaussian integrals that define Q and Q-bar in physical variables.
struct PhysicalFrequency {
  double mass = 0.0;       // int u^2 G
  double dirichlet = 0.0;  // int |grad u|^2 G
  Point first{0.0, 0.0, 0.0};  // int (x - c) u^2 G
  double Q = 0.0;
  double Qbar = 0.0;
};
PhysicalFrequency physical_frequency(const ScalarField& u, double t, const Point& center, const Point& drift);
PhysicalFrequency physical_frequency(const AnalyticSolution& u, double t, const Point& center,
                                     const Point& drift);

/// Distance from Q-bar to {m/2 : m >= 0}; |Q-bar| when Q-bar < 0.
double spectrum_distance(double qbar);

struct TraceSample {
  double tau = 0.0;
  double norm2 = 0.0;
  double Q = 0.0;
  double Qbar = 0.0;
  double distance = 0.0;
};

struct FrequencyTrace {
  std::vector<TraceSample> samples;

  void append(const TraceSample& s);
  double sup_qbar() const;
};

struct LimitMode {
  int m = 0;
  bool stable = false;
  double max_distance = 0.0;
  std::size_t window_samples = 0;
};

inline constexpr double kLimitWindow = 1.0;
inline constexpr double kLimitThreshold = 0.1;

/// m = round(2 Q-bar) over the trailing window of length `window` in tau.
LimitMode limit_mode(const FrequencyTrace& trace, double window = kLimitWindow,
                     double threshold = kLimitThreshold);

/// max of the relative discrepancies between (HU, U)/||U||^2 and the physical
/// frequency, and between ||U||^2 and int u^2 G.
double norm_identity_residual(const SimilarityState& U, const AnalyticSolution& u, double t, const Point& x0);
double norm_identity_residual(const SimilarityState& U, const ScalarField& u, double t, const Point& x0);

/// For drift-free, coefficient-free traces: max over interior samples of
/// |d/dtau log ||U||^2 + 2 Q| by centered differences.
double energy_identity_residual(const FrequencyTrace& trace);

/// Uniform tau ladder tau0, tau0 + 1/per_unit, ..., tau0 + span.
std::vector<double> tau_ladder(double tau0, double span, int per_unit = 20);

/// Trace of a closed-form solution, evaluated in similarity variables.
FrequencyTrace trace_analytic(const AnalyticSolution& u, const std::vector<double>& taus, const Point& x0,
                              const Point& x_eps, double eps);

/// Trace of a solver trajectory in physical variables; every t = -exp(-tau)
/// must have been recorded.
FrequencyTrace trace_trajectory(const Trajectory& traj, const std::vector<double>& taus, const Point& x0,
                                const Point& x_eps, double eps);

}  // namespace uclab
