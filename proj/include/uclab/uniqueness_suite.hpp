#pragma once

#include <optional>
#include <vector>

#include "uclab/frequency_tracker.hpp"
#include "uclab/gaussian_engine.hpp"
#include "uclab/heat_solver.hpp"

namespace uclab {

struct PointSelection {
  Point x_eps{0.0, 0.0, 0.0};
  std::size_t node = 0;
  double eps = 0.0;
  /// eps int |grad u(x_eps + y)|^2 G(y, -eps) dy / int u(x_eps + y)^2 G(y, -eps) dy
  double achieved_ratio = 0.0;
  /// 2 eps q_D(-eps)
  double bound = 0.0;
  bool certified = false;
};

class CertificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gaussian-weighted quotient eps int |grad u|^2 G / int u^2 G at every grid
/// node, by FFT correlation against the periodized Gaussian.
ScalarField start_point_ratios(const ScalarField& u, double eps, const LatticeQuadrature& quad = {});

/// Exhaustive search over the grid nodes for the minimizing center. Throws
/// CertificationError if even the minimum exceeds 2 eps q_D.
PointSelection select_start_point(const ScalarField& u, double eps, const LatticeQuadrature& quad = {});

/// Least-squares line through (x_i, y_i).
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// max |y_i - fit(x_i)|
  double max_residual = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct CylinderFit {
  double order = 0.0;
  LineFit fit;
  std::vector<double> radii;
  std::vector<double> norms;
  /// All cylinder norms vanished: the order exceeds what the data resolve.
  bool resolution_limited = false;
};

/// radii 2^{-k}, k = 3..7.
std::vector<double> default_radii();
/// times t0 - 4^{-k}, k = 2..6.
std::vector<double> default_gaussian_times(double t0 = 0.0);

/// Gauss-Legendre times inside (t0 - r^2, t0) used by cylinder_norm; a
/// trajectory recording exactly these times is integrated without time
/// interpolation error.
std::vector<double> cylinder_time_nodes(double t0, double r);

/// ||u||_{L^2(Q_r(x0, t0))} with Q_r = B_r(x0) x (t0 - r^2, t0).
double cylinder_norm(const AnalyticSolution& u, const Point& x0, double t0, double r);
/// Same on solver output: trigonometric interpolation in space, linear in time.
double cylinder_norm(const Trajectory& traj, const Point& x0, double t0, double r);

/// Slope of log ||u||_{L^2(Q_r)} against log r, minus (n+2)/2.
CylinderFit vanishing_order_cylinder(const AnalyticSolution& u, const Point& x0, double t0,
                                     const std::vector<double>& radii = default_radii());
CylinderFit vanishing_order_cylinder(const Trajectory& traj, const Point& x0, double t0,
                                     const std::vector<double>& radii = default_radii());

struct GaussianSample {
  double t = 0.0;
  double integral = 0.0;  // int u(x, t)^2 G(x - x0, t - t0) dx
};

struct GaussianFit {
  double order = 0.0;
  LineFit fit;
  /// Half-width of the bracket [m - delta, m + delta] realized by the fit.
  double delta = 0.0;
};

/// Slope of log int u^2 G against log |t - t0|; needs >= 5 samples.
GaussianFit vanishing_order_gaussian(const std::vector<GaussianSample>& samples, double t0 = 0.0);

std::vector<GaussianSample> gaussian_samples(const AnalyticSolution& u, const Point& x0, double t0,
                                             const std::vector<double>& times);
std::vector<GaussianSample> gaussian_samples(const Trajectory& traj, const Point& x0, double t0,
                                             const std::vector<double>& times);

struct VanishingReport {
  double d_cyl = 0.0;
  double m_gauss = 0.0;
  int m_freq = 0;
  double qbar_final = 0.0;
  bool freq_stable = false;
  double bound = 0.0;  // M0^a + M1^b
  CylinderFit cylinder;
  GaussianFit gaussian;
  FrequencyTrace trace;
};

/// All three estimators on a closed-form solution vanishing at (x0, 0); the
/// trace runs over tau in [tau0, tau0 + span].
VanishingReport vanishing_report(const AnalyticSolution& u, const Point& x0, const ExponentSet& exps,
                                 double span = 3.0);

struct OrderVerdict {
  double order = 0.0;
  double bound = 0.0;
  double c_fit = 0.0;
  /// c_fit * bound - order
  double margin = 0.0;
  bool pass = false;
};

/// max(d_cyl, m_gauss, m_freq) <= c_fit (M0^a + M1^b).
OrderVerdict verify_order_bound(const VanishingReport& report, const ExponentSet& exps, double c_fit);

/// Smallest constant C with values[i] <= C bounds[i] for all i.
double fit_constant(const std::vector<double>& values, const std::vector<double>& bounds);

}  // namespace uclab
