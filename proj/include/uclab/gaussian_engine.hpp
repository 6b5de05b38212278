#pragma once

#include <array>
#include <optional>
#include <stdexcept>

#include "uclab/torus_field.hpp"

namespace uclab {

/// G(x - center, time) = |t|^{-n/2} exp(-|x - center|^2 / (4|t|)), t < 0.
class BackwardGaussian {
 public:
  BackwardGaussian(int dim, Point center, double time);

  int dim() const { return dim_; }
  const Point& center() const { return center_; }
  double time() const { return time_; }

 private:
  int dim_;
  Point center_;
  double time_;
};

/// (4 pi)^{n/2}: total mass of G over R^n, independent of t.
double gaussian_mass(int dim);

double gaussian_weight(const BackwardGaussian& g, const Point& x);

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of periodic images summed when unfolding an R^n integral onto the
/// torus. Shells |j|_inf <= shells are kept.
struct LatticeQuadrature {
  std::optional<int> shells;
  /// Absolute bound allowed for the neglected images.
  double tolerance = 1e-12;

  /// Smallest R with exp(-R^2 / (8|t|)) < 1e-14, at least 1.
  static int default_shells(double time);
  int resolve(double time) const { return shells.value_or(default_shells(time)); }
};

struct WeightedIntegral {
  double value = 0.0;
  /// Certified bound on the contribution of the omitted lattice images.
  double truncation_bound = 0.0;
  int shells = 0;
};

/// Lattice-unfolded grid sum approximating  int_{R^n} f(x) G(x - x0, t) dx
/// for periodic f. Without an explicit shell count the lattice grows past
/// default_shells until the truncation bound meets the tolerance. Throws
/// QuadratureError when the bound still exceeds it.
WeightedIntegral weighted_integral(const ScalarField& f, const BackwardGaussian& g,
                                   const LatticeQuadrature& quad = {});

/// Same unfolding for int_{R^n} (x - x0)_axis f(x) G(x - x0, t) dx.
WeightedIntegral weighted_first_moment(const ScalarField& f, const BackwardGaussian& g, int axis,
                                       const LatticeQuadrature& quad = {});

/// Exact Gaussian integrals of a trigonometric polynomial given by its
/// spectrum: int f G and int (x - x0)_j f G over R^n. No lattice or grid
/// resolution limits apply.
struct SpectralGaussianIntegrals {
  double mass = 0.0;
  Point first{0.0, 0.0, 0.0};
};
SpectralGaussianIntegrals spectral_gaussian_integrals(const Spectrum& s, const BackwardGaussian& g,
                                                      bool with_first_moments = true);

/// Periodized Gaussian sum_j G(d + j, t) sampled at every grid displacement d
/// (the grid nodes themselves, since the grid contains the origin).
ScalarField periodized_gaussian(const GridSpec& spec, double time, const LatticeQuadrature& quad = {});

/// Grid-sum correlation F(x0) = sum_x f(x) G_per(x - x0) h^n at every node x0,
/// computed by FFT. Matches weighted_integral node by node up to round-off.
ScalarField gaussian_correlation(const ScalarField& f, double time, const LatticeQuadrature& quad = {});

using MultiIndex = std::array<int, 3>;

/// int_{B(0,R)} x^mu t^l G(x, t) dx in dimension dim; R = kInf gives the full
/// moment via Gauss-Hermite nodes, finite R a polar product rule.
double moment(int dim, const MultiIndex& mu, int time_power, double time, double radius);

/// Constant C_n in  int_{|x|>R} G dx <= C_n |t|^{1/2} R^{-1} exp(-R^2 / (8|t|)).
double tail_constant(int dim);

/// Certified upper bound for int_{R^n \ B(0,R)} f^2 G dx when |f| <= f_inf.
double tail_bound(int dim, double radius, double time, double f_inf);

}  // namespace uclab
