#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace uclab {

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Point in at most three dimensions; unused trailing components are zero.
using Point = std::array<double, 3>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

/// Uniform periodic grid on [-1/2, 1/2]^n with nodes x_i = -1/2 + i/N.
class GridSpec {
 public:
  GridSpec(int dim, int points);

  int dim() const { return dim_; }
  int points() const { return points_; }
  std::size_t size() const { return size_; }
  double spacing() const { return 1.0 / points_; }
  double cell_volume() const;
  double node(int i) const { return -0.5 + static_cast<double>(i) / points_; }

  /// Multi-index of a linear node index (axis 0 slowest).
  std::array<int, 3> unravel(std::size_t index) const;
  Point position(std::size_t index) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int dim_;
  int points_;
  std::size_t size_;
};

class ScalarField {
 public:
  ScalarField(GridSpec spec, std::vector<double> values);

  static ScalarField constant(const GridSpec& spec, double c);
  static ScalarField sample(const GridSpec& spec, const std::function<double(const Point&)>& f);

  const GridSpec& spec() const { return spec_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  ScalarField operator+(const ScalarField& other) const;
  ScalarField operator-(const ScalarField& other) const;
  ScalarField operator*(const ScalarField& other) const;
  ScalarField scaled(double c) const;

 private:
  GridSpec spec_;
  std::vector<double> values_;
};

class VectorField {
 public:
  explicit VectorField(std::vector<ScalarField> components);
  static VectorField zero(const GridSpec& spec);

  const GridSpec& spec() const { return components_.front().spec(); }
  const ScalarField& operator[](int axis) const { return components_[static_cast<std::size_t>(axis)]; }
  const std::vector<ScalarField>& components() const { return components_; }
  int dim() const { return static_cast<int>(components_.size()); }

  /// Pointwise Euclidean magnitude.
  ScalarField magnitude() const;
  /// Pointwise sum of squared components.
  ScalarField squared_magnitude() const;

 private:
  std::vector<ScalarField> components_;
};

/// Normalized DFT coefficients: f_i = sum_k c_k exp(2 pi i k (x_i + 1/2)).
struct Spectrum {
  GridSpec spec;
  std::vector<std::complex<double>> coefficients;
};

/// Signed wavenumber of an FFT index; the Nyquist index maps to +N/2.
int signed_mode(int index, int points);
std::array<int, 3> signed_modes(const GridSpec& spec, std::size_t index);

Spectrum to_spectrum(const ScalarField& f);
/// Real part of the inverse transform.
ScalarField from_spectrum(const Spectrum& s);

/// Exact spectrum of the product a*b on the doubled grid. Nyquist modes of the
/// factors are dropped so the product is alias-free.
Spectrum product_spectrum(const ScalarField& a, const ScalarField& b);

/// Evaluates the trigonometric interpolant at an arbitrary point.
double interpolate(const Spectrum& s, const Point& x);
/// Evaluates the interpolant on the tensor grid axes[0] x ... x axes[n-1];
/// result is row-major with the last axis fastest.
std::vector<double> interpolate_tensor(const Spectrum& s,
                                       const std::array<std::vector<double>, 3>& axes);

double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& w, double p);
double l2_inner(const ScalarField& f, const ScalarField& g);
double mean(const ScalarField& f);

VectorField gradient(const ScalarField& f);
ScalarField laplacian(const ScalarField& f);
ScalarField divergence(const VectorField& w);

/// L2 norm of f over the periodic ball B_delta(x0), by node membership.
/// Nodes on the rim (to round-off) are counted with weight 1/2.
double ball_l2_norm(const ScalarField& f, const Point& x0, double delta);

/// ||grad f||^2 / ||f||^2, computed from the spectrum.
double dirichlet_quotient(const ScalarField& f);

/// Periodic minimal-image displacement x - y wrapped into [-1/2, 1/2)^n.
Point periodic_displacement(const Point& x, const Point& y, int dim);

}  // namespace uclab
