#include "uclab/gaussian_engine.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "uclab/fft.hpp"
#include "uclab/quadrature.hpp"

namespace uclab {
namespace {

constexpr int kMaxShells = 64;

double dist2(const Point& a, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(i)];
  return s;
}

double sphere_area(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * kPi;
    default: return 4.0 * kPi;
  }
}

double integer_power(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// Lattice images j with |j|_inf <= shells, enumerated once per call.
std::vector<Point> lattice_images(int dim, int shells) {
  std::vector<Point> images;
  const int w = 2 * shells + 1;
  int total = 1;
  for (int a = 0; a < dim; ++a) total *= w;
  images.reserve(static_cast<std::size_t>(total));
  for (int idx = 0; idx < total; ++idx) {
    Point j{0.0, 0.0, 0.0};
    int rest = idx;
    for (int a = 0; a < dim; ++a) {
      j[static_cast<std::size_t>(a)] = static_cast<double>(rest % w - shells);
      rest /= w;
    }
    images.push_back(j);
  }
  return images;
}

// Neglected images lie at |y| > shells; grid cells of monotone G push the
// effective radius in by one cell diagonal.
double lattice_tail(const GridSpec& spec, int shells, double time, double f_inf) {
  const double r = shells - std::sqrt(static_cast<double>(spec.dim())) * spec.spacing();
  if (r <= 0.0) return kInf;
  return tail_bound(spec.dim(), r, time, std::sqrt(f_inf));
}

// Default shells grow until the tail bound meets the tolerance; an explicit
// shell count is kept as given so lattice_sum can reject it.
template <typename Tail>
LatticeQuadrature certified(const LatticeQuadrature& quad, const Tail& tail, double time) {
  LatticeQuadrature out = quad;
  if (quad.shells) return out;
  int shells = LatticeQuadrature::default_shells(time);
  while (shells < kMaxShells && tail(shells) > quad.tolerance) ++shells;
  out.shells = shells;
  return out;
}

template <typename Weight>
WeightedIntegral lattice_sum(const ScalarField& f, const BackwardGaussian& g,
                             const LatticeQuadrature& quad, double tail, Weight weight) {
  const auto& spec = f.spec();
  if (spec.dim() != g.dim()) throw InvalidArgument("Gaussian and field dimensions differ");
  const int shells = quad.resolve(g.time());
  const double inv4t = 1.0 / (4.0 * std::abs(g.time()));
  const double norm = std::pow(std::abs(g.time()), -0.5 * spec.dim());
  const auto images = lattice_images(spec.dim(), shells);
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0.0) continue;
    const Point x = spec.position(i);
    double local = 0.0;
    for (const auto& j : images) {
      Point y{0.0, 0.0, 0.0};
      for (int a = 0; a < spec.dim(); ++a) {
        const auto ua = static_cast<std::size_t>(a);
        y[ua] = x[ua] + j[ua] - g.center()[ua];
      }
      const double e = dist2(y, spec.dim()) * inv4t;
      if (e > 745.0) continue;
      local += weight(y) * std::exp(-e);
    }
    sum += f[i] * local;
  }
  WeightedIntegral out;
  out.value = sum * norm * spec.cell_volume();
  out.shells = shells;
  out.truncation_bound = tail;
  if (!(out.truncation_bound <= quad.tolerance))
    throw QuadratureError("lattice truncation bound " + std::to_string(out.truncation_bound) +
                          " exceeds tolerance with " + std::to_string(shells) + " shells");
  return out;
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

BackwardGaussian::BackwardGaussian(int dim, Point center, double time)
    : dim_(dim), center_(center), time_(time) {
  if (dim < 1 || dim > 3) throw InvalidArgument("Gaussian dimension must be 1, 2, or 3");
  if (!(time < 0.0)) throw InvalidArgument("backward Gaussian requires t < 0");
}

double gaussian_mass(int dim) { return std::pow(4.0 * kPi, 0.5 * dim); }

double gaussian_weight(const BackwardGaussian& g, const Point& x) {
  Point d{0.0, 0.0, 0.0};
  for (int a = 0; a < g.dim(); ++a) {
    const auto ua = static_cast<std::size_t>(a);
    d[ua] = x[ua] - g.center()[ua];
  }
  const double s = std::abs(g.time());
  return std::pow(s, -0.5 * g.dim()) * std::exp(-dist2(d, g.dim()) / (4.0 * s));
}

int LatticeQuadrature::default_shells(double time) {
  const double r = std::sqrt(8.0 * std::abs(time) * std::log(1e14));
  return std::max(1, static_cast<int>(std::floor(r)) + 1);
}

WeightedIntegral weighted_integral(const ScalarField& f, const BackwardGaussian& g,
                                   const LatticeQuadrature& quad) {
  const double f_inf = max_abs(f);
  const auto tail_at = [&](int shells) { return lattice_tail(f.spec(), shells, g.time(), f_inf); };
  const auto fixed = certified(quad, tail_at, g.time());
  return lattice_sum(f, g, fixed, tail_at(fixed.resolve(g.time())), [](const Point&) { return 1.0; });
}

WeightedIntegral weighted_first_moment(const ScalarField& f, const BackwardGaussian& g, int axis,
                                       const LatticeQuadrature& quad) {
  if (axis < 0 || axis >= f.spec().dim()) throw InvalidArgument("moment axis out of range");
  // |y| G(y, t) <= sqrt(4|t|/e) 2^{n/2} G(y, 2t)
  const double s = std::abs(g.time());
  const double f_inf = max_abs(f);
  const auto tail_at = [&](int shells) {
    return std::sqrt(4.0 * s / std::exp(1.0)) * std::pow(2.0, 0.5 * g.dim()) *
           lattice_tail(f.spec(), shells, 2.0 * g.time(), f_inf);
  };
  const auto fixed = certified(quad, tail_at, g.time());
  const auto ua = static_cast<std::size_t>(axis);
  return lattice_sum(f, g, fixed, tail_at(fixed.resolve(g.time())), [ua](const Point& y) { return y[ua]; });
}

SpectralGaussianIntegrals spectral_gaussian_integrals(const Spectrum& s, const BackwardGaussian& g,
                                                      bool with_first_moments) {
  const auto& spec = s.spec;
  if (spec.dim() != g.dim()) throw InvalidArgument("Gaussian and spectrum dimensions differ");
  const double abs_t = std::abs(g.time());
  const int dim = spec.dim();
  const int n = spec.points();

  // Per-axis phase factors exp(2 pi i k (c + 1/2)) and decay exp(-4 pi^2 k^2 |t|).
  std::array<std::vector<std::complex<double>>, 3> phase;
  std::array<std::vector<double>, 3> decay;
  for (int a = 0; a < dim; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    phase[ua].resize(static_cast<std::size_t>(n));
    decay[ua].resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      const int m = signed_mode(k, n);
      const double arg = 2.0 * kPi * m * (g.center()[ua] + 0.5);
      phase[ua][static_cast<std::size_t>(k)] = {std::cos(arg), std::sin(arg)};
      decay[ua][static_cast<std::size_t>(k)] = std::exp(-4.0 * kPi * kPi * double(m) * m * abs_t);
    }
  }

  std::complex<double> mass{0.0, 0.0};
  std::array<std::complex<double>, 3> first{};
  for (std::size_t i = 0; i < s.coefficients.size(); ++i) {
    const auto c = s.coefficients[i];
    if (c == 0.0) continue;
    const auto idx = spec.unravel(i);
    std::complex<double> ph{1.0, 0.0};
    double dec = 1.0;
    bool nyquist = false;
    for (int a = 0; a < dim; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      const auto k = static_cast<std::size_t>(idx[ua]);
      if (2 * signed_mode(idx[ua], n) == n) nyquist = true;
      ph *= phase[ua][k];
      dec *= decay[ua][k];
    }
    if (nyquist) continue;
    const auto term = c * ph * dec;
    mass += term;
    if (with_first_moments) {
      for (int a = 0; a < dim; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        const double omega = 2.0 * kPi * signed_mode(idx[ua], n);
        first[ua] += term * std::complex<double>(0.0, 2.0 * omega * abs_t);
      }
    }
  }
  const double scale = gaussian_mass(dim);
  SpectralGaussianIntegrals out;
  out.mass = scale * mass.real();
  for (int a = 0; a < dim; ++a)
    out.first[static_cast<std::size_t>(a)] = scale * first[static_cast<std::size_t>(a)].real();
  return out;
}

ScalarField periodized_gaussian(const GridSpec& spec, double time, const LatticeQuadrature& quad) {
  if (!(time < 0.0)) throw InvalidArgument("backward Gaussian requires t < 0");
  const int shells = quad.resolve(time);
  const auto images = lattice_images(spec.dim(), shells);
  const double inv4t = 1.0 / (4.0 * std::abs(time));
  const double norm = std::pow(std::abs(time), -0.5 * spec.dim());
  std::vector<double> values(spec.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Point d = spec.position(i);
    double sum = 0.0;
    for (const auto& j : images) {
      Point y{0.0, 0.0, 0.0};
      for (int a = 0; a < spec.dim(); ++a) {
        const auto ua = static_cast<std::size_t>(a);
        y[ua] = d[ua] + j[ua];
      }
      const double e = dist2(y, spec.dim()) * inv4t;
      if (e <= 745.0) sum += std::exp(-e);
    }
    values[i] = norm * sum;
  }
  return ScalarField(spec, std::move(values));
}

ScalarField gaussian_correlation(const ScalarField& f, double time, const LatticeQuadrature& quad) {
  const auto& spec = f.spec();
  const auto kernel_nodes = periodized_gaussian(spec, time, quad);
  const int n = spec.points();
  const int half = n / 2;

  // Re-index the kernel by displacement index m (displacement m h) instead of
  // node position -1/2 + m h.
  std::vector<std::complex<double>> kernel(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto idx = spec.unravel(i);
    std::size_t target = 0;
    for (int a = 0; a < spec.dim(); ++a)
      target = target * static_cast<std::size_t>(n) +
               static_cast<std::size_t>((idx[static_cast<std::size_t>(a)] + half) % n);
    kernel[target] = kernel_nodes[i];
  }
  std::vector<std::complex<double>> data(f.values().begin(), f.values().end());
  fft::forward(data, spec.dim(), n);
  fft::forward(kernel, spec.dim(), n);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= kernel[i];
  fft::inverse(data, spec.dim(), n);
  // Kernel is even, so correlation equals convolution.
  const double scale = spec.cell_volume() / static_cast<double>(spec.size());
  std::vector<double> out(spec.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = data[i].real() * scale;
  return ScalarField(spec, std::move(out));
}

double moment(int dim, const MultiIndex& mu, int time_power, double time, double radius) {
  if (dim < 1 || dim > 3) throw InvalidArgument("moment dimension must be 1, 2, or 3");
  if (!(time < 0.0)) throw InvalidArgument("moments require t < 0");
  if (!(radius > 0.0)) throw InvalidArgument("moment radius must be positive");
  for (int a = 0; a < dim; ++a)
    if (mu[static_cast<std::size_t>(a)] < 0) throw InvalidArgument("multi-index must be nonnegative");
  const double s = std::abs(time);
  const double tl = integer_power(time, time_power);

  if (std::isinf(radius)) {
    // x = 2 sqrt|t| z turns |t|^{-1/2} exp(-x^2/4|t|) dx into 2 exp(-z^2) dz.
    static const QuadratureRule gh = gauss_hermite(64);
    double product = 1.0;
    const double scale = 2.0 * std::sqrt(s);
    const std::size_t order = gh.nodes.size();
    for (int a = 0; a < dim; ++a) {
      const int k = mu[static_cast<std::size_t>(a)];
      double sum = 0.0;
      for (std::size_t i = 0; i < order / 2; ++i) {
        const std::size_t mirror = order - 1 - i;
        sum += gh.weights[i] * (integer_power(scale * gh.nodes[i], k) +
                                integer_power(scale * gh.nodes[mirror], k));
      }
      if (order % 2 == 1) sum += gh.weights[order / 2] * integer_power(0.0, k);
      product *= 2.0 * sum;
    }
    return tl * product;
  }

  // Angular factor over one orthant, symmetrized over all coordinate sign flips.
  double angular = 0.0;
  auto flip_factor = [&](const Point& d) {
    double p = 1.0;
    for (int a = 0; a < dim; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      const int k = mu[ua];
      p *= integer_power(d[ua], k) + integer_power(-d[ua], k);
    }
    return p;
  };
  if (dim == 1) {
    angular = flip_factor({1.0, 0.0, 0.0});
  } else if (dim == 2) {
    const int m = 48;
    const double w = 0.5 * kPi / m;
    for (int j = 0; j < m; ++j) {
      const double th = (j + 0.5) * w;
      angular += w * flip_factor({std::cos(th), std::sin(th), 0.0});
    }
  } else {
    const auto ct = gauss_legendre(32, 0.0, 1.0);
    const int m = 48;
    const double w = 0.5 * kPi / m;
    for (std::size_t i = 0; i < ct.nodes.size(); ++i) {
      const double c = ct.nodes[i];
      const double sn = std::sqrt(1.0 - c * c);
      for (int j = 0; j < m; ++j) {
        const double ph = (j + 0.5) * w;
        angular += ct.weights[i] * w * flip_factor({sn * std::cos(ph), sn * std::sin(ph), c});
      }
    }
  }
  if (angular == 0.0) return 0.0;

  int degree = dim - 1;
  for (int a = 0; a < dim; ++a) degree += mu[static_cast<std::size_t>(a)];
  // Radial integral on [0, min(R, 40 sqrt|t|)] by composite Gauss-Legendre.
  const double upper = std::min(radius, 40.0 * std::sqrt(s));
  const int panels = std::clamp(static_cast<int>(std::ceil(upper / std::sqrt(s))), 1, 400);
  const double width = upper / panels;
  double radial = 0.0;
  for (int p = 0; p < panels; ++p) {
    const auto rule = gauss_legendre(16, p * width, (p + 1) * width);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double r = rule.nodes[i];
      radial += rule.weights[i] * integer_power(r, degree) * std::exp(-r * r / (4.0 * s));
    }
  }
  radial *= std::pow(s, -0.5 * dim);
  return tl * angular * radial;
}

double tail_constant(int dim) {
  if (dim < 1 || dim > 3) throw InvalidArgument("tail dimension must be 1, 2, or 3");
  // sup_{rho >= 0} rho^{n-1} exp(-rho^2/2) = ((n-1)/e)^{(n-1)/2}
  const double peak = dim == 1 ? 1.0 : std::pow((dim - 1.0) / std::exp(1.0), 0.5 * (dim - 1.0));
  return std::pow(2.0, dim + 1) * sphere_area(dim) * peak;
}

double tail_bound(int dim, double radius, double time, double f_inf) {
  if (!(radius > 0.0)) throw InvalidArgument("tail radius must be positive");
  if (!(time < 0.0)) throw InvalidArgument("tail bound requires t < 0");
  if (f_inf == 0.0) return 0.0;
  const double s = std::abs(time);
  return f_inf * f_inf * tail_constant(dim) * std::sqrt(s) / radius *
         std::exp(-radius * radius / (8.0 * s));
}

}  // namespace uclab
