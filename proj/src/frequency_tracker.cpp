#include "uclab/frequency_tracker.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

#include "uclab/fft.hpp"
#include "uclab/quadrature.hpp"

namespace uclab {
namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void gate(bool ok, const std::string& what) {
  if (!ok) throw GateViolation("violated: " + what);
}

double temporal_gate(double spatial) { return std::max(2.0 / (3.0 - 4.0 * spatial), 2.0 / (1.0 - spatial)); }

// Row-major unravel over a P^n box, last axis fastest.
std::array<int, 3> unravel(std::size_t index, int dim, int points) {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim - 1; a >= 0; --a) {
    idx[static_cast<std::size_t>(a)] = static_cast<int>(index % static_cast<std::size_t>(points));
    index /= static_cast<std::size_t>(points);
  }
  return idx;
}

Point ynode(const YGrid& g, std::size_t index) {
  const auto idx = unravel(index, g.dim, g.points);
  Point y{0.0, 0.0, 0.0};
  for (int a = 0; a < g.dim; ++a) y[static_cast<std::size_t>(a)] = g.node(idx[static_cast<std::size_t>(a)]);
  return y;
}

double cell(const YGrid& g) { return std::pow(g.spacing(), g.dim); }

int max_points(int dim) {
  switch (dim) {
    case 1: return 8192;
    case 2: return 1024;
    default: return 128;
  }
}

int next_pow2(int v) {
  int p = 1;
  while (p < v) p *= 2;
  return p;
}

// Largest |k|_inf carrying a non-negligible coefficient.
int effective_bandwidth(const Spectrum& s) {
  double peak = 0.0;
  for (const auto& c : s.coefficients) peak = std::max(peak, std::abs(c));
  int kmax = 0;
  for (std::size_t i = 0; i < s.coefficients.size(); ++i) {
    if (std::abs(s.coefficients[i]) <= 1e-15 * peak) continue;
    const auto k = signed_modes(s.spec, i);
    for (int a = 0; a < s.spec.dim(); ++a) kmax = std::max(kmax, std::abs(k[static_cast<std::size_t>(a)]));
  }
  return kmax;
}

double relative_gap(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

struct HermiteTensor {
  std::vector<Point> offsets;  // z with x = c + z
  std::vector<double> weights;
};

// Tensor Gauss-Hermite rule for int f(x) G(x - c, t) dx.
HermiteTensor hermite_tensor(int dim, double t) {
  static const QuadratureRule gh = gauss_hermite(48);
  const double scale = 2.0 * std::sqrt(std::abs(t));
  const std::size_t m = gh.nodes.size();
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= m;
  HermiteTensor out;
  out.offsets.reserve(total);
  out.weights.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    Point z{0.0, 0.0, 0.0};
    double w = 1.0;
    std::size_t rest = i;
    for (int a = 0; a < dim; ++a) {
      const std::size_t j = rest % m;
      rest /= m;
      z[static_cast<std::size_t>(a)] = scale * gh.nodes[j];
      w *= 2.0 * gh.weights[j];
    }
    out.offsets.push_back(z);
    out.weights.push_back(w);
  }
  return out;
}

TraceSample make_sample(double tau, double norm2, double Q, double Qbar) {
  return {tau, norm2, Q, Qbar, spectrum_distance(Qbar)};
}

}  // namespace

ExponentSet exponents(int dim, double p, double q, double M0, double M1, std::optional<double> p2,
                      std::optional<double> q2) {
  gate(dim >= 1 && dim <= 3, "n in {1, 2, 3}");
  gate(p >= 1.0, "p >= 1 (p = " + fmt(p) + ")");
  gate(q >= 1.0, "q >= 1 (q = " + fmt(q) + ")");
  gate(p > 2.0 * dim / 3.0, "p > 2n/3 (p = " + fmt(p) + ", 2n/3 = " + fmt(2.0 * dim / 3.0) + ")");
  gate(q > 2.0 * dim, "q > 2n (q = " + fmt(q) + ", 2n = " + fmt(2.0 * dim) + ")");
  if (dim == 1) {
    gate(p >= 2.0, "p >= 2 when n = 1 (p = " + fmt(p) + ")");
    gate(q >= 4.0, "q >= 4 when n = 1 (q = " + fmt(q) + ")");
  }
  gate(M0 >= 1.0, "M0 >= 1 (M0 = " + fmt(M0) + ")");
  gate(M1 >= 1.0, "M1 >= 1 (M1 = " + fmt(M1) + ")");

  ExponentSet e;
  e.dim = dim;
  e.p = p;
  e.q = q;
  e.p2 = p2;
  e.q2 = q2;
  e.M0 = M0;
  e.M1 = M1;
  e.alpha = std::isinf(p) ? 0.0 : dim / (2.0 * p);
  e.beta = (std::isinf(q) ? 0.0 : dim / (2.0 * q)) + 0.5;
  double inv_p2 = 0.0;
  double inv_q2 = 0.0;
  if (p2 || q2) {
    gate(dim >= 2, "n >= 2 for mixed time-space norms");
    if (p2) {
      const double bound = temporal_gate(e.alpha);
      gate(*p2 > bound, "p2 > max{2/(3-4 alpha), 2/(1-alpha)} (p2 = " + fmt(*p2) + ", bound = " + fmt(bound) + ")");
      inv_p2 = std::isinf(*p2) ? 0.0 : 1.0 / *p2;
    }
    if (q2) {
      const double bound = temporal_gate(e.beta);
      gate(*q2 > bound, "q2 > max{2/(3-4 beta), 2/(1-beta)} (q2 = " + fmt(*q2) + ", bound = " + fmt(bound) + ")");
      inv_q2 = std::isinf(*q2) ? 0.0 : 1.0 / *q2;
    }
  }
  e.a = 2.0 / (3.0 - 2.0 * inv_p2 - 4.0 * e.alpha);
  e.b = 2.0 / (3.0 - 2.0 * inv_q2 - 4.0 * e.beta);
  e.M = std::pow(M0, e.a) + std::pow(M1, e.b);
  e.eps = 1.0 / (2.0 * e.M);
  e.tau0 = std::log(1.0 / e.eps);
  return e;
}

std::size_t YGrid::size() const {
  std::size_t s = 1;
  for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(points);
  return s;
}

YGrid default_ygrid(int dim) {
  switch (dim) {
    case 1: return {1, 20.0, 256};
    case 2: return {2, 20.0, 128};
    case 3: return {3, 20.0, 64};
    default: throw InvalidArgument("similarity dimension must be 1, 2, or 3");
  }
}

double SimilarityState::time() const { return -std::exp(-tau); }

double SimilarityState::norm2() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return s * cell(grid);
}

double SimilarityState::first_moment(int axis) const {
  if (axis < 0 || axis >= grid.dim) throw InvalidArgument("moment axis out of range");
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    s += ynode(grid, i)[static_cast<std::size_t>(axis)] * values[i] * values[i];
  return s * cell(grid);
}

SimilarityState SimilarityState::from_function(const YGrid& grid, double tau,
                                               const std::function<double(const Point&)>& f, Point drift) {
  SimilarityState s;
  s.tau = tau;
  s.grid = grid;
  s.drift = drift;
  s.values.resize(grid.size());
  for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] = f(ynode(grid, i));
  return s;
}

AnalyticSolution AnalyticSolution::from(const CaloricPolynomial& p) {
  return {p.dim(), [p](const Point& x, double t) { return p(x, t); },
          [p](const Point& x, double t) { return p.gradient(x, t); }};
}

Point moving_center(const Point& x0, const Point& x_eps, double eps, double t, int dim) {
  const Point d = periodic_displacement(x_eps, x0, dim);
  Point c{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    c[ua] = x0[ua] + d[ua] * std::abs(t) / eps;
  }
  return c;
}

Point drift_vector(const Point& x0, const Point& x_eps, double eps, int dim) {
  const Point d = periodic_displacement(x_eps, x0, dim);
  Point a{0.0, 0.0, 0.0};
  for (int i = 0; i < dim; ++i) a[static_cast<std::size_t>(i)] = -d[static_cast<std::size_t>(i)] / eps;
  return a;
}

SimilarityState to_similarity(const AnalyticSolution& u, double tau, const Point& center, const Point& drift,
                              std::optional<YGrid> grid) {
  const YGrid g = grid.value_or(default_ygrid(u.dim));
  const double t = -std::exp(-tau);
  const double r = std::sqrt(std::abs(t));
  return SimilarityState::from_function(
      g, tau,
      [&](const Point& y) {
        Point x{0.0, 0.0, 0.0};
        double y2 = 0.0;
        for (int a = 0; a < u.dim; ++a) {
          const auto ua = static_cast<std::size_t>(a);
          x[ua] = center[ua] + y[ua] * r;
          y2 += y[ua] * y[ua];
        }
        return std::exp(-y2 / 8.0) * u.value(x, t);
      },
      drift);
}

SimilarityState to_similarity(const ScalarField& u, double tau, const Point& center, const Point& drift,
                              std::optional<YGrid> grid) {
  const int dim = u.spec().dim();
  const auto spectrum = to_spectrum(u);
  const double t = -std::exp(-tau);
  const double r = std::sqrt(std::abs(t));
  YGrid g = default_ygrid(dim);
  if (grid) {
    g = *grid;
  } else {
    // Nyquist pi/h must cover the oscillation 2 pi k sqrt|t| plus the Gaussian's own band.
    const double need = 2.0 * kPi * effective_bandwidth(spectrum) * r + 8.0;
    const int points = next_pow2(static_cast<int>(std::ceil(2.0 * g.half_width * need / kPi)));
    if (points > max_points(dim))
      throw InvalidArgument("similarity grid cannot resolve the field at tau = " + fmt(tau));
    g.points = std::max(g.points, points);
  }
  std::array<std::vector<double>, 3> axes;
  for (int a = 0; a < dim; ++a) {
    auto& ax = axes[static_cast<std::size_t>(a)];
    ax.resize(static_cast<std::size_t>(g.points));
    for (int j = 0; j < g.points; ++j) ax[static_cast<std::size_t>(j)] = center[static_cast<std::size_t>(a)] + g.node(j) * r;
  }
  auto values = interpolate_tensor(spectrum, axes);
  SimilarityState s;
  s.tau = tau;
  s.grid = g;
  s.drift = drift;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Point y = ynode(g, i);
    double y2 = 0.0;
    for (int a = 0; a < dim; ++a) y2 += y[static_cast<std::size_t>(a)] * y[static_cast<std::size_t>(a)];
    values[i] *= std::exp(-y2 / 8.0);
  }
  s.values = std::move(values);
  return s;
}

std::vector<double> apply_H(const SimilarityState& U, std::optional<double> shift) {
  const auto& g = U.grid;
  if (U.values.size() != g.size()) throw InvalidArgument("similarity state size does not match its grid");
  double peak = 0.0;
  double edge = 0.0;
  for (std::size_t i = 0; i < U.values.size(); ++i) {
    const double v = std::abs(U.values[i]);
    peak = std::max(peak, v);
    const auto idx = unravel(i, g.dim, g.points);
    for (int a = 0; a < g.dim; ++a) {
      const int j = idx[static_cast<std::size_t>(a)];
      if (j == 0 || j == g.points - 1) edge = std::max(edge, v);
    }
  }
  if (edge > 1e-12 * peak)
    throw DecayError("U is not resolved on the y-box: edge/peak = " + fmt(edge / peak));

  std::vector<std::complex<double>> data(U.values.begin(), U.values.end());
  fft::forward(data, g.dim, g.points);
  const double k0 = kPi / g.half_width;
  const double inv = 1.0 / static_cast<double>(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto idx = unravel(i, g.dim, g.points);
    double w2 = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const double w = k0 * signed_mode(idx[static_cast<std::size_t>(a)], g.points);
      w2 += w * w;
    }
    data[i] *= w2 * inv;
  }
  fft::inverse(data, g.dim, g.points);
  const double s = shift.value_or(g.dim / 4.0);
  std::vector<double> out(U.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Point y = ynode(g, i);
    double y2 = 0.0;
    for (int a = 0; a < g.dim; ++a) y2 += y[static_cast<std::size_t>(a)] * y[static_cast<std::size_t>(a)];
    out[i] = data[i].real() + (y2 / 16.0 - s) * U.values[i];
  }
  return out;
}

double frequency(const SimilarityState& U, std::optional<double> shift) {
  const auto hu = apply_H(U, shift);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < hu.size(); ++i) {
    num += hu[i] * U.values[i];
    den += U.values[i] * U.values[i];
  }
  if (!(den > 0.0)) throw InvalidArgument("frequency of a zero state");
  return num / den;
}

double modified_frequency(const SimilarityState& U, std::optional<double> shift) {
  const double Q = frequency(U, shift);
  const double n2 = U.norm2();
  double corr = 0.0;
  for (int a = 0; a < U.grid.dim; ++a) {
    const double d = U.drift[static_cast<std::size_t>(a)];
    if (d != 0.0) corr += d * U.first_moment(a);
  }
  return Q - std::exp(-0.5 * U.tau) * corr / n2;
}

PhysicalFrequency physical_frequency(const ScalarField& u, double t, const Point& center, const Point& drift) {
  const int dim = u.spec().dim();
  const BackwardGaussian g(dim, center, t);
  const auto m = spectral_gaussian_integrals(product_spectrum(u, u), g, true);
  const auto grad = gradient(u);
  double dir = 0.0;
  for (int a = 0; a < dim; ++a) dir += spectral_gaussian_integrals(product_spectrum(grad[a], grad[a]), g, false).mass;
  if (!(m.mass > 0.0)) throw InvalidArgument("Gaussian mass of u^2 is not positive");
  PhysicalFrequency out;
  out.mass = m.mass;
  out.dirichlet = dir;
  out.first = m.first;
  out.Q = std::abs(t) * dir / m.mass;
  double corr = 0.0;
  for (int a = 0; a < dim; ++a) corr += drift[static_cast<std::size_t>(a)] * m.first[static_cast<std::size_t>(a)];
  out.Qbar = out.Q - corr / m.mass;
  return out;
}

PhysicalFrequency physical_frequency(const AnalyticSolution& u, double t, const Point& center,
                                     const Point& drift) {
  if (!(t < 0.0)) throw InvalidArgument("frequency requires t < 0");
  const auto rule = hermite_tensor(u.dim, t);
  PhysicalFrequency out;
  for (std::size_t i = 0; i < rule.weights.size(); ++i) {
    const Point& z = rule.offsets[i];
    Point x{0.0, 0.0, 0.0};
    for (int a = 0; a < u.dim; ++a) x[static_cast<std::size_t>(a)] = center[static_cast<std::size_t>(a)] + z[static_cast<std::size_t>(a)];
    const double v = u.value(x, t);
    const Point gr = u.gradient(x, t);
    const double w = rule.weights[i];
    out.mass += w * v * v;
    double g2 = 0.0;
    for (int a = 0; a < u.dim; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      g2 += gr[ua] * gr[ua];
      out.first[ua] += w * z[ua] * v * v;
    }
    out.dirichlet += w * g2;
  }
  if (!(out.mass > 0.0)) throw InvalidArgument("Gaussian mass of u^2 is not positive");
  out.Q = std::abs(t) * out.dirichlet / out.mass;
  double corr = 0.0;
  for (int a = 0; a < u.dim; ++a) corr += drift[static_cast<std::size_t>(a)] * out.first[static_cast<std::size_t>(a)];
  out.Qbar = out.Q - corr / out.mass;
  return out;
}

double frequency_physical(const ScalarField& u, double t, const Point& x0, QuadratureRoute route) {
  if (route == QuadratureRoute::Spectral) return physical_frequency(u, t, x0, {}).Q;
  const int dim = u.spec().dim();
  const BackwardGaussian g(dim, x0, t);
  const auto u2 = u * u;
  double peak = 0.0;
  for (double v : u2.values()) peak = std::max(peak, v);
  LatticeQuadrature quad;
  quad.tolerance = 1e-12 * std::max(1.0, peak);
  const double mass = weighted_integral(u2, g, quad).value;
  if (!(mass > 0.0)) throw InvalidArgument("Gaussian mass of u^2 is not positive");
  const auto g2 = gradient(u).squared_magnitude();
  double gpeak = 0.0;
  for (double v : g2.values()) gpeak = std::max(gpeak, v);
  quad.tolerance = 1e-12 * std::max(1.0, gpeak);
  return std::abs(t) * weighted_integral(g2, g, quad).value / mass;
}

double frequency_physical(const AnalyticSolution& u, double t, const Point& x0) {
  return physical_frequency(u, t, x0, {}).Q;
}

double spectrum_distance(double qbar) {
  if (qbar < 0.0) return -qbar;
  return std::abs(qbar - 0.5 * std::round(2.0 * qbar));
}

void FrequencyTrace::append(const TraceSample& s) {
  if (!samples.empty() && !(s.tau > samples.back().tau))
    throw InvalidArgument("trace samples must have strictly increasing tau");
  samples.push_back(s);
}

double FrequencyTrace::sup_qbar() const {
  double m = -kInf;
  for (const auto& s : samples) m = std::max(m, s.Qbar);
  return m;
}

LimitMode limit_mode(const FrequencyTrace& trace, double window, double threshold) {
  if (trace.samples.size() < 2) throw InvalidArgument("trace too short for a limit");
  const double first = trace.samples.front().tau;
  const double last = trace.samples.back().tau;
  if (last - first < 2.0 - 1e-9) throw InvalidArgument("trace must cover at least 2 units of tau");
  LimitMode out;
  auto mode_of = [](double q) { return std::max(0, static_cast<int>(std::lround(2.0 * q))); };
  out.m = mode_of(trace.samples.back().Qbar);
  out.stable = true;
  for (const auto& s : trace.samples) {
    if (s.tau < last - window - 1e-12) continue;
    ++out.window_samples;
    const double d = spectrum_distance(s.Qbar);
    out.max_distance = std::max(out.max_distance, d);
    if (mode_of(s.Qbar) != out.m || !(d < threshold)) out.stable = false;
  }
  return out;
}

double norm_identity_residual(const SimilarityState& U, const AnalyticSolution& u, double t, const Point& x0) {
  const auto phys = physical_frequency(u, t, x0, {});
  return std::max(relative_gap(frequency(U), phys.Q, 1.0), relative_gap(U.norm2(), phys.mass, 0.0));
}

double norm_identity_residual(const SimilarityState& U, const ScalarField& u, double t, const Point& x0) {
  const auto phys = physical_frequency(u, t, x0, {});
  return std::max(relative_gap(frequency(U), phys.Q, 1.0), relative_gap(U.norm2(), phys.mass, 0.0));
}

double energy_identity_residual(const FrequencyTrace& trace) {
  const auto& s = trace.samples;
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double d = (std::log(s[i + 1].norm2) - std::log(s[i - 1].norm2)) / (s[i + 1].tau - s[i - 1].tau);
    worst = std::max(worst, std::abs(d + 2.0 * s[i].Q));
  }
  return worst;
}

std::vector<double> tau_ladder(double tau0, double span, int per_unit) {
  if (per_unit < 1 || !(span > 0.0)) throw InvalidArgument("tau ladder needs a positive span and density");
  const int count = static_cast<int>(std::lround(span * per_unit));
  std::vector<double> taus;
  for (int i = 0; i <= count; ++i) taus.push_back(tau0 + static_cast<double>(i) / per_unit);
  return taus;
}

FrequencyTrace trace_analytic(const AnalyticSolution& u, const std::vector<double>& taus, const Point& x0,
                              const Point& x_eps, double eps) {
  FrequencyTrace trace;
  const Point drift = drift_vector(x0, x_eps, eps, u.dim);
  for (double tau : taus) {
    const double t = -std::exp(-tau);
    const auto U = to_similarity(u, tau, moving_center(x0, x_eps, eps, t, u.dim), drift);
    trace.append(make_sample(tau, U.norm2(), frequency(U), modified_frequency(U)));
  }
  return trace;
}

FrequencyTrace trace_trajectory(const Trajectory& traj, const std::vector<double>& taus, const Point& x0,
                                const Point& x_eps, double eps) {
  FrequencyTrace trace;
  if (traj.samples.empty()) throw InvalidArgument("empty trajectory");
  const int dim = traj.samples.front().second.spec().dim();
  const Point drift = drift_vector(x0, x_eps, eps, dim);
  for (double tau : taus) {
    const double t = -std::exp(-tau);
    const auto phys = physical_frequency(traj.at(t), t, moving_center(x0, x_eps, eps, t, dim), drift);
    trace.append(make_sample(tau, phys.mass, phys.Q, phys.Qbar));
  }
  return trace;
}

}  // namespace uclab
