#include "uclab/heat_solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <string>

#include "uclab/fft.hpp"
#include "uclab/rng.hpp"

namespace uclab {
namespace {

void check_blow_up(const std::vector<double>& values, double time) {
  for (double v : values)
    if (!std::isfinite(v) || std::abs(v) > kBlowUpThreshold) throw BlowUpError(time);
}

// Exact heat propagator exp(dt Lap) applied in Fourier space.
std::vector<double> diffuse(const GridSpec& spec, const std::vector<double>& u, double dt) {
  const int n = spec.points();
  std::vector<std::complex<double>> data(u.begin(), u.end());
  fft::forward(data, spec.dim(), n);
  const double inv = 1.0 / static_cast<double>(spec.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto k = signed_modes(spec, i);
    double k2 = 0.0;
    for (int a = 0; a < spec.dim(); ++a) k2 += double(k[static_cast<std::size_t>(a)]) * k[static_cast<std::size_t>(a)];
    data[i] *= std::exp(-4.0 * kPi * kPi * k2 * dt) * inv;
  }
  fft::inverse(data, spec.dim(), n);
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = data[i].real();
  return out;
}

// w . grad u + v u at time t.
std::vector<double> lower_order(const GridSpec& spec, const std::vector<double>& u, double t,
                                const Coefficients& c) {
  std::vector<double> out(u.size(), 0.0);
  if (!c.v && !c.w) return out;
  const ScalarField uf(spec, u);
  if (c.v) {
    const auto v = c.v(t);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += v[i] * u[i];
  }
  if (c.w) {
    const auto w = c.w(t);
    const auto g = gradient(uf);
    for (int a = 0; a < spec.dim(); ++a)
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += w[a][i] * g[a][i];
  }
  return out;
}

std::vector<double> react(const GridSpec& spec, const std::vector<double>& u, double t, double dt,
                          const Coefficients& c, bool midpoint) {
  if (!c.v && !c.w) return u;
  const auto k1 = lower_order(spec, u, t, c);
  if (!midpoint) {
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] + dt * k1[i];
    return out;
  }
  std::vector<double> mid(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) mid[i] = u[i] + 0.5 * dt * k1[i];
  check_blow_up(mid, t + 0.5 * dt);
  const auto k2 = lower_order(spec, mid, t + 0.5 * dt, c);
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] + dt * k2[i];
  return out;
}

double temporal_composite(const std::vector<double>& norms, const std::vector<double>& times,
                          std::optional<double> r) {
  if (norms.empty()) return 0.0;
  if (!r || std::isinf(*r) || norms.size() == 1)
    return *std::max_element(norms.begin(), norms.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < norms.size(); ++i) {
    const double h = times[i + 1] - times[i];
    sum += 0.5 * h * (std::pow(norms[i], *r) + std::pow(norms[i + 1], *r));
  }
  return std::pow(sum, 1.0 / *r);
}

struct TrigBasis {
  ScalarField cos_part;
  ScalarField sin_part;
};

ScalarField slice(const TrigBasis& b, double omega, double t) {
  return b.cos_part.scaled(std::cos(omega * t)) + b.sin_part.scaled(std::sin(omega * t));
}

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

}  // namespace

Coefficients Coefficients::zero() { return {}; }

Coefficients Coefficients::constant(const GridSpec& grid, double lambda) {
  Coefficients c;
  c.v = [field = ScalarField::constant(grid, lambda)](double) { return field; };
  c.M0 = std::max(1.0, std::abs(lambda));
  return c;
}

void measure_norms(Coefficients& c, const std::vector<double>& times) {
  std::vector<double> nv;
  std::vector<double> nw;
  for (double t : times) {
    nv.push_back(c.v ? lp_norm(c.v(t), c.p) : 0.0);
    nw.push_back(c.w ? lp_norm(c.w(t), c.q) : 0.0);
  }
  c.M0 = std::max(1.0, temporal_composite(nv, times, c.p2));
  c.M1 = std::max(1.0, temporal_composite(nw, times, c.q2));
}

ScalarField random_trig_field(const GridSpec& grid, int mode_cap, std::uint64_t seed, std::uint64_t stream) {
  if (mode_cap < 0 || 2 * mode_cap >= grid.points())
    throw InvalidArgument("mode cap must lie in [0, N/2)");
  CounterRng rng(seed, stream);
  const int dim = grid.dim();
  const int w = 2 * mode_cap + 1;
  int count = 1;
  for (int a = 0; a < dim; ++a) count *= w;
  struct Mode {
    std::array<int, 3> k;
    double a, b;
  };
  std::vector<Mode> modes;
  for (int idx = 0; idx < count; ++idx) {
    Mode m{{0, 0, 0}, 0.0, 0.0};
    int rest = idx;
    for (int a = dim - 1; a >= 0; --a) {
      m.k[static_cast<std::size_t>(a)] = rest % w - mode_cap;
      rest /= w;
    }
    m.a = rng.uniform(-1.0, 1.0);
    m.b = rng.uniform(-1.0, 1.0);
    modes.push_back(m);
  }
  return ScalarField::sample(grid, [&](const Point& x) {
    double s = 0.0;
    for (const auto& m : modes) {
      double arg = 0.0;
      for (int a = 0; a < dim; ++a) arg += m.k[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
      arg *= 2.0 * kPi;
      s += m.a * std::cos(arg) + m.b * std::sin(arg);
    }
    return s;
  });
}

Coefficients random_trig_coefficients(const RandomTrigSpec& spec, const GridSpec& grid) {
  if (!(spec.M0 >= 0.0) || !(spec.M1 >= 0.0)) throw InvalidArgument("target norms must be nonnegative");
  const std::uint64_t base = spec.run * 16;
  auto v = std::make_shared<TrigBasis>(TrigBasis{random_trig_field(grid, spec.mode_cap, spec.seed, base),
                                                 random_trig_field(grid, spec.mode_cap, spec.seed, base + 1)});
  auto w = std::make_shared<std::vector<TrigBasis>>();
  for (int a = 0; a < grid.dim(); ++a) {
    const auto s = base + 2 + 2 * static_cast<std::uint64_t>(a);
    w->push_back({random_trig_field(grid, spec.mode_cap, spec.seed, s),
                  random_trig_field(grid, spec.mode_cap, spec.seed, s + 1)});
  }
  Coefficients c;
  c.p = spec.p;
  c.q = spec.q;
  c.p2 = spec.p2;
  c.q2 = spec.q2;
  const double omega = spec.omega;
  if (spec.M0 > 0.0) {
    c.v = [v, omega, target = spec.M0, p = spec.p](double t) {
      auto f = slice(*v, omega, t);
      const double norm = lp_norm(f, p);
      return norm > 0.0 ? f.scaled(target / norm) : f;
    };
  }
  if (spec.M1 > 0.0) {
    c.w = [w, omega, target = spec.M1, q = spec.q](double t) {
      std::vector<ScalarField> comps;
      for (const auto& b : *w) comps.push_back(slice(b, omega, t));
      VectorField raw(std::move(comps));
      const double norm = lp_norm(raw, q);
      if (!(norm > 0.0)) return raw;
      std::vector<ScalarField> scaled;
      for (const auto& comp : raw.components()) scaled.push_back(comp.scaled(target / norm));
      return VectorField(std::move(scaled));
    };
  }
  c.M0 = std::max(1.0, spec.M0);
  c.M1 = std::max(1.0, spec.M1);
  return c;
}

BlowUpError::BlowUpError(double time)
    : std::runtime_error("solution exceeded " + std::to_string(kBlowUpThreshold) + " at t = " +
                         std::to_string(time)),
      time_(time) {}

const ScalarField& Trajectory::at(double t) const {
  for (const auto& [s, f] : samples)
    if (s == t) return f;
  for (const auto& [s, f] : samples)
    if (std::abs(s - t) <= 1e-12 * std::max(std::abs(s), std::abs(t))) return f;
  throw InvalidArgument("time " + std::to_string(t) + " not recorded in trajectory");
}

ScalarField step(const ScalarField& u, double t, double dt, const Coefficients& c, Scheme scheme) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  const auto& spec = u.spec();
  std::vector<double> out;
  if (scheme == Scheme::Strang) {
    auto half = diffuse(spec, u.values(), 0.5 * dt);
    auto r = react(spec, half, t, dt, c, true);
    check_blow_up(r, t + dt);
    out = diffuse(spec, r, 0.5 * dt);
  } else {
    auto r = react(spec, u.values(), t, dt, c, false);
    check_blow_up(r, t + dt);
    out = diffuse(spec, r, dt);
  }
  check_blow_up(out, t + dt);
  return ScalarField(spec, std::move(out));
}

Trajectory solve(const SimulationConfig& cfg, const ScalarField& u0, const Coefficients& c) {
  if (!(u0.spec() == cfg.grid)) throw InvalidArgument("initial field does not live on the configured grid");
  if (!(cfg.dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (!(cfg.duration > 0.0) || !std::isfinite(cfg.duration)) throw InvalidArgument("duration must be positive and finite");
  const double t1 = cfg.t0 + cfg.duration;
  std::vector<double> marks{cfg.t0, t1};
  for (double s : cfg.sample_times) {
    if (s < cfg.t0 - 1e-14 || s > t1 + 1e-14) throw InvalidArgument("sample time outside the interval");
    marks.push_back(std::clamp(s, cfg.t0, t1));
  }
  std::sort(marks.begin(), marks.end());
  std::vector<double> times;
  for (double m : marks)
    if (times.empty() || m - times.back() > 1e-15 * std::max(std::abs(m), std::abs(times.back())))
      times.push_back(m);

  Trajectory traj;
  traj.samples.emplace_back(times.front(), u0);
  ScalarField u = u0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double span = times[i + 1] - times[i];
    const int steps = std::max(1, static_cast<int>(std::ceil(span / cfg.dt - 1e-9)));
    const double h = span / steps;
    for (int j = 0; j < steps; ++j) u = step(u, times[i] + j * h, h, c, cfg.scheme);
    traj.samples.emplace_back(times[i + 1], u);
  }
  return traj;
}

CaloricPolynomial::CaloricPolynomial(int dim, MultiIndex degrees) : dim_(dim), k_(degrees) {
  if (dim < 1 || dim > 3) throw InvalidArgument("caloric polynomial dimension must be 1, 2, or 3");
  for (int a = 0; a < 3; ++a) {
    const int k = k_[static_cast<std::size_t>(a)];
    if (a >= dim && k != 0) throw InvalidArgument("degree set on an unused axis");
    if (k < 0 || k > 12) throw InvalidArgument("caloric degree out of range");
  }
}

int CaloricPolynomial::degree() const { return k_[0] + k_[1] + k_[2]; }

double CaloricPolynomial::p(int k, double x, double t) {
  if (k < 0) return 0.0;
  double s = 0.0;
  for (int j = 0; 2 * j <= k; ++j) {
    double term = factorial(k) / (factorial(j) * factorial(k - 2 * j));
    for (int i = 0; i < k - 2 * j; ++i) term *= x;
    for (int i = 0; i < j; ++i) term *= t;
    s += term;
  }
  return s;
}

double CaloricPolynomial::operator()(const Point& x, double t) const {
  double r = 1.0;
  for (int a = 0; a < dim_; ++a) r *= p(k_[static_cast<std::size_t>(a)], x[static_cast<std::size_t>(a)], t);
  return r;
}

Point CaloricPolynomial::gradient(const Point& x, double t) const {
  Point g{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) {
    double r = 1.0;
    for (int b = 0; b < dim_; ++b) {
      const auto ub = static_cast<std::size_t>(b);
      r *= b == a ? k_[ub] * p(k_[ub] - 1, x[ub], t) : p(k_[ub], x[ub], t);
    }
    g[static_cast<std::size_t>(a)] = r;
  }
  return g;
}

CaloricPolynomial caloric_polynomial(int m, int dim) {
  if (m < 0 || m > 6) throw InvalidArgument("caloric polynomial degree must lie in 0..6");
  return CaloricPolynomial(dim, {m, 0, 0});
}

HermiteData::HermiteData(int dim, MultiIndex degrees) : dim_(dim), k_(degrees) {
  if (dim < 1 || dim > 3) throw InvalidArgument("Hermite data dimension must be 1, 2, or 3");
  for (int a = 0; a < 3; ++a) {
    const int k = k_[static_cast<std::size_t>(a)];
    if (a >= dim && k != 0) throw InvalidArgument("degree set on an unused axis");
    if (k < 0 || k > 16) throw InvalidArgument("Hermite degree out of range");
  }
}

int HermiteData::degree() const { return k_[0] + k_[1] + k_[2]; }

double HermiteData::hermite(int k, double x) {
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * x;
  for (int j = 1; j < k; ++j) {
    const double next = 2.0 * x * cur - 2.0 * j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double HermiteData::operator()(const Point& y) const {
  double r2 = 0.0;
  double r = 1.0;
  for (int a = 0; a < dim_; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    r *= hermite(k_[ua], 0.5 * y[ua]);
    r2 += y[ua] * y[ua];
  }
  return r * std::exp(-r2 / 8.0);
}

HermiteData hermite_data(int m, int dim) {
  if (m < 0 || m > 8) throw InvalidArgument("Hermite mode must lie in 0..8");
  return HermiteData(dim, {m, 0, 0});
}

}  // namespace uclab
