#include "uclab/uniqueness_suite.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "uclab/quadrature.hpp"

namespace uclab {
namespace {

struct BallRule {
  std::vector<Point> nodes;
  std::vector<double> weights;
};

// Product rule on the unit ball: Gauss-Legendre radially (and in cos theta),
// uniform in the periodic angles.
const BallRule& unit_ball(int dim) {
  static const std::array<BallRule, 3> rules = [] {
    std::array<BallRule, 3> out;
    const auto line = gauss_legendre(32, -1.0, 1.0);
    for (std::size_t i = 0; i < line.nodes.size(); ++i) {
      out[0].nodes.push_back({line.nodes[i], 0.0, 0.0});
      out[0].weights.push_back(line.weights[i]);
    }
    const auto radial = gauss_legendre(24, 0.0, 1.0);
    const int m = 48;
    const double dphi = 2.0 * kPi / m;
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
      const double r = radial.nodes[i];
      for (int j = 0; j < m; ++j) {
        const double phi = (j + 0.5) * dphi;
        out[1].nodes.push_back({r * std::cos(phi), r * std::sin(phi), 0.0});
        out[1].weights.push_back(radial.weights[i] * r * dphi);
      }
    }
    const auto ct = gauss_legendre(24, -1.0, 1.0);
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
      const double r = radial.nodes[i];
      for (std::size_t k = 0; k < ct.nodes.size(); ++k) {
        const double c = ct.nodes[k];
        const double s = std::sqrt(1.0 - c * c);
        for (int j = 0; j < m; ++j) {
          const double phi = (j + 0.5) * dphi;
          out[2].nodes.push_back({r * s * std::cos(phi), r * s * std::sin(phi), r * c});
          out[2].weights.push_back(radial.weights[i] * r * r * ct.weights[k] * dphi);
        }
      }
    }
    return out;
  }();
  return rules[static_cast<std::size_t>(dim - 1)];
}

const QuadratureRule& time_rule() {
  static const QuadratureRule rule = gauss_legendre(16, -1.0, 0.0);
  return rule;
}

CylinderFit fit_cylinder(const std::vector<double>& radii, const std::vector<double>& norms, int dim) {
  CylinderFit out;
  out.radii = radii;
  out.norms = norms;
  bool all_zero = true;
  for (double v : norms) all_zero = all_zero && v == 0.0;
  if (all_zero) {
    out.resolution_limited = true;
    out.order = kInf;
    return out;
  }
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(norms[i] > 0.0)) throw InvalidArgument("cylinder norm vanished at a single radius");
    lx.push_back(std::log(radii[i]));
    ly.push_back(std::log(norms[i]));
  }
  out.fit = fit_line(lx, ly);
  out.order = out.fit.slope - 0.5 * (dim + 2);
  return out;
}

void check_radii(const std::vector<double>& radii) {
  if (radii.size() < 2) throw InvalidArgument("need at least two radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || radii[i] > 0.5) throw InvalidArgument("radii must lie in (0, 1/2]");
    if (i > 0 && !(radii[i] < radii[i - 1])) throw InvalidArgument("radii must be decreasing");
  }
}

}  // namespace

ScalarField start_point_ratios(const ScalarField& u, double eps, const LatticeQuadrature& quad) {
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  const auto num = gaussian_correlation(gradient(u).squared_magnitude(), -eps, quad);
  const auto den = gaussian_correlation(u * u, -eps, quad);
  std::vector<double> ratio(u.size());
  for (std::size_t i = 0; i < ratio.size(); ++i)
    ratio[i] = den[i] > 0.0 ? eps * std::max(0.0, num[i]) / den[i] : kInf;
  return ScalarField(u.spec(), std::move(ratio));
}

PointSelection select_start_point(const ScalarField& u, double eps, const LatticeQuadrature& quad) {
  const double qd = dirichlet_quotient(u);
  const auto ratios = start_point_ratios(u, eps, quad);
  PointSelection s;
  s.eps = eps;
  s.bound = 2.0 * eps * qd;
  s.achieved_ratio = kInf;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (ratios[i] < s.achieved_ratio) {
      s.achieved_ratio = ratios[i];
      s.node = i;
    }
  }
  s.x_eps = u.spec().position(s.node);
  // Round-off allowance for the FFT correlation.
  s.certified = s.achieved_ratio <= s.bound * (1.0 + 1e-10) + 1e-13;
  if (!s.certified)
    throw CertificationError("start point not certified: ratio " + std::to_string(s.achieved_ratio) +
                             " > bound " + std::to_string(s.bound));
  return s;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("line fit needs two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("line fit needs distinct abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i)
    f.max_residual = std::max(f.max_residual, std::abs(y[i] - f.intercept - f.slope * x[i]));
  return f;
}

std::vector<double> default_radii() {
  std::vector<double> r;
  for (int k = 3; k <= 7; ++k) r.push_back(std::ldexp(1.0, -k));
  return r;
}

std::vector<double> default_gaussian_times(double t0) {
  std::vector<double> t;
  for (int k = 2; k <= 6; ++k) t.push_back(t0 - std::pow(4.0, -k));
  return t;
}

std::vector<double> cylinder_time_nodes(double t0, double r) {
  std::vector<double> t;
  for (double s : time_rule().nodes) t.push_back(t0 + r * r * s);
  return t;
}

double cylinder_norm(const AnalyticSolution& u, const Point& x0, double t0, double r) {
  const auto& ball = unit_ball(u.dim);
  const auto& tr = time_rule();
  double sum = 0.0;
  for (std::size_t k = 0; k < tr.nodes.size(); ++k) {
    const double t = t0 + r * r * tr.nodes[k];
    for (std::size_t i = 0; i < ball.nodes.size(); ++i) {
      Point x{0.0, 0.0, 0.0};
      for (int a = 0; a < u.dim; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        x[ua] = x0[ua] + r * ball.nodes[i][ua];
      }
      const double v = u.value(x, t);
      sum += tr.weights[k] * ball.weights[i] * v * v;
    }
  }
  return std::pow(r, 0.5 * (u.dim + 2)) * std::sqrt(sum);
}

double cylinder_norm(const Trajectory& traj, const Point& x0, double t0, double r) {
  const auto& samples = traj.samples;
  if (samples.empty()) throw InvalidArgument("empty trajectory");
  if (t0 - r * r < samples.front().first || t0 > samples.back().first)
    throw InvalidArgument("cylinder leaves the trajectory's time range");
  const int dim = samples.front().second.spec().dim();
  const auto& ball = unit_ball(dim);
  const auto& tr = time_rule();
  std::map<std::size_t, Spectrum> spectra;
  auto spectrum_of = [&](std::size_t i) -> const Spectrum& {
    auto it = spectra.find(i);
    if (it == spectra.end()) it = spectra.emplace(i, to_spectrum(samples[i].second)).first;
    return it->second;
  };
  double sum = 0.0;
  for (std::size_t k = 0; k < tr.nodes.size(); ++k) {
    const double t = t0 + r * r * tr.nodes[k];
    auto hi = std::upper_bound(samples.begin(), samples.end(), t,
                               [](double v, const auto& s) { return v < s.first; });
    if (hi == samples.end()) --hi;
    if (hi == samples.begin()) ++hi;
    const std::size_t j = static_cast<std::size_t>(hi - samples.begin());
    const double ta = samples[j - 1].first;
    const double tb = samples[j].first;
    const double theta = (t - ta) / (tb - ta);
    const auto& sa = spectrum_of(j - 1);
    const auto& sb = spectrum_of(j);
    Spectrum mix{sa.spec, sa.coefficients};
    for (std::size_t i = 0; i < mix.coefficients.size(); ++i)
      mix.coefficients[i] = (1.0 - theta) * sa.coefficients[i] + theta * sb.coefficients[i];
    for (std::size_t i = 0; i < ball.nodes.size(); ++i) {
      Point x{0.0, 0.0, 0.0};
      for (int a = 0; a < dim; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        x[ua] = x0[ua] + r * ball.nodes[i][ua];
      }
      const double v = interpolate(mix, x);
      sum += tr.weights[k] * ball.weights[i] * v * v;
    }
  }
  return std::pow(r, 0.5 * (dim + 2)) * std::sqrt(sum);
}

CylinderFit vanishing_order_cylinder(const AnalyticSolution& u, const Point& x0, double t0,
                                     const std::vector<double>& radii) {
  check_radii(radii);
  std::vector<double> norms;
  for (double r : radii) norms.push_back(cylinder_norm(u, x0, t0, r));
  return fit_cylinder(radii, norms, u.dim);
}

CylinderFit vanishing_order_cylinder(const Trajectory& traj, const Point& x0, double t0,
                                     const std::vector<double>& radii) {
  check_radii(radii);
  if (traj.samples.empty()) throw InvalidArgument("empty trajectory");
  std::vector<double> norms;
  for (double r : radii) norms.push_back(cylinder_norm(traj, x0, t0, r));
  return fit_cylinder(radii, norms, traj.samples.front().second.spec().dim());
}

GaussianFit vanishing_order_gaussian(const std::vector<GaussianSample>& samples, double t0) {
  if (samples.size() < 5) throw InvalidArgument("Gaussian fit needs at least 5 sample times");
  std::vector<double> lx;
  std::vector<double> ly;
  for (const auto& s : samples) {
    if (!(s.t < t0)) throw InvalidArgument("Gaussian samples must precede t0");
    if (!(s.integral > 0.0)) throw InvalidArgument("nonpositive Gaussian integral at t = " + std::to_string(s.t));
    lx.push_back(std::log(t0 - s.t));
    ly.push_back(std::log(s.integral));
  }
  GaussianFit out;
  out.fit = fit_line(lx, ly);
  out.order = out.fit.slope;
  for (std::size_t i = 0; i + 1 < lx.size(); ++i) {
    const double local = (ly[i + 1] - ly[i]) / (lx[i + 1] - lx[i]);
    out.delta = std::max(out.delta, std::abs(local - out.order));
  }
  return out;
}

std::vector<GaussianSample> gaussian_samples(const AnalyticSolution& u, const Point& x0, double t0,
                                             const std::vector<double>& times) {
  std::vector<GaussianSample> out;
  for (double t : times) {
    // Shift the solution so that G is centred at (x0, t0).
    AnalyticSolution shifted{u.dim, [&u, t0](const Point& x, double s) { return u.value(x, s + t0); },
                             [&u, t0](const Point& x, double s) { return u.gradient(x, s + t0); }};
    out.push_back({t, physical_frequency(shifted, t - t0, x0, {}).mass});
  }
  return out;
}

std::vector<GaussianSample> gaussian_samples(const Trajectory& traj, const Point& x0, double t0,
                                             const std::vector<double>& times) {
  std::vector<GaussianSample> out;
  for (double t : times) {
    const auto& u = traj.at(t);
    const BackwardGaussian g(u.spec().dim(), x0, t - t0);
    out.push_back({t, spectral_gaussian_integrals(product_spectrum(u, u), g, false).mass});
  }
  return out;
}

VanishingReport vanishing_report(const AnalyticSolution& u, const Point& x0, const ExponentSet& exps,
                                 double span) {
  VanishingReport r;
  r.bound = exps.M;
  r.cylinder = vanishing_order_cylinder(u, x0, 0.0);
  r.d_cyl = r.cylinder.order;
  r.gaussian = vanishing_order_gaussian(gaussian_samples(u, x0, 0.0, default_gaussian_times()));
  r.m_gauss = r.gaussian.order;
  r.trace = trace_analytic(u, tau_ladder(exps.tau0, span), x0, x0, exps.eps);
  const auto lm = limit_mode(r.trace);
  r.m_freq = lm.m;
  r.freq_stable = lm.stable;
  r.qbar_final = r.trace.samples.back().Qbar;
  return r;
}

OrderVerdict verify_order_bound(const VanishingReport& report, const ExponentSet& exps, double c_fit) {
  OrderVerdict v;
  v.order = std::max({report.d_cyl, report.m_gauss, static_cast<double>(report.m_freq)});
  v.bound = std::pow(exps.M0, exps.a) + std::pow(exps.M1, exps.b);
  v.c_fit = c_fit;
  v.margin = c_fit * v.bound - v.order;
  v.pass = v.margin >= 0.0;
  return v;
}

double fit_constant(const std::vector<double>& values, const std::vector<double>& bounds) {
  if (values.size() != bounds.size() || values.empty()) throw InvalidArgument("fit needs matched, nonempty data");
  double c = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(bounds[i] > 0.0)) throw InvalidArgument("bounds must be positive");
    c = std::max(c, values[i] / bounds[i]);
  }
  return c;
}

}  // namespace uclab
