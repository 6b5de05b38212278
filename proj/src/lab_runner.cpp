#include "uclab/lab_runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <fftw3.h>

#include "uclab/selftest.hpp"

namespace uclab {
namespace {

std::string fmt_int(long long v) { return std::to_string(v); }
std::string fmt_bool(bool b) { return b ? "1" : "0"; }
std::string fmt_opt(const std::optional<double>& v) { return v ? format_real(*v) : std::string("none"); }

std::string short_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string point_label(const SweepPoint& p) {
  std::string s = "M0=" + short_real(p.M0) + " M1=" + short_real(p.M1) + " p=" + short_real(p.p) +
                  " q=" + short_real(p.q);
  if (p.p2) s += " p2=" + short_real(*p.p2);
  if (p.q2) s += " q2=" + short_real(*p.q2);
  return s;
}

std::vector<std::string> point_header() { return {"point", "run", "M0", "M1", "p", "q", "p2", "q2"}; }

std::vector<std::string> point_cells(const EnsembleMember& m) {
  return {fmt_int(static_cast<long long>(m.point_index)),
          fmt_int(m.run),
          format_real(m.point.M0),
          format_real(m.point.M1),
          format_real(m.point.p),
          format_real(m.point.q),
          fmt_opt(m.point.p2),
          fmt_opt(m.point.q2)};
}

template <typename... T>
std::vector<std::string> concat(std::vector<std::string> a, const T&... rest) {
  (a.insert(a.end(), rest.begin(), rest.end()), ...);
  return a;
}

ExponentSet point_exponents(const ExperimentConfig& cfg, const SweepPoint& p) {
  try {
    return exponents(cfg.dim, p.p, p.q, p.M0, p.M1, p.p2, p.q2);
  } catch (const GateViolation& e) {
    throw ConfigError(std::string("exponent gate ") + e.what() + " at " + point_label(p));
  }
}

Coefficients make_coefficients(const ExperimentConfig& cfg, const SweepPoint& p, const GridSpec& grid,
                               std::uint64_t run_id) {
  Coefficients c;
  switch (cfg.family) {
    case CoefficientFamily::Zero: c = Coefficients::zero(); break;
    case CoefficientFamily::Constant: c = Coefficients::constant(grid, cfg.lambda); break;
    case CoefficientFamily::RandomTrig: {
      RandomTrigSpec s;
      s.seed = *cfg.seed;
      s.run = run_id;
      s.mode_cap = cfg.mode_cap;
      s.M0 = p.M0;
      s.M1 = p.M1;
      s.p = p.p;
      s.q = p.q;
      s.p2 = p.p2;
      s.q2 = p.q2;
      s.omega = cfg.omega;
      c = random_trig_coefficients(s, grid);
      break;
    }
  }
  c.p = p.p;
  c.q = p.q;
  c.p2 = p.p2;
  c.q2 = p.q2;
  return c;
}

// Stream offset keeping initial data independent of coefficient draws.
constexpr std::uint64_t kInitialStream = 1ull << 40;

Plot qbar_plot(const std::string& file, const std::vector<Series>& series) {
  return {file, "modified frequency", "tau", "Qbar", series};
}

RunRecord trace_caloric(const ExperimentConfig& cfg) {
  RunRecord rec;
  const auto pt = sweep_points(cfg).front();
  const auto exps = point_exponents(cfg, pt);
  const auto taus = tau_ladder(exps.tau0, cfg.tau_span, cfg.tau_per_unit);
  rec.results.header = {"degree", "tau", "norm2", "Q", "Qbar", "distance", "identity_residual"};
  Plot plot = qbar_plot("qbar.svg", {});
  for (int m : cfg.degrees) {
    const auto u = AnalyticSolution::from(caloric_polynomial(m, cfg.dim));
    const auto trace = trace_analytic(u, taus, {}, {}, exps.eps);
    double worst_q = 0.0;
    double worst_id = 0.0;
    Series s{"m=" + std::to_string(m), {}, {}};
    for (const auto& smp : trace.samples) {
      const double t = -std::exp(-smp.tau);
      const auto U = to_similarity(u, smp.tau, {});
      const double id = norm_identity_residual(U, u, t, {});
      worst_q = std::max(worst_q, std::abs(smp.Qbar - 0.5 * m));
      worst_id = std::max(worst_id, id);
      rec.results.rows.push_back({fmt_int(m), format_real(smp.tau), format_real(smp.norm2), format_real(smp.Q),
                                  format_real(smp.Qbar), format_real(smp.distance), format_real(id)});
      s.x.push_back(smp.tau);
      s.y.push_back(smp.Qbar);
    }
    plot.series.push_back(s);
    rec.verdicts.push_back({"qbar_constant_m" + std::to_string(m), worst_q <= 1e-6,
                            "max |Qbar - m/2| = " + format_real(worst_q)});
    rec.verdicts.push_back({"identity_m" + std::to_string(m), worst_id <= 1e-6,
                            "max residual = " + format_real(worst_id)});
  }
  rec.plots.push_back(plot);
  return rec;
}

RunRecord trace_simulate(const ExperimentConfig& cfg) {
  RunRecord rec;
  const auto members = run_ensemble(cfg, {});
  rec.results.header = concat(point_header(), std::vector<std::string>{"tau", "norm2", "Q", "Qbar", "distance"});
  Table summary;
  summary.header = concat(point_header(),
                          std::vector<std::string>{"eps", "x_eps_1", "x_eps_2", "x_eps_3", "start_ratio",
                                                   "start_bound", "sup_qbar", "bound", "ratio", "limit_m",
                                                   "limit_stable"});
  Plot plot = qbar_plot("qbar.svg", {});
  bool certified = true;
  for (const auto& m : members) {
    Series s{point_label(m.point) + " run=" + std::to_string(m.run), {}, {}};
    for (const auto& smp : m.trace.samples) {
      rec.results.rows.push_back(concat(point_cells(m),
                                        std::vector<std::string>{format_real(smp.tau), format_real(smp.norm2),
                                                                 format_real(smp.Q), format_real(smp.Qbar),
                                                                 format_real(smp.distance)}));
      s.x.push_back(smp.tau);
      s.y.push_back(smp.Qbar);
    }
    plot.series.push_back(s);
    const auto lm = limit_mode(m.trace);
    const double sup = m.trace.sup_qbar();
    summary.rows.push_back(concat(
        point_cells(m),
        std::vector<std::string>{format_real(m.exps.eps), format_real(m.start.x_eps[0]), format_real(m.start.x_eps[1]),
                                 format_real(m.start.x_eps[2]), format_real(m.start.achieved_ratio),
                                 format_real(m.start.bound), format_real(sup), format_real(m.exps.M),
                                 format_real(sup / m.exps.M), fmt_int(lm.m), fmt_bool(lm.stable)}));
    certified = certified && m.start.certified;
  }
  const auto b = summarize_boundedness(members);
  rec.verdicts.push_back({"start_point_certified", certified, "all runs"});
  rec.verdicts.push_back({"qbar_boundedness", b.pass,
                          "c_fit = " + format_real(b.c_fit) + ", min margin = " + format_real(b.min_margin) +
                              ", spread = " + format_real(b.spread) + " (limit " + format_real(kSpreadLimit) + ")"});
  rec.summary = summary;
  rec.plots.push_back(plot);
  return rec;
}

Plot loglog_plot(const std::string& file, const std::string& title, const std::string& xl, const std::string& yl) {
  return {file, title, xl, yl, {}};
}

RunRecord vanish_caloric(const ExperimentConfig& cfg) {
  RunRecord rec;
  const auto pt = sweep_points(cfg).front();
  const auto exps = point_exponents(cfg, pt);
  rec.results.header = {"degree", "d_cyl", "m_gauss", "m_freq", "qbar_final", "freq_stable",
                        "cyl_residual", "gauss_delta", "bound"};
  Plot cyl = loglog_plot("cylinder_fit.svg", "cylinder norms", "log r", "log ||u||");
  Plot gau = loglog_plot("gaussian_fit.svg", "Gaussian mass", "log |t|", "log int u^2 G");
  for (int m : cfg.degrees) {
    const auto u = AnalyticSolution::from(caloric_polynomial(m, cfg.dim));
    const auto r = vanishing_report(u, {}, exps, cfg.tau_span);
    rec.results.rows.push_back({fmt_int(m), format_real(r.d_cyl), format_real(r.m_gauss), fmt_int(r.m_freq),
                                format_real(r.qbar_final), fmt_bool(r.freq_stable),
                                format_real(r.cylinder.fit.max_residual), format_real(r.gaussian.delta),
                                format_real(r.bound)});
    Series sc{"m=" + std::to_string(m), {}, {}};
    for (std::size_t i = 0; i < r.cylinder.radii.size(); ++i) {
      sc.x.push_back(std::log(r.cylinder.radii[i]));
      sc.y.push_back(std::log(r.cylinder.norms[i]));
    }
    cyl.series.push_back(sc);
    Series sg{"m=" + std::to_string(m), {}, {}};
    for (double t : default_gaussian_times()) sg.x.push_back(std::log(-t));
    for (const auto& g : gaussian_samples(u, {}, 0.0, default_gaussian_times())) sg.y.push_back(std::log(g.integral));
    gau.series.push_back(sg);
    const double mm = m;
    const double worst = std::max({std::abs(r.d_cyl - mm), std::abs(r.m_gauss - mm), std::abs(r.m_freq - mm)});
    const double pair = std::max({std::abs(r.d_cyl - r.m_gauss), std::abs(r.m_gauss - r.m_freq),
                                  std::abs(r.d_cyl - r.m_freq)});
    rec.verdicts.push_back({"recovery_m" + std::to_string(m), worst <= 0.05, "max error = " + format_real(worst)});
    rec.verdicts.push_back({"agreement_m" + std::to_string(m), pair <= 0.1, "max gap = " + format_real(pair)});
  }
  rec.plots.push_back(cyl);
  rec.plots.push_back(gau);
  return rec;
}

RunRecord vanish_simulate(const ExperimentConfig& cfg) {
  RunRecord rec;
  EnsembleOptions opts;
  opts.vanishing = true;
  const auto members = run_ensemble(cfg, opts);
  std::vector<double> orders;
  std::vector<double> bounds;
  for (const auto& m : members) {
    const auto& v = *m.vanishing;
    orders.push_back(std::max({v.d_cyl, v.m_gauss, static_cast<double>(v.m_freq)}));
    bounds.push_back(m.exps.M);
  }
  const double c_fit = fit_constant(orders, bounds);
  rec.results.header = concat(point_header(), std::vector<std::string>{"d_cyl", "m_gauss", "m_freq", "qbar_final",
                                                                       "bound", "c_fit", "margin", "pass"});
  bool all = true;
  bool finite = true;
  for (const auto& m : members) {
    const auto ov = verify_order_bound(*m.vanishing, m.exps, c_fit);
    all = all && ov.pass;
    finite = finite && std::isfinite(m.vanishing->d_cyl) && std::isfinite(m.vanishing->m_gauss);
    rec.results.rows.push_back(concat(
        point_cells(m), std::vector<std::string>{format_real(m.vanishing->d_cyl), format_real(m.vanishing->m_gauss),
                                                 fmt_int(m.vanishing->m_freq), format_real(m.vanishing->qbar_final),
                                                 format_real(ov.bound), format_real(c_fit), format_real(ov.margin),
                                                 fmt_bool(ov.pass)}));
  }
  rec.verdicts.push_back({"estimates_finite", finite, "all runs"});
  rec.verdicts.push_back({"order_bound", all && std::isfinite(c_fit), "c_fit = " + format_real(c_fit)});
  return rec;
}

RunRecord double_simulate(const ExperimentConfig& cfg) {
  if (cfg.source != DataSource::Simulate) throw ConfigError("config field 'source': double runs need simulate");
  RunRecord rec;
  EnsembleOptions opts;
  opts.doubling = true;
  const auto members = run_ensemble(cfg, opts);
  rec.results.header = concat(point_header(),
                              std::vector<std::string>{"delta0", "delta", "gamma", "exponent", "exponent_poly",
                                                       "admissible", "t", "ratio", "log_ratio", "margin", "pass"});
  std::size_t passed = 0;
  std::size_t total = 0;
  bool admissible = true;
  for (const auto& m : members) {
    for (const auto& d : m.doubling) {
      admissible = admissible && d.choice.admissible;
      for (const auto& v : d.verdicts) {
        ++total;
        passed += v.pass ? 1 : 0;
        rec.results.rows.push_back(concat(
            point_cells(m),
            std::vector<std::string>{format_real(d.delta0), format_real(d.choice.delta), format_real(d.choice.gamma),
                                     format_real(d.exponent), format_real(d.exponent_poly),
                                     fmt_bool(d.choice.admissible), format_real(v.t), format_real(v.ratio),
                                     format_real(v.log_ratio), format_real(v.margin), fmt_bool(v.pass)}));
      }
    }
  }
  rec.verdicts.push_back({"doubling_bound", passed == total && total > 0,
                          std::to_string(passed) + "/" + std::to_string(total) + " sampled times pass" +
                              (admissible ? "" : "; delta admissibility constant not met at some points")});
  return rec;
}

RunRecord moments_table(const ExperimentConfig& cfg) {
  RunRecord rec;
  rec.results.header = {"dim", "mu1", "mu2", "mu3", "l", "t", "radius", "value", "odd", "scaling_residual"};
  bool odd_zero = true;
  double worst_scaling = 0.0;
  for (const auto& mu : cfg.mu)
    for (int l : cfg.time_powers)
      for (double t : cfg.times)
        for (double r : cfg.radii) {
          const double v = moment(cfg.dim, mu, l, t, r);
          bool odd = false;
          int degree = 0;
          for (int a = 0; a < cfg.dim; ++a) {
            odd = odd || (mu[static_cast<std::size_t>(a)] % 2 == 1);
            degree += mu[static_cast<std::size_t>(a)];
          }
          if (odd) odd_zero = odd_zero && v == 0.0;
          double scaling = 0.0;
          if (std::isinf(r)) {
            const double ref = moment(cfg.dim, mu, l, -1.0, kInf);
            const double expect = std::pow(-t, l + 0.5 * degree) * ref;
            scaling = ref == 0.0 ? std::abs(v) : std::abs(v - expect) / std::abs(expect);
            worst_scaling = std::max(worst_scaling, scaling);
          }
          rec.results.rows.push_back({fmt_int(cfg.dim), fmt_int(mu[0]), fmt_int(mu[1]), fmt_int(mu[2]), fmt_int(l),
                                      format_real(t), format_real(r), format_real(v), fmt_bool(odd),
                                      format_real(scaling)});
        }
  rec.verdicts.push_back({"odd_moments_vanish", odd_zero, "exact zero required"});
  rec.verdicts.push_back({"moment_scaling", worst_scaling <= 1e-10, "max residual = " + format_real(worst_scaling)});
  return rec;
}

RunRecord exponents_table(const ExperimentConfig& cfg) {
  RunRecord rec;
  rec.results.header = {"dim", "p", "q", "p2", "q2", "M0", "M1", "alpha", "beta", "a", "b", "M", "eps", "tau0"};
  bool eps_ok = true;
  for (const auto& pt : sweep_points(cfg)) {
    const auto e = point_exponents(cfg, pt);
    eps_ok = eps_ok && e.eps > 0.0 && e.eps <= 0.5;
    rec.results.rows.push_back({fmt_int(cfg.dim), format_real(pt.p), format_real(pt.q), fmt_opt(pt.p2),
                                fmt_opt(pt.q2), format_real(pt.M0), format_real(pt.M1), format_real(e.alpha),
                                format_real(e.beta), format_real(e.a), format_real(e.b), format_real(e.M),
                                format_real(e.eps), format_real(e.tau0)});
  }
  rec.verdicts.push_back({"eps_in_range", eps_ok, "eps in (0, 1/2]"});
  return rec;
}

RunRecord selftest_table() {
  RunRecord rec;
  rec.results.header = {"fixture", "residual", "tolerance", "pass"};
  for (const auto& f : run_selftest()) {
    rec.results.rows.push_back({f.name, format_real(f.residual), format_real(f.tolerance), fmt_bool(f.pass)});
    rec.verdicts.push_back({f.name, f.pass, f.note});
  }
  return rec;
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string Table::csv() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

bool RunRecord::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::vector<SweepPoint> sweep_points(const ExperimentConfig& cfg) {
  std::vector<SweepPoint> pts;
  for (std::size_t i = 0; i < cfg.p.size(); ++i)
    for (std::size_t j = 0; j < cfg.p2.size(); ++j)
      for (double m0 : cfg.M0)
        for (double m1 : cfg.M1) pts.push_back({m0, m1, cfg.p[i], cfg.q[i], cfg.p2[j], cfg.q2[j]});
  return pts;
}

EnsembleMember run_member(const ExperimentConfig& cfg, std::size_t point_index, int run, const EnsembleOptions& opts) {
  if (!cfg.seed) throw ConfigError("config field 'seed': required for simulated data");
  const auto points = sweep_points(cfg);
  if (point_index >= points.size()) throw InvalidArgument("sweep point index out of range");
  EnsembleMember m;
  m.point_index = point_index;
  m.point = points[point_index];
  m.run = run;
  m.exps = point_exponents(cfg, m.point);
  if (-cfg.t0 < m.exps.eps) throw ConfigError("config field 't0': must not exceed -eps = " + format_real(-m.exps.eps));

  const GridSpec grid(cfg.dim, cfg.points);
  const auto run_id = static_cast<std::uint64_t>(point_index) * static_cast<std::uint64_t>(cfg.runs) +
                      static_cast<std::uint64_t>(run);
  const auto coeffs = make_coefficients(cfg, m.point, grid, run_id);
  auto u0 = random_trig_field(grid, cfg.initial_mode_cap, *cfg.seed, kInitialStream + run_id);
  u0 = u0.scaled(1.0 / lp_norm(u0, 2.0));

  const auto taus = tau_ladder(m.exps.tau0, cfg.tau_span, cfg.tau_per_unit);
  SimulationConfig sim;
  sim.grid = grid;
  sim.t0 = cfg.t0;
  sim.duration = -cfg.t0;
  sim.dt = cfg.dt;
  sim.scheme = cfg.scheme;
  for (double tau : taus) sim.sample_times.push_back(-std::exp(-tau));
  std::vector<std::vector<double>> dtimes;
  if (opts.doubling) {
    for (double d0 : cfg.delta0) {
      dtimes.push_back(doubling_times(choose_delta(d0, m.exps).delta, cfg.doubling_samples));
      sim.sample_times.insert(sim.sample_times.end(), dtimes.back().begin(), dtimes.back().end());
    }
  }
  if (opts.vanishing) {
    for (double r : default_radii()) {
      const auto nodes = cylinder_time_nodes(0.0, r);
      sim.sample_times.insert(sim.sample_times.end(), nodes.begin(), nodes.end());
    }
    const auto gt = default_gaussian_times();
    sim.sample_times.insert(sim.sample_times.end(), gt.begin(), gt.end());
  }
  const auto traj = solve(sim, u0, coeffs);

  m.start = select_start_point(traj.at(sim.sample_times.front()), m.exps.eps);
  m.trace = trace_trajectory(traj, taus, {}, m.start.x_eps, m.exps.eps);
  for (std::size_t i = 0; i < dtimes.size(); ++i)
    m.doubling.push_back(check_doubling(traj, m.exps, cfg.delta0[i], dtimes[i], {}));
  if (opts.vanishing) {
    VanishingReport v;
    v.bound = m.exps.M;
    v.cylinder = vanishing_order_cylinder(traj, {}, 0.0);
    v.d_cyl = v.cylinder.order;
    v.gaussian = vanishing_order_gaussian(gaussian_samples(traj, {}, 0.0, default_gaussian_times()));
    v.m_gauss = v.gaussian.order;
    const auto lm = limit_mode(m.trace);
    v.m_freq = lm.m;
    v.freq_stable = lm.stable;
    v.qbar_final = m.trace.samples.back().Qbar;
    v.trace = m.trace;
    m.vanishing = v;
  }
  return m;
}

std::vector<EnsembleMember> run_ensemble(const ExperimentConfig& cfg, const EnsembleOptions& opts) {
  const auto points = sweep_points(cfg);
  const std::size_t total = points.size() * static_cast<std::size_t>(cfg.runs);
  std::vector<std::optional<EnsembleMember>> slots(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        slots[i] = run_member(cfg, i / static_cast<std::size_t>(cfg.runs),
                              static_cast<int>(i % static_cast<std::size_t>(cfg.runs)), opts);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), total);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<EnsembleMember> out;
  out.reserve(total);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

BoundednessSummary summarize_boundedness(const std::vector<EnsembleMember>& members) {
  BoundednessSummary b;
  if (members.empty()) return b;
  std::vector<double> sups;
  std::vector<double> bounds;
  for (const auto& m : members) {
    sups.push_back(m.trace.sup_qbar());
    bounds.push_back(m.exps.M);
  }
  b.c_fit = fit_constant(sups, bounds);
  b.min_ratio = kInf;
  b.max_ratio = -kInf;
  b.min_margin = kInf;
  for (std::size_t i = 0; i < sups.size(); ++i) {
    const double r = sups[i] / bounds[i];
    b.min_ratio = std::min(b.min_ratio, r);
    b.max_ratio = std::max(b.max_ratio, r);
    b.min_margin = std::min(b.min_margin, b.c_fit * bounds[i] - sups[i]);
  }
  b.spread = b.min_ratio > 0.0 ? b.max_ratio / b.min_ratio : kInf;
  b.pass = std::isfinite(b.c_fit) && b.min_margin >= 0.0 && b.spread <= kSpreadLimit;
  return b;
}

RunRecord run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  switch (cfg.kind) {
    case ExperimentKind::Trace:
      rec = cfg.source == DataSource::Caloric ? trace_caloric(cfg) : trace_simulate(cfg);
      break;
    case ExperimentKind::Vanish:
      rec = cfg.source == DataSource::Caloric ? vanish_caloric(cfg) : vanish_simulate(cfg);
      break;
    case ExperimentKind::Double: rec = double_simulate(cfg); break;
    case ExperimentKind::Moments: rec = moments_table(cfg); break;
    case ExperimentKind::Exponents: rec = exponents_table(cfg); break;
    case ExperimentKind::Selftest: rec = selftest_table(); break;
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rec.hash = config_hash(cfg);
  return rec;
}

void write_record(const RunRecord& rec, const ExperimentConfig& cfg, const std::filesystem::path& out, bool plots) {
  std::filesystem::create_directories(out);
  auto write = [&out](const std::string& name, const std::string& body) {
    std::ofstream f(out / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (out / name).string());
    f << body;
  };
  write("results.csv", rec.results.csv());
  if (rec.summary) write("summary.csv", rec.summary->csv());

  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(rec.hash));
  std::ostringstream meta;
  std::size_t failed = 0;
  for (const auto& v : rec.verdicts) failed += v.pass ? 0 : 1;
  meta << "tool = uclab " << UCLAB_VERSION << "\n"
       << "schema_version = " << kSchemaVersion << "\n"
       << "kind = " << kind_name(cfg.kind) << "\n"
       << "config_hash = " << hash << "\n"
       << "fftw = " << fftw_version << "\n"
       << "compiler = " << __VERSION__ << "\n"
       << "finished_utc = " << timestamp_utc() << "\n"
       << "wall_seconds = " << short_real(rec.seconds) << "\n"
       << "verdicts_total = " << rec.verdicts.size() << "\n"
       << "verdicts_failed = " << failed << "\n";
  for (const auto& v : rec.verdicts) meta << "verdict " << v.name << " = " << (v.pass ? "pass" : "FAIL") << " # " << v.detail << "\n";
  meta << "\n[config]\n" << canonical_text(cfg);
  write("meta.txt", meta.str());

  if (plots)
    for (const auto& p : rec.plots) write(p.file, render_svg(p));
}

std::string render_svg(const Plot& plot) {
  const double W = 720;
  const double H = 440;
  const double L = 70;
  const double R = 180;
  const double T = 40;
  const double B = 50;
  double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
  for (const auto& s : plot.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!(xmin < xmax)) { xmin -= 1; xmax += 1; }
  if (!(ymin < ymax)) { ymin -= 1; ymax += 1; }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  auto sx = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto sy = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::ostringstream o;
  char buf[128];
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(plot.title)
    << "</text>\n";
  std::snprintf(buf, sizeof buf, "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n",
                L, T, W - L - R, H - T - B);
  o << buf;
  for (int k = 0; k <= 4; ++k) {
    const double xv = xmin + k * (xmax - xmin) / 4;
    const double yv = ymin + k * (ymax - ymin) / 4;
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\" font-size=\"11\">%.4g</text>\n",
                  sx(xv), H - B + 16, xv);
    o << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"end\" font-size=\"11\">%.4g</text>\n",
                  L - 6, sy(yv) + 4, yv);
    o << buf;
  }
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
    << xml_escape(plot.x_label) << "</text>\n";
  o << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
    << (T + H - B) / 2 << ")\">" << xml_escape(plot.y_label) << "</text>\n";
  const std::size_t legend_max = 12;
  for (std::size_t i = 0; i < plot.series.size(); ++i) {
    const auto& s = plot.series[i];
    const char* color = colors[i % 10];
    o << "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"" << color << "\" points=\"";
    for (std::size_t j = 0; j < s.x.size(); ++j) {
      if (!std::isfinite(s.x[j]) || !std::isfinite(s.y[j])) continue;
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(s.x[j]), sy(s.y[j]));
      o << buf;
    }
    o << "\"/>\n";
    if (i < legend_max) {
      const double ly = T + 14 + 16 * static_cast<double>(i);
      std::snprintf(buf, sizeof buf, "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"%s\"/>\n", W - R + 10, ly,
                    W - R + 28, ly, color);
      o << buf;
      o << "<text x=\"" << W - R + 32 << "\" y=\"" << ly + 4 << "\" font-size=\"10\">" << xml_escape(s.label)
        << "</text>\n";
    }
  }
  if (plot.series.size() > legend_max)
    o << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 14 + 16 * legend_max << "\" font-size=\"10\">+"
      << plot.series.size() - legend_max << " more</text>\n";
  o << "</svg>\n";
  return o.str();
}

}  // namespace uclab
