#include "uclab/lab_config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace uclab {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

[[noreturn]] void fail(const std::string& key, const std::string& why) {
  throw ConfigError("config field '" + key + "': " + why);
}

double to_real(const std::string& key, const std::string& v) {
  const std::string s = lower(v);
  if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
  if (s.empty()) fail(key, "empty value");
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (errno != 0 || end != v.c_str() + v.size() || std::isnan(x)) fail(key, "not a number: '" + v + "'");
  return x;
}

long long to_integer(const std::string& key, const std::string& v) {
  if (v.empty()) fail(key, "empty value");
  errno = 0;
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (errno != 0 || end != v.c_str() + v.size()) fail(key, "not an integer: '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const long long x = to_integer(key, v);
  if (x < -1000000000LL || x > 1000000000LL) fail(key, "integer out of range");
  return static_cast<int>(x);
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  if (v.empty() || v[0] == '-') fail(key, "expected a nonnegative integer");
  errno = 0;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (errno != 0 || end != v.c_str() + v.size()) fail(key, "not an unsigned integer: '" + v + "'");
  return static_cast<std::uint64_t>(x);
}

std::vector<double> real_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split(v, ',')) out.push_back(to_real(key, item));
  if (out.empty()) fail(key, "list is empty");
  return out;
}

std::vector<std::optional<double>> optional_list(const std::string& key, const std::string& v) {
  std::vector<std::optional<double>> out;
  for (const auto& item : split(v, ',')) {
    if (lower(item) == "none") out.emplace_back(std::nullopt);
    else out.emplace_back(to_real(key, item));
  }
  if (out.empty()) fail(key, "list is empty");
  return out;
}

std::vector<int> int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& item : split(v, ',')) out.push_back(to_int(key, item));
  if (out.empty()) fail(key, "list is empty");
  return out;
}

std::vector<MultiIndex> index_list(const std::string& key, const std::string& v) {
  std::vector<MultiIndex> out;
  for (const auto& item : split(v, ',')) {
    const auto parts = split(item, ':');
    if (parts.empty() || parts.size() > 3) fail(key, "multi-index needs 1 to 3 components: '" + item + "'");
    MultiIndex m{0, 0, 0};
    for (std::size_t i = 0; i < parts.size(); ++i) m[i] = to_int(key, parts[i]);
    out.push_back(m);
  }
  if (out.empty()) fail(key, "list is empty");
  return out;
}

std::string real_text(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F f) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += f(v[i]);
  }
  return s;
}

std::string scheme_name(Scheme s) { return s == Scheme::Strang ? "strang" : "lie"; }
std::string family_name(CoefficientFamily f) {
  switch (f) {
    case CoefficientFamily::Zero: return "zero";
    case CoefficientFamily::Constant: return "constant";
    default: return "random_trig";
  }
}
std::string source_name(DataSource s) { return s == DataSource::Caloric ? "caloric" : "simulate"; }

}  // namespace

std::string kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Trace: return "trace";
    case ExperimentKind::Vanish: return "vanish";
    case ExperimentKind::Double: return "double";
    case ExperimentKind::Moments: return "moments";
    case ExperimentKind::Exponents: return "exponents";
    default: return "selftest";
  }
}

ExperimentKind parse_kind(const std::string& s) {
  const std::string k = lower(trim(s));
  if (k == "trace") return ExperimentKind::Trace;
  if (k == "vanish") return ExperimentKind::Vanish;
  if (k == "double") return ExperimentKind::Double;
  if (k == "moments") return ExperimentKind::Moments;
  if (k == "exponents") return ExperimentKind::Exponents;
  if (k == "selftest") return ExperimentKind::Selftest;
  fail("kind", "unknown experiment kind '" + s + "'");
}

ExperimentConfig parse_config(const std::string& text, std::optional<std::uint64_t> seed) {
  ExperimentConfig c;
  std::map<std::string, std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_version = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string val = trim(line.substr(eq + 1));
    if (seen.count(key)) fail(key, "given twice");
    seen[key] = val;

    if (key == "schema_version") {
      if (to_int(key, val) != kSchemaVersion) fail(key, "unsupported version '" + val + "'");
      have_version = true;
    } else if (key == "kind") {
      c.kind = parse_kind(val);
    } else if (key == "dim") {
      c.dim = to_int(key, val);
    } else if (key == "points") {
      c.points = to_int(key, val);
    } else if (key == "dt") {
      c.dt = to_real(key, val);
    } else if (key == "scheme") {
      const auto s = lower(val);
      if (s == "strang") c.scheme = Scheme::Strang;
      else if (s == "lie") c.scheme = Scheme::Lie;
      else fail(key, "expected strang or lie");
    } else if (key == "t0") {
      c.t0 = to_real(key, val);
    } else if (key == "source") {
      const auto s = lower(val);
      if (s == "caloric") c.source = DataSource::Caloric;
      else if (s == "simulate") c.source = DataSource::Simulate;
      else fail(key, "expected caloric or simulate");
    } else if (key == "coefficients") {
      const auto s = lower(val);
      if (s == "zero") c.family = CoefficientFamily::Zero;
      else if (s == "constant") c.family = CoefficientFamily::Constant;
      else if (s == "random_trig") c.family = CoefficientFamily::RandomTrig;
      else fail(key, "expected zero, constant, or random_trig");
    } else if (key == "lambda") {
      c.lambda = to_real(key, val);
    } else if (key == "seed") {
      c.seed = to_u64(key, val);
    } else if (key == "mode_cap") {
      c.mode_cap = to_int(key, val);
    } else if (key == "omega") {
      c.omega = to_real(key, val);
    } else if (key == "initial_mode_cap") {
      c.initial_mode_cap = to_int(key, val);
    } else if (key == "runs") {
      c.runs = to_int(key, val);
    } else if (key == "threads") {
      c.threads = to_int(key, val);
    } else if (key == "m0") {
      c.M0 = real_list(key, val);
    } else if (key == "m1") {
      c.M1 = real_list(key, val);
    } else if (key == "p") {
      c.p = real_list(key, val);
    } else if (key == "q") {
      c.q = real_list(key, val);
    } else if (key == "p2") {
      c.p2 = optional_list(key, val);
    } else if (key == "q2") {
      c.q2 = optional_list(key, val);
    } else if (key == "delta0") {
      c.delta0 = real_list(key, val);
    } else if (key == "degrees") {
      c.degrees = int_list(key, val);
    } else if (key == "tau_span") {
      c.tau_span = to_real(key, val);
    } else if (key == "tau_per_unit") {
      c.tau_per_unit = to_int(key, val);
    } else if (key == "doubling_samples") {
      c.doubling_samples = to_int(key, val);
    } else if (key == "mu") {
      c.mu = index_list(key, val);
    } else if (key == "time_powers") {
      c.time_powers = int_list(key, val);
    } else if (key == "times") {
      c.times = real_list(key, val);
    } else if (key == "radii") {
      c.radii = real_list(key, val);
    } else {
      fail(key, "unknown key");
    }
  }
  if (!have_version) fail("schema_version", "missing");
  if (seed) c.seed = seed;
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), seed);
}

void validate(const ExperimentConfig& c) {
  if (c.dim < 1 || c.dim > 3) fail("dim", "must be 1, 2, or 3");
  if (c.points < 16 || (c.points & (c.points - 1)) != 0) fail("points", "must be a power of two >= 16");
  if (c.dim == 3 && c.points > 64) fail("points", "at most 64 per axis in three dimensions");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) fail("dt", "must be positive and finite");
  if (!(c.t0 < 0.0) || !std::isfinite(c.t0)) fail("t0", "must be negative and finite");
  if (c.family == CoefficientFamily::RandomTrig && !c.seed) fail("seed", "required for random_trig coefficients");
  if (c.source == DataSource::Simulate && !c.seed) fail("seed", "required for simulated data");
  if (c.mode_cap < 0 || 2 * c.mode_cap >= c.points) fail("mode_cap", "must lie in [0, points/2)");
  if (c.initial_mode_cap < 0 || 2 * c.initial_mode_cap >= c.points)
    fail("initial_mode_cap", "must lie in [0, points/2)");
  if (c.runs < 1) fail("runs", "must be at least 1");
  if (c.threads < 1) fail("threads", "must be at least 1");
  if (c.M0.empty()) fail("m0", "sweep is empty");
  if (c.M1.empty()) fail("m1", "sweep is empty");
  if (c.p.empty() || c.p.size() != c.q.size()) fail("q", "p and q lists must be nonempty and of equal length");
  if (c.p2.empty() || c.p2.size() != c.q2.size()) fail("q2", "p2 and q2 lists must be nonempty and of equal length");
  if (c.delta0.empty()) fail("delta0", "sweep is empty");
  for (double d : c.delta0)
    if (!(d > 0.0) || d > 0.5) fail("delta0", "entries must lie in (0, 1/2]");
  if (c.degrees.empty()) fail("degrees", "list is empty");
  for (int m : c.degrees)
    if (m < 0 || m > 6) fail("degrees", "entries must lie in 0..6");
  if (!(c.tau_span >= 2.0)) fail("tau_span", "must be at least 2");
  if (c.tau_per_unit < 20) fail("tau_per_unit", "must be at least 20");
  if (c.doubling_samples < 1) fail("doubling_samples", "must be at least 1");
  for (const auto& m : c.mu)
    for (int a = 0; a < 3; ++a) {
      if (m[static_cast<std::size_t>(a)] < 0) fail("mu", "components must be nonnegative");
      if (a >= c.dim && m[static_cast<std::size_t>(a)] != 0) fail("mu", "more components than dimensions");
    }
  for (int l : c.time_powers)
    if (l < 0) fail("time_powers", "must be nonnegative");
  for (double t : c.times)
    if (!(t < 0.0)) fail("times", "entries must be negative");
  for (double r : c.radii)
    if (!(r > 0.0)) fail("radii", "entries must be positive");
}

std::string canonical_text(const ExperimentConfig& c) {
  std::ostringstream o;
  auto opt = [](const std::optional<double>& v) { return v ? real_text(*v) : std::string("none"); };
  o << "schema_version = " << kSchemaVersion << "\n"
    << "kind = " << kind_name(c.kind) << "\n"
    << "dim = " << c.dim << "\n"
    << "points = " << c.points << "\n"
    << "dt = " << real_text(c.dt) << "\n"
    << "scheme = " << scheme_name(c.scheme) << "\n"
    << "t0 = " << real_text(c.t0) << "\n"
    << "source = " << source_name(c.source) << "\n"
    << "coefficients = " << family_name(c.family) << "\n"
    << "lambda = " << real_text(c.lambda) << "\n"
    << "seed = " << (c.seed ? std::to_string(*c.seed) : std::string("none")) << "\n"
    << "mode_cap = " << c.mode_cap << "\n"
    << "omega = " << real_text(c.omega) << "\n"
    << "initial_mode_cap = " << c.initial_mode_cap << "\n"
    << "runs = " << c.runs << "\n"
    << "m0 = " << join(c.M0, real_text) << "\n"
    << "m1 = " << join(c.M1, real_text) << "\n"
    << "p = " << join(c.p, real_text) << "\n"
    << "q = " << join(c.q, real_text) << "\n"
    << "p2 = " << join(c.p2, opt) << "\n"
    << "q2 = " << join(c.q2, opt) << "\n"
    << "delta0 = " << join(c.delta0, real_text) << "\n"
    << "degrees = " << join(c.degrees, [](int v) { return std::to_string(v); }) << "\n"
    << "tau_span = " << real_text(c.tau_span) << "\n"
    << "tau_per_unit = " << c.tau_per_unit << "\n"
    << "doubling_samples = " << c.doubling_samples << "\n"
    << "mu = "
    << join(c.mu,
            [](const MultiIndex& m) {
              return std::to_string(m[0]) + ":" + std::to_string(m[1]) + ":" + std::to_string(m[2]);
            })
    << "\n"
    << "time_powers = " << join(c.time_powers, [](int v) { return std::to_string(v); }) << "\n"
    << "times = " << join(c.times, real_text) << "\n"
    << "radii = " << join(c.radii, real_text) << "\n";
  return o.str();
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t config_hash(const ExperimentConfig& c) { return fnv1a(canonical_text(c)); }

}  // namespace uclab
