#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uclab/gaussian_engine.hpp"
#include "uclab/heat_solver.hpp"

namespace uclab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Trace, Vanish, Double, Moments, Exponents, Selftest };
enum class CoefficientFamily { Zero, Constant, RandomTrig };
/// Closed-form caloric oracles, or solver output on random data.
enum class DataSource { Caloric, Simulate };

inline constexpr int kSchemaVersion = 1;

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Selftest;

  int dim = 1;
  int points = 64;
  double dt = 1e-3;
  Scheme scheme = Scheme::Strang;
  double t0 = -1.0;

  DataSource source = DataSource::Caloric;
  CoefficientFamily family = CoefficientFamily::Zero;
  double lambda = 0.0;
  std::optional<std::uint64_t> seed;
  int mode_cap = 3;
  double omega = 2.0 * kPi;
  int initial_mode_cap = 3;
  int runs = 1;
  int threads = 1;

  std::vector<double> M0{1.0};
  std::vector<double> M1{1.0};
  /// Spatial exponents, paired entry by entry.
  std::vector<double> p{kInf};
  std::vector<double> q{kInf};
  /// Temporal exponents, paired entry by entry; "none" leaves one absent.
  std::vector<std::optional<double>> p2{std::nullopt};
  std::vector<std::optional<double>> q2{std::nullopt};
  std::vector<double> delta0{0.25};

  std::vector<int> degrees{0, 1, 2, 3, 4};
  double tau_span = 3.0;
  int tau_per_unit = 20;
  int doubling_samples = 5;

  std::vector<MultiIndex> mu{{0, 0, 0}};
  std::vector<int> time_powers{0};
  std::vector<double> times{-1.0};
  std::vector<double> radii{kInf};
};

std::string kind_name(ExperimentKind k);
ExperimentKind parse_kind(const std::string& s);

/// key = value lines; '#' starts a comment; lists are comma separated.
/// Unknown keys and malformed values raise ConfigError naming the key.
/// A given seed replaces the file's before validation.
ExperimentConfig parse_config(const std::string& text, std::optional<std::uint64_t> seed = {});
ExperimentConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed = {});

/// Checks cross-field invariants (seed for random families, nonempty sweeps,
/// paired list lengths, grid limits).
void validate(const ExperimentConfig& cfg);

/// Normalized key = value rendering; the config hash is taken over it.
std::string canonical_text(const ExperimentConfig& cfg);
/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);
std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace uclab
