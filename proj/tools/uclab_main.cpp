#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "uclab/frequency_tracker.hpp"
#include "uclab/lab_config.hpp"
#include "uclab/lab_runner.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitConfig = 2;

struct Options {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  bool plots = false;
};

int run(const std::string& command, const Options& opt) {
  using namespace uclab;
  ExperimentConfig cfg;
  const auto kind = parse_kind(command);
  if (kind == ExperimentKind::Selftest && opt.config.empty()) {
    cfg.kind = kind;
  } else {
    if (opt.config.empty()) throw ConfigError("--config is required for " + command);
    cfg = load_config(opt.config, opt.seed);
    if (cfg.kind != kind)
      throw ConfigError("config field 'kind': '" + kind_name(cfg.kind) + "' does not match subcommand '" + command +
                        "'");
  }
  if (opt.seed) cfg.seed = opt.seed;
  const auto rec = run_experiment(cfg);
  write_record(rec, cfg, opt.out, opt.plots);
  std::size_t failed = 0;
  for (const auto& v : rec.verdicts) {
    std::printf("%-4s %s: %s\n", v.pass ? "ok" : "FAIL", v.name.c_str(), v.detail.c_str());
    failed += v.pass ? 0 : 1;
  }
  std::printf("%zu verdicts, %zu failed; wrote %s\n", rec.verdicts.size(), failed,
              (std::filesystem::path(opt.out) / "results.csv").string().c_str());
  return failed == 0 ? kExitPass : kExitVerdict;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for frequency and doubling estimates of parabolic equations"};
  app.set_version_flag("--version", std::string(UCLAB_VERSION));
  app.require_subcommand(1);

  Options opt;
  const char* commands[][2] = {
      {"trace", "modified frequency traces"},
      {"vanish", "vanishing-order estimators and bound check"},
      {"double", "observability ratio against the doubling bound"},
      {"moments", "Gaussian moment tables"},
      {"exponents", "exponent and eps tables"},
      {"selftest", "invariant fixture suite"},
  };
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c[0], c[1]);
    sub->add_option("--config", opt.config, "key = value experiment file");
    sub->add_option("--out", opt.out, "output directory")->capture_default_str();
    sub->add_option("--seed", opt.seed, "override the config seed");
    sub->add_flag("--plots", opt.plots, "also write SVG plots");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, opt);
  } catch (const uclab::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const uclab::GateViolation& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitVerdict;
  }
}
