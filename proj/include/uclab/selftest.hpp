#pragma once

#include <optional>
#include <string>
#include <vector>

namespace uclab {

/// Deliberate defects for mutation checks of the fixture suite.
struct SelftestOptions {
  /// Replaces the n/4 shift in H.
  std::optional<double> h_shift;
  /// Multiplies the default lattice shell count in the periodization fixture.
  double lattice_shell_scale = 1.0;
};

struct FixtureResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

std::vector<FixtureResult> run_selftest(const SelftestOptions& opts = {});

}  // namespace uclab
