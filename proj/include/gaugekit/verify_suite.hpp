#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gaugekit/scenario_config.hpp"

namespace gaugekit {

struct CheckResult {
  std::string module;
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  /// "<", "<=" or ">=": how measured is compared with threshold.
  std::string relation;
  bool passed = false;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  std::string first_failure() const;
};

/// Runs the invariant checks of every module at desk-scale defaults. gauge_list selects the
/// gauges of the covariance checks; fault_injection.skip_correction drops the correction terms.
VerifyReport run_verify_suite(const ScenarioConfig& config, std::ostream& log);

void write_verify_report(const std::filesystem::path& path, const VerifyReport& report);

}  // namespace gaugekit
