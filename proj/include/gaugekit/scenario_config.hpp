#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gaugekit/circuit_model.hpp"
#include "gaugekit/dipole_model.hpp"
#include "gaugekit/drive_signal.hpp"
#include "gaugekit/lineshape.hpp"
#include "gaugekit/propagation.hpp"

namespace gaugekit {

enum class Experiment { circuit, dipole, lineshape, verify };

std::string_view to_string(Experiment e);

struct Numerics {
  // circuit grid
  int n_points = 512;
  double half_width = 8.0 * 3.14159265358979323846;
  // time window; t1 <= t0 selects the model default
  double t0 = 0.0;
  double t1 = 0.0;
  /// 0 selects the default of 1/200 of the fastest period.
  double dt = 0.0;
  Method method = Method::midpoint_exp;
  int record_stride = 10;
  // dipole truncation
  int n_matter = 24;
  int n_field = 24;
  int padding = 4;
  // lineshape band
  int modes = 2000;
  /// Half-width of the mode band in units of Gamma.
  double band_half_width = 80.0;
  /// Emission time in units of 1/Gamma.
  double T = 15.0;
};

struct LineshapeBlock {
  double omega_eg = 1.0;
  double gamma = 0.01;
  bool kick = false;
};

struct FaultInjection {
  bool skip_correction = false;
};

/// Parsed and validated scenario. Unknown keys and out-of-range values raise ConfigError
/// naming the JSON path of the offending field.
struct ScenarioConfig {
  Experiment experiment = Experiment::verify;
  std::vector<double> gauge_list;
  std::string output_dir;
  CircuitSpec circuit;
  DipoleSpec dipole;
  LineshapeBlock lineshape;
  std::optional<DriveSignal> drive;
  Numerics numerics;
  FaultInjection faults;

  static ScenarioConfig parse(const std::string& json_text);
  static ScenarioConfig load(const std::string& path);
  /// Configuration used by `verify` when no file is given.
  static ScenarioConfig verify_defaults();
};

}  // namespace gaugekit
