#pragma once

#include <string>
#include <string_view>

namespace gaugekit {

enum class DriveKind { constant, linear_ramp, smooth_step, sinusoid, gaussian_pulse };

std::string_view to_string(DriveKind kind);
/// Throws std::invalid_argument for unknown names.
DriveKind drive_kind_from_string(std::string_view name);

struct DriveSample {
  double value;
  double derivative;
};

/// Scalar control function with an analytic derivative.
///
/// value(t) = offset + amplitude * shape(t - center) where shape is
///   constant       1
///   linear_ramp    s
///   smooth_step    (1 + tanh(s / ramp_time)) / 2
///   sinusoid       sin(frequency * s)
///   gaussian_pulse exp(-(speed * s)^2 / width^2)
struct DriveSignal {
  DriveKind kind = DriveKind::constant;
  double amplitude = 1.0;
  double offset = 0.0;
  double ramp_time = 1.0;
  double frequency = 1.0;
  double width = 1.0;
  double speed = 1.0;
  double center = 0.0;

  static DriveSignal constant(double value);
  static DriveSignal linear_ramp(double slope, double offset = 0.0, double center = 0.0);
  static DriveSignal smooth_step(double ramp_time, double amplitude = 1.0, double center = 0.0);
  static DriveSignal sinusoid(double amplitude, double frequency, double center = 0.0);
  static DriveSignal gaussian_pulse(double speed, double width, double amplitude = 1.0, double center = 0.0);

  DriveSample eval(double t) const;
  double value(double t) const { return eval(t).value; }
  double derivative(double t) const { return eval(t).derivative; }

  /// Same kind and timing with value and derivative multiplied by factor.
  DriveSignal scaled(double factor) const;

  /// Shortest timescale in the signal (period, ramp time, or width/speed); +inf for constant and ramp.
  double timescale() const;
};

}  // namespace gaugekit
