#include "gaugekit/drive_signal.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gaugekit {

std::string_view to_string(DriveKind kind) {
  switch (kind) {
    case DriveKind::constant:
      return "constant";
    case DriveKind::linear_ramp:
      return "linear_ramp";
    case DriveKind::smooth_step:
      return "smooth_step";
    case DriveKind::sinusoid:
      return "sinusoid";
    case DriveKind::gaussian_pulse:
      return "gaussian_pulse";
  }
  return "unknown";
}

DriveKind drive_kind_from_string(std::string_view name) {
  for (auto kind : {DriveKind::constant, DriveKind::linear_ramp, DriveKind::smooth_step, DriveKind::sinusoid,
                    DriveKind::gaussian_pulse}) {
    if (to_string(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown drive kind '" + std::string(name) + "'");
}

DriveSignal DriveSignal::constant(double value) {
  DriveSignal s;
  s.kind = DriveKind::constant;
  s.amplitude = value;
  return s;
}

DriveSignal DriveSignal::linear_ramp(double slope, double offset, double center) {
  DriveSignal s;
  s.kind = DriveKind::linear_ramp;
  s.amplitude = slope;
  s.offset = offset;
  s.center = center;
  return s;
}

DriveSignal DriveSignal::smooth_step(double ramp_time, double amplitude, double center) {
  DriveSignal s;
  s.kind = DriveKind::smooth_step;
  s.ramp_time = ramp_time;
  s.amplitude = amplitude;
  s.center = center;
  return s;
}

DriveSignal DriveSignal::sinusoid(double amplitude, double frequency, double center) {
  DriveSignal s;
  s.kind = DriveKind::sinusoid;
  s.amplitude = amplitude;
  s.frequency = frequency;
  s.center = center;
  return s;
}

DriveSignal DriveSignal::gaussian_pulse(double speed, double width, double amplitude, double center) {
  DriveSignal s;
  s.kind = DriveKind::gaussian_pulse;
  s.speed = speed;
  s.width = width;
  s.amplitude = amplitude;
  s.center = center;
  return s;
}

DriveSample DriveSignal::eval(double t) const {
  const double s = t - center;
  double shape = 0.0;
  double shape_rate = 0.0;
  switch (kind) {
    case DriveKind::constant:
      shape = 1.0;
      break;
    case DriveKind::linear_ramp:
      shape = s;
      shape_rate = 1.0;
      break;
    case DriveKind::smooth_step: {
      const double u = s / ramp_time;
      shape = 0.5 * (1.0 + std::tanh(u));
      // cosh overflows long before the derivative matters.
      const double c = std::abs(u) > 350.0 ? std::numeric_limits<double>::infinity() : std::cosh(u);
      shape_rate = 1.0 / (2.0 * ramp_time * c * c);
      break;
    }
    case DriveKind::sinusoid:
      shape = std::sin(frequency * s);
      shape_rate = frequency * std::cos(frequency * s);
      break;
    case DriveKind::gaussian_pulse: {
      const double r = speed * s / width;
      shape = std::exp(-r * r);
      shape_rate = -2.0 * r * (speed / width) * shape;
      break;
    }
  }
  return {offset + amplitude * shape, amplitude * shape_rate};
}

DriveSignal DriveSignal::scaled(double factor) const {
  DriveSignal s = *this;
  s.amplitude *= factor;
  s.offset *= factor;
  return s;
}

double DriveSignal::timescale() const {
  switch (kind) {
    case DriveKind::smooth_step:
      return ramp_time;
    case DriveKind::sinusoid:
      return 2.0 * std::numbers::pi / std::abs(frequency);
    case DriveKind::gaussian_pulse:
      return width / std::abs(speed);
    case DriveKind::constant:
    case DriveKind::linear_ramp:
      break;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace gaugekit
