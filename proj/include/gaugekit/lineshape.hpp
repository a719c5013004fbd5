#pragma once

#include <complex>
#include <string>
#include <vector>

namespace gaugekit {

/// Uniform band of N modes at cell midpoints omega_k = omega_min + (k + 1/2) d_omega.
struct ModeGrid {
  int N = 2000;
  double omega_min = 0.2;
  double omega_max = 1.8;

  /// Band [omega_eg - half_width, omega_eg + half_width].
  static ModeGrid centered(double omega_eg, double half_width, int N);

  double spacing() const { return (omega_max - omega_min) / N; }
  double frequency(int k) const { return omega_min + (k + 0.5) * spacing(); }
  std::vector<double> frequencies() const;
};

/// Two-level emitter in gauge alpha. The linewidth Gamma = 2 pi g0^2 / d_omega.
struct EmitterSpec {
  double omega_eg = 1.0;
  double g0 = 0.0;
  double alpha = 0.0;

  /// g0 chosen so that the emitter on grid has linewidth gamma.
  static EmitterSpec from_linewidth(double omega_eg, double gamma, const ModeGrid& grid, double alpha);
  double linewidth(const ModeGrid& grid) const;
  /// Throws std::invalid_argument unless Gamma/omega_eg <= 0.05, omega_min > 0 and the
  /// band covers omega_eg +- 20 Gamma.
  void validate(const ModeGrid& grid) const;
};

struct AmplitudeState {
  std::complex<double> c_e;
  std::vector<std::complex<double>> c_k;
  double t = 0.0;

  double norm() const;
};

struct Spectrum {
  std::vector<double> omega;
  std::vector<double> S;
  double alpha = 0.0;
  std::string note;
};

/// (Gamma/2pi)(w/w_eg^3)[(1-a)w_eg + a w]^2 / ((w - w_eg)^2 + Gamma^2/4).
Spectrum closed_form_spectrum(double alpha, const std::vector<double>& omega, double omega_eg, double gamma);
/// S_alpha(w)/S_1(w) = [a + (1-a) w_eg/w]^2.
double spectrum_ratio(double alpha, double omega, double omega_eg);
/// g0 [(1-a) w_eg + a w_k] / sqrt(w_eg w_k).
double coupling_profile(double alpha, double omega_k, double omega_eg, double g0);
/// lambda_k = g0 / sqrt(w_eg w_k), the amplitude scale of the switch-on kick.
double kick_amplitude(double omega_k, double omega_eg, double g0);

struct EmissionOptions {
  double T = 0.0;
  /// Output interval for the excited population; the propagator itself is exact for the
  /// time-independent single-excitation Hamiltonian.
  double dt = 0.0;
  /// Shift the bare frequency so the dressed resonance of the discretised band sits at omega_eg.
  bool renormalize_shift = true;
  /// Initial mode amplitudes kick_sign * alpha * lambda_k; 0 disables the kick.
  int kick_sign = 0;
};

struct EmissionRun {
  AmplitudeState state;
  std::vector<double> times;
  std::vector<double> excited_population;
  double bare_frequency = 0.0;
};

/// Single-excitation rotating-wave dynamics
///   i dc_e/dt = w_b c_e + sum_k g_k c_k,   i dc_k/dt = w_k c_k + g_k c_e
/// with g_k = coupling_profile(alpha, w_k, ...). Throws InvariantError if the norm drifts by
/// more than 1e-4 and std::invalid_argument for invalid inputs.
EmissionRun simulate_emission(const EmitterSpec& spec, const ModeGrid& grid, const EmissionOptions& options);

/// Static level shift of the discretised band at the complex resonance w_eg - i Gamma/2.
double lamb_shift(const EmitterSpec& spec, const ModeGrid& grid);

/// Least-squares slope of -log P over samples with 1e-3 < P < 0.5.
double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& population);

/// S(w_k) = (w_k/w_eg)^2 |c_k|^2 / d_omega. Requires a decayed state (|c_e|^2 < 1e-4).
Spectrum numerical_spectrum(const AmplitudeState& state, const ModeGrid& grid, double omega_eg, double alpha);

/// Value at omega by a cubic through the four nearest samples.
double interpolate_spectrum(const Spectrum& spectrum, double omega);

/// Max |numerical/closed - 1| over |w - w_eg| <= window.
double max_relative_deviation(const Spectrum& numerical, const Spectrum& closed, double omega_eg, double window);

struct KickSign {
  int sign = 0;
  double chosen_deviation = 0.0;
  double rejected_deviation = 0.0;
};

/// Runs the kicked alpha = 1 emitter for both signs and keeps the one reproducing S_0 over
/// +-5 Gamma. Throws InvariantError if neither is within 3%.
KickSign determine_kick_sign(double omega_eg, double gamma, const ModeGrid& grid, const EmissionOptions& options);

/// Gauge-alpha dynamics started from the switch-on kick of the Coulomb-gauge class.
Spectrum sudden_switch_class_run(double alpha, double omega_eg, double gamma, const ModeGrid& grid,
                                 const EmissionOptions& options, int kick_sign);

/// Vacuum part of the gauge-alpha photon operator relative to the multipolar one:
/// sign (1 - alpha) lambda_k exp(-i w_k t).
std::complex<double> vacuum_source_delta(double alpha, double omega_k, double g0, double omega_eg, double t,
                                         int sign = -1);

}  // namespace gaugekit
