#include "gaugekit/lineshape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "gaugekit/errors.hpp"
#include "gaugekit/propagation.hpp"

namespace gaugekit {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

ModeGrid ModeGrid::centered(double omega_eg, double half_width, int N) {
  return ModeGrid{N, omega_eg - half_width, omega_eg + half_width};
}

std::vector<double> ModeGrid::frequencies() const {
  std::vector<double> w(N);
  for (int k = 0; k < N; ++k) w[k] = frequency(k);
  return w;
}

EmitterSpec EmitterSpec::from_linewidth(double omega_eg, double gamma, const ModeGrid& grid, double alpha) {
  return EmitterSpec{omega_eg, std::sqrt(gamma * grid.spacing() / (2.0 * kPi)), alpha};
}

double EmitterSpec::linewidth(const ModeGrid& grid) const { return 2.0 * kPi * g0 * g0 / grid.spacing(); }

void EmitterSpec::validate(const ModeGrid& grid) const {
  if (grid.N < 1) throw std::invalid_argument("mode count must be positive");
  if (!(grid.omega_min > 0.0)) throw std::invalid_argument("omega_min must be positive");
  if (!(grid.omega_max > grid.omega_min)) throw std::invalid_argument("omega_max must exceed omega_min");
  if (!(omega_eg > 0.0)) throw std::invalid_argument("omega_eg must be positive");
  const double gamma = linewidth(grid);
  if (gamma / omega_eg > 0.05) throw std::invalid_argument("Gamma/omega_eg exceeds 0.05");
  if (grid.omega_min > omega_eg - 20.0 * gamma || grid.omega_max < omega_eg + 20.0 * gamma) {
    throw std::invalid_argument("band must cover omega_eg +- 20 Gamma");
  }
}

double AmplitudeState::norm() const {
  double sum = std::norm(c_e);
  for (const auto& c : c_k) sum += std::norm(c);
  return std::sqrt(sum);
}

Spectrum closed_form_spectrum(double alpha, const std::vector<double>& omega, double omega_eg, double gamma) {
  Spectrum s;
  s.omega = omega;
  s.alpha = alpha;
  s.note = "closed form";
  s.S.reserve(omega.size());
  for (double w : omega) {
    if (!(w > 0.0)) throw std::invalid_argument("closed_form_spectrum: frequencies must be positive");
    const double bracket = (1.0 - alpha) * omega_eg + alpha * w;
    const double detuning = w - omega_eg;
    s.S.push_back(gamma / (2.0 * kPi) * (w / (omega_eg * omega_eg * omega_eg)) * bracket * bracket /
                  (detuning * detuning + 0.25 * gamma * gamma));
  }
  return s;
}

double spectrum_ratio(double alpha, double omega, double omega_eg) {
  const double r = alpha + (1.0 - alpha) * omega_eg / omega;
  return r * r;
}

double coupling_profile(double alpha, double omega_k, double omega_eg, double g0) {
  if (!(omega_k > 0.0)) throw std::invalid_argument("coupling_profile: omega_k must be positive");
  return g0 * ((1.0 - alpha) * omega_eg + alpha * omega_k) / std::sqrt(omega_eg * omega_k);
}

double kick_amplitude(double omega_k, double omega_eg, double g0) { return g0 / std::sqrt(omega_eg * omega_k); }

double lamb_shift(const EmitterSpec& spec, const ModeGrid& grid) {
  const double gamma = spec.linewidth(grid);
  double shift = 0.0;
  for (int k = 0; k < grid.N; ++k) {
    const double w = grid.frequency(k);
    const double g = coupling_profile(spec.alpha, w, spec.omega_eg, spec.g0);
    const double d = spec.omega_eg - w;
    shift += g * g * d / (d * d + 0.25 * gamma * gamma);
  }
  return shift;
}

EmissionRun simulate_emission(const EmitterSpec& spec, const ModeGrid& grid, const EmissionOptions& options) {
  spec.validate(grid);
  if (!(options.T > 0.0) || !(options.dt > 0.0)) throw std::invalid_argument("simulate_emission: T and dt must be positive");
  if (options.kick_sign < -1 || options.kick_sign > 1) throw std::invalid_argument("kick_sign must be -1, 0 or 1");

  const int n = grid.N;
  RealVector w(n);
  RealVector g(n);
  for (int k = 0; k < n; ++k) {
    w(k) = grid.frequency(k);
    g(k) = coupling_profile(spec.alpha, w(k), spec.omega_eg, spec.g0);
  }
  EmissionRun run;
  run.bare_frequency = spec.omega_eg - (options.renormalize_shift ? lamb_shift(spec, grid) : 0.0);
  const double wb = run.bare_frequency;

  // Index 0 holds c_e, indices 1..N the modes.
  Vector c = Vector::Zero(n + 1);
  double kicked = 0.0;
  if (options.kick_sign != 0) {
    for (int k = 0; k < n; ++k) {
      c(k + 1) = options.kick_sign * spec.alpha * kick_amplitude(w(k), spec.omega_eg, spec.g0);
      kicked += std::norm(c(k + 1));
    }
    if (kicked >= 1.0) throw std::invalid_argument("simulate_emission: kick exceeds unit norm");
  }
  c(0) = std::sqrt(1.0 - kicked);

  const Vector gc = g.cast<Complex>();
  const LinearMap apply = [&](const Vector& in, Vector& out) {
    out.resize(n + 1);
    out(0) = wb * in(0) + gc.dot(in.tail(n));
    out.tail(n) = w.cwiseProduct(in.tail(n)) + gc * in(0);
  };

  const int steps = static_cast<int>(std::ceil(options.T / options.dt - 1e-12));
  const double h = options.T / steps;
  run.times.reserve(steps + 1);
  run.excited_population.reserve(steps + 1);
  run.times.push_back(0.0);
  run.excited_population.push_back(std::norm(c(0)));
  for (int s = 1; s <= steps; ++s) {
    c = expm_krylov(apply, c, h);
    run.times.push_back(s * h);
    run.excited_population.push_back(std::norm(c(0)));
  }
  if (!c.allFinite() || std::abs(c.norm() - 1.0) > 1e-4) {
    throw InvariantError("simulate_emission: norm drifted beyond 1e-4; the mode grid is too coarse");
  }
  run.state.c_e = c(0);
  run.state.c_k.assign(c.data() + 1, c.data() + n + 1);
  run.state.t = options.T;
  return run;
}

double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& population) {
  if (times.size() != population.size()) throw std::invalid_argument("fit_decay_rate: size mismatch");
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double p = population[i];
    if (p <= 1e-3 || p >= 0.5) continue;
    const double y = std::log(p);
    st += times[i];
    sy += y;
    stt += times[i] * times[i];
    sty += times[i] * y;
    ++count;
  }
  if (count < 3) throw std::invalid_argument("fit_decay_rate: too few samples in the decay window");
  const double slope = (count * sty - st * sy) / (count * stt - st * st);
  return -slope;
}

Spectrum numerical_spectrum(const AmplitudeState& state, const ModeGrid& grid, double omega_eg, double alpha) {
  if (static_cast<int>(state.c_k.size()) != grid.N) throw std::invalid_argument("numerical_spectrum: size mismatch");
  if (std::norm(state.c_e) >= 1e-4) {
    throw std::invalid_argument("numerical_spectrum: emitter has not decayed (|c_e|^2 >= 1e-4)");
  }
  Spectrum s;
  s.alpha = alpha;
  s.note = "(w/w_eg)^2 |c_k|^2 / d_omega";
  s.omega = grid.frequencies();
  s.S.reserve(grid.N);
  const double dw = grid.spacing();
  for (int k = 0; k < grid.N; ++k) {
    const double r = s.omega[k] / omega_eg;
    s.S.push_back(r * r * std::norm(state.c_k[k]) / dw);
  }
  return s;
}

double interpolate_spectrum(const Spectrum& spectrum, double omega) {
  const auto n = spectrum.omega.size();
  if (n < 4) throw std::invalid_argument("interpolate_spectrum: need at least four samples");
  const auto upper = std::lower_bound(spectrum.omega.begin(), spectrum.omega.end(), omega) - spectrum.omega.begin();
  const auto first = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(upper - 2, 0, static_cast<std::ptrdiff_t>(n) - 4));
  double value = 0.0;
  for (std::size_t i = first; i < first + 4; ++i) {
    double basis = 1.0;
    for (std::size_t j = first; j < first + 4; ++j) {
      if (j != i) basis *= (omega - spectrum.omega[j]) / (spectrum.omega[i] - spectrum.omega[j]);
    }
    value += basis * spectrum.S[i];
  }
  return value;
}

double max_relative_deviation(const Spectrum& numerical, const Spectrum& closed, double omega_eg, double window) {
  if (numerical.omega.size() != closed.omega.size()) throw std::invalid_argument("max_relative_deviation: size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < numerical.omega.size(); ++i) {
    if (std::abs(numerical.omega[i] - omega_eg) > window) continue;
    worst = std::max(worst, std::abs(numerical.S[i] / closed.S[i] - 1.0));
  }
  return worst;
}

Spectrum sudden_switch_class_run(double alpha, double omega_eg, double gamma, const ModeGrid& grid,
                                 const EmissionOptions& options, int kick_sign) {
  const EmitterSpec spec = EmitterSpec::from_linewidth(omega_eg, gamma, grid, alpha);
  EmissionOptions kicked = options;
  kicked.kick_sign = kick_sign;
  const EmissionRun run = simulate_emission(spec, grid, kicked);
  Spectrum s = numerical_spectrum(run.state, grid, omega_eg, alpha);
  s.note = "switch-on kick from the Coulomb-gauge class";
  return s;
}

KickSign determine_kick_sign(double omega_eg, double gamma, const ModeGrid& grid, const EmissionOptions& options) {
  const Spectrum target = closed_form_spectrum(0.0, grid.frequencies(), omega_eg, gamma);
  double deviation[2];
  for (int i = 0; i < 2; ++i) {
    const int sign = i == 0 ? -1 : 1;
    deviation[i] =
        max_relative_deviation(sudden_switch_class_run(1.0, omega_eg, gamma, grid, options, sign), target, omega_eg,
                               5.0 * gamma);
  }
  const int best = deviation[0] <= deviation[1] ? 0 : 1;
  if (deviation[best] > 0.03) {
    throw InvariantError("determine_kick_sign: neither kick sign reproduces the Coulomb-gauge spectrum within 3%");
  }
  return KickSign{best == 0 ? -1 : 1, deviation[best], deviation[1 - best]};
}

std::complex<double> vacuum_source_delta(double alpha, double omega_k, double g0, double omega_eg, double t, int sign) {
  return static_cast<double>(sign) * (1.0 - alpha) * kick_amplitude(omega_k, omega_eg, g0) *
         std::polar(1.0, -omega_k * t);
}

}  // namespace gaugekit
