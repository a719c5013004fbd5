#include "gaugekit/verify_suite.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>

#include <json.hpp>

#include "gaugekit/circuit_model.hpp"
#include "gaugekit/csv_writer.hpp"
#include "gaugekit/dipole_model.hpp"
#include "gaugekit/lineshape.hpp"

namespace gaugekit {

namespace {

constexpr double kPi = 3.14159265358979323846;

class Recorder {
 public:
  Recorder(VerifyReport& report, std::ostream& log) : report_(report), log_(log) {}

  void below(const std::string& module, const std::string& name, double measured, double threshold) {
    add(module, name, measured, threshold, "<", measured < threshold);
  }
  void at_most(const std::string& module, const std::string& name, double measured, double threshold) {
    add(module, name, measured, threshold, "<=", measured <= threshold);
  }
  void at_least(const std::string& module, const std::string& name, double measured, double threshold) {
    add(module, name, measured, threshold, ">=", measured >= threshold);
  }

 private:
  void add(const std::string& module, const std::string& name, double measured, double threshold,
           const std::string& relation, bool passed) {
    if (!std::isfinite(measured)) passed = false;
    report_.checks.push_back({module, name, measured, threshold, relation, passed});
    log_ << (passed ? "PASS " : "FAIL ") << module << "/" << name << ": " << format_number(measured) << " "
         << relation << " " << format_number(threshold) << "\n";
  }

  VerifyReport& report_;
  std::ostream& log_;
};

Operator conjugate(const Operator& u, const Operator& h) {
  return Operator(u.matrix() * h.matrix() * u.matrix().adjoint(), h.basis());
}

std::vector<std::pair<double, double>> unordered_pairs(std::vector<double> gauges) {
  std::sort(gauges.begin(), gauges.end());
  gauges.erase(std::unique(gauges.begin(), gauges.end()), gauges.end());
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < gauges.size(); ++i) {
    for (std::size_t j = i + 1; j < gauges.size(); ++j) pairs.emplace_back(gauges[i], gauges[j]);
  }
  return pairs;
}

Vector gaussian_state(const GridBasis& grid, double center, double sigma, double k0) {
  Vector psi(grid.n_points());
  for (int j = 0; j < grid.n_points(); ++j) {
    const double x = grid.point(j) - center;
    psi(j) = std::exp(-x * x / (4.0 * sigma * sigma)) * std::polar(1.0, k0 * x);
  }
  return psi / psi.norm();
}

void check_operator_core(Recorder& r) {
  const GridBasis grid(512, 8.0 * kPi);
  double unitarity = 0.0;
  double composition = 0.0;
  for (double c : {0.37, -1.9, 2.0 * kPi}) {
    const Operator u = translation_unitary(grid, c);
    unitarity = std::max(unitarity, (u.matrix().adjoint() * u.matrix() - Matrix::Identity(512, 512)).cwiseAbs().maxCoeff());
    const Matrix composed = translation_unitary(grid, 0.61).matrix() * u.matrix();
    composition = std::max(composition, (composed - translation_unitary(grid, c + 0.61).matrix()).cwiseAbs().maxCoeff());
  }
  std::mt19937 rng(7);
  std::normal_distribution<double> normal;
  Matrix a(32, 32);
  for (int i = 0; i < 32; ++i) {
    for (int j = 0; j < 32; ++j) a(i, j) = Complex(normal(rng), normal(rng));
  }
  const Operator h(a + a.adjoint(), BasisTag{"random"});
  const Operator u = expm_hermitian(h, 0.7);
  unitarity = std::max(unitarity, (u.matrix().adjoint() * u.matrix() - Matrix::Identity(32, 32)).cwiseAbs().maxCoeff());
  r.below("operator-core", "unitarity max|U^dagger U - I|", unitarity, 1e-12);
  r.below("operator-core", "translation composition", composition, 1e-12);

  const Vector psi = gaussian_state(grid, 0.5, 4.0 * grid.spacing(), 0.0);
  const Operator q = position_operator(grid);
  const Operator p = momentum_operator(grid);
  const Complex expectation = psi.dot(q.apply(p.apply(psi)) - p.apply(q.apply(psi)));
  r.below("operator-core", "|<[q,p]> - i| on a narrow Gaussian", std::abs(expectation - Complex(0.0, 1.0)), 1e-6);
}

void check_drives(Recorder& r) {
  const std::vector<DriveSignal> signals{DriveSignal::constant(0.7), DriveSignal::linear_ramp(0.3, 0.1),
                                         DriveSignal::smooth_step(0.4, 1.3, 0.2), DriveSignal::sinusoid(0.4, 1.0),
                                         DriveSignal::gaussian_pulse(1.0, 2.0, 1.0, 0.5)};
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> times(-6.0, 6.0);
  double worst = 0.0;
  const double h = 1e-6;
  for (const auto& s : signals) {
    for (int i = 0; i < 100; ++i) {
      const double t = times(rng);
      const double fd = (s.value(t + h) - s.value(t - h)) / (2.0 * h);
      const double d = s.derivative(t);
      worst = std::max(worst, std::abs(d - fd) / (1.0 + std::abs(d)));
    }
  }
  r.below("drive-signals", "analytic vs finite-difference derivative", worst, 1e-6);
}

void check_propagation(Recorder& r) {
  CircuitSpec spec;
  spec.C0 = 3.0;
  spec.C1 = 1.0;
  spec.flux_drive = DriveSignal::sinusoid(0.4, 1.0);
  const CircuitModel circuit(spec);
  const TimeDependentHamiltonian h = circuit.correct(0.0);
  const Vector psi0 = ground_state(h.evaluate(0.0));
  PropagationOptions options;
  options.record_stride = 0;
  const Trajectory traj = propagate(h, psi0, 0.0, 10.0, 0.01, options);
  r.below("propagation", "norm drift over 1000 midpoint_exp steps", traj.max_norm_drift(), 1e-9);

  DipoleSpec small;
  small.n_matter = 6;
  small.n_field = 6;
  small.padding = 0;
  small.theta = 0.3;
  const DipoleModel dipole(small);
  const TimeDependentHamiltonian hd = dipole.correct(0.5);
  const Vector start = ground_state(hd.evaluate(-4.0));
  const Trajectory a = propagate(hd, start, -4.0, 4.0, 1e-3, options);
  PropagationOptions rk = options;
  rk.method = Method::rk4;
  const Trajectory b = propagate(hd, start, -4.0, 4.0, 1e-3, rk);
  r.below("propagation", "rk4 vs midpoint_exp final-state distance", (a.final_state() - b.final_state()).norm(), 1e-5);
}

void check_circuit(Recorder& r, const ScenarioConfig& config, std::ostream& log) {
  CircuitSpec spec;
  spec.C0 = 3.0;
  spec.C1 = 1.0;
  spec.flux_drive = DriveSignal::sinusoid(0.4, 1.0);
  CircuitModel model(spec);
  model.set_omit_correction(config.faults.skip_correction);
  const double alpha_irr = model.irrotational_alpha();

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double constraint = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double q = u(rng);
    const double alpha = 0.1 * u(rng);
    const double phi = spec.flux_drive.value(u(rng));
    const BranchFluxes x = branch_fluxes(q, phi, alpha);
    constraint = std::max(constraint, std::abs(x.x0 + x.x1 - phi) / (1.0 + std::abs(phi) + std::abs(q)));
  }
  r.at_most("circuit-model", "branch flux sum minus phi (relative)", constraint,
            2.0 * std::numeric_limits<double>::epsilon());

  std::vector<double> gauges = config.gauge_list;
  gauges.push_back(alpha_irr);
  const auto pairs = unordered_pairs(gauges);
  double frame_map = 0.0;
  double covariance = 0.0;
  for (const auto& [a, b] : pairs) {
    for (double t : {0.3, 1.7}) {
      const Operator R = model.gauge_unitary(a, b, t);
      frame_map = std::max(frame_map, model.band_limited_norm(conjugate(R, model.hamiltonian_naive(a, t)) -
                                                              model.hamiltonian_naive(b, t)));
    }
    const TimeDependentHamiltonian mapped = transform(model.correct(a), model.frame_generator(a, b));
    for (double t : {0.3, 1.7}) {
      covariance = std::max(covariance, model.band_limited_norm(mapped.evaluate(t) - model.correct(b).evaluate(t)));
    }
  }
  r.below("circuit-model", "frame-map identity R H_a R^dagger = H_a'", frame_map, 1e-8);
  r.below("circuit-model", "correct-theory covariance residual", covariance, 1e-8);

  double coefficient = 0.0;
  for (double t : {0.0, 0.5, 1.0, 2.0}) coefficient = std::max(coefficient, std::abs(model.correction_coefficient(alpha_irr, t)));
  r.at_most("circuit-model", "X coefficient at alpha_irr", coefficient, 0.0);

  double deficit = 0.0;
  for (const auto& [a, b] : pairs) {
    const Vector start = ground_state(model.hamiltonian_correct(a, 0.0));
    CovarianceOptions options;
    options.dt = 0.01;
    deficit = std::max(deficit, 1.0 - verify_covariance(model, a, b, start, 0.0, 2.0 * kPi, options));
  }
  r.below("gauge-engine", "covariance fidelity deficit (circuit, one period)", deficit, 1e-6);
  log << "circuit checks done\n";

  const TimeDependentHamiltonian base = model.correct(0.0);
  const GeneratorRecipe recipe = model.frame_generator(0.0, 1.0);
  const TimeDependentHamiltonian there = transform(base, recipe);
  const TimeDependentHamiltonian back = transform(there, recipe.negated());
  double involution = 0.0;
  double hermiticity = 0.0;
  for (double t : {0.4, 2.2}) {
    involution = std::max(involution, max_abs_difference(back.evaluate(t), base.evaluate(t)));
    const Matrix m = there.evaluate(t).matrix();
    hermiticity = std::max(hermiticity, (m - m.adjoint()).cwiseAbs().maxCoeff() / m.cwiseAbs().maxCoeff());
  }
  r.below("gauge-engine", "transform involution under recipe negation", involution, 1e-9);
  r.below("gauge-engine", "transform Hermiticity (relative)", hermiticity, 1e-12);

  double frame_term = 0.0;
  const double h = 1e-5;
  for (double t : {0.4, 2.2}) {
    const Matrix du = (recipe.unitary(t + h).matrix() - recipe.unitary(t - h).matrix()) / (2.0 * h);
    const Matrix numeric = Complex(0.0, 1.0) * du * recipe.unitary(t).matrix().adjoint();
    const Operator analytic = recipe.frame_term(t);
    frame_term = std::max(frame_term, (numeric - analytic.matrix()).cwiseAbs().maxCoeff() / analytic.max_abs());
  }
  r.below("gauge-engine", "i dU/dt U^dagger analytic vs finite difference", frame_term, 1e-6);
}

void check_dipole(Recorder& r, const ScenarioConfig& config, std::ostream& log) {
  DipoleSpec spec;
  spec.theta = 0.25 * kPi;
  DipoleModel model(spec);
  model.set_omit_correction(config.faults.skip_correction);
  const double alpha_irr = model.irrotational_alpha();
  std::vector<double> gauges = config.gauge_list;
  gauges.push_back(alpha_irr);
  const double t = 1.3;
  const double e_mudot = std::abs(spec.e * spec.mu.derivative(t));
  const double coupling_block = model.leading_block_norm(model.coupling());

  double covariance = 0.0;
  double naive_with_x = 0.0;
  double detectability = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : unordered_pairs(gauges)) {
    const GeneratorRecipe recipe = model.frame_generator(a, b);
    const Operator R = recipe.unitary(t);
    const Operator frame = recipe.frame_term(t);
    covariance = std::max(covariance, model.leading_block_norm(conjugate(R, model.hamiltonian_correct(a, t)) + frame -
                                                               model.hamiltonian_correct(b, t)));
    const Operator naive_mapped = conjugate(R, model.hamiltonian_naive(a, t)) + frame - model.hamiltonian_naive(b, t);
    const Operator x_difference = model.correction_X(a, t) - model.correction_X(b, t);
    naive_with_x = std::max(naive_with_x, model.leading_block_norm(naive_mapped + x_difference));
    const double scale = e_mudot * std::abs(a - b) * coupling_block;
    detectability = std::min(detectability, model.leading_block_norm(naive_mapped) / scale);
  }
  r.below("dipole-model", "correct-theory covariance residual", covariance, 1e-7);
  r.below("dipole-model", "naive frame map plus X difference", naive_with_x, 1e-7);
  r.at_least("dipole-model", "naive non-covariance / (|e dmu| |a-a'| |x X|)", detectability, 0.5);

  double class_identity = 0.0;
  for (double b : gauges) {
    class_identity = std::max(class_identity, max_abs_difference(model.class_member(alpha_irr, b, t),
                                                                 model.hamiltonian_correct(b, t)));
  }
  r.below("dipole-model", "class member at cos^2 theta equals correct Hamiltonian", class_identity, 1e-12);
  log << "dipole checks done\n";
}

void check_lineshape(Recorder& r, std::ostream& log) {
  const double omega_eg = 1.0;
  const double gamma = 0.01;
  const ModeGrid grid = ModeGrid::centered(omega_eg, 80.0 * gamma, 2000);
  EmissionOptions options;
  options.T = 15.0 / gamma;
  options.dt = 0.25 / grid.omega_max;
  const std::vector<double> omega = grid.frequencies();

  double deviation = 0.0;
  std::vector<double> resonance;
  Spectrum s0;
  Spectrum s1;
  for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const EmitterSpec spec = EmitterSpec::from_linewidth(omega_eg, gamma, grid, alpha);
    const EmissionRun run = simulate_emission(spec, grid, options);
    const Spectrum numerical = numerical_spectrum(run.state, grid, omega_eg, alpha);
    deviation = std::max(deviation, max_relative_deviation(numerical, closed_form_spectrum(alpha, omega, omega_eg, gamma),
                                                           omega_eg, 5.0 * gamma));
    resonance.push_back(interpolate_spectrum(numerical, omega_eg));
    if (alpha == 0.0) s0 = numerical;
    if (alpha == 1.0) s1 = numerical;
  }
  r.below("lineshape", "numerical vs closed-form spectrum over +-5 Gamma", deviation, 0.02);
  const auto [lo, hi] = std::minmax_element(resonance.begin(), resonance.end());
  r.below("lineshape", "resonance value spread across gauges", (*hi - *lo) / *lo, 0.01);

  double wing = 0.0;
  bool ordered = true;
  for (double w : {omega_eg - 3.0 * gamma, omega_eg + 3.0 * gamma}) {
    const double ratio = interpolate_spectrum(s0, w) / interpolate_spectrum(s1, w);
    const double expected = (omega_eg / w) * (omega_eg / w);
    wing = std::max(wing, std::abs(ratio / expected - 1.0));
    ordered = ordered && ((w < omega_eg) == (ratio > 1.0));
  }
  r.below("lineshape", "wing ratio S_0/S_1 vs (w_eg/w)^2", ordered ? wing : std::numeric_limits<double>::infinity(),
          0.02);

  const KickSign sign = determine_kick_sign(omega_eg, gamma, grid, options);
  log << "kick sign " << sign.sign << " chosen (" << format_number(sign.chosen_deviation) << "), rejected sign deviation "
      << format_number(sign.rejected_deviation) << "\n";
  const Spectrum coulomb = closed_form_spectrum(0.0, omega, omega_eg, gamma);
  double class_deviation = 0.0;
  double spread = 0.0;
  std::vector<Spectrum> kicked;
  for (double alpha : {0.0, 0.5, 1.0}) {
    kicked.push_back(sudden_switch_class_run(alpha, omega_eg, gamma, grid, options, sign.sign));
    class_deviation = std::max(class_deviation, max_relative_deviation(kicked.back(), coulomb, omega_eg, 5.0 * gamma));
  }
  for (std::size_t i = 1; i < kicked.size(); ++i) {
    spread = std::max(spread, max_relative_deviation(kicked[i], kicked[0], omega_eg, 5.0 * gamma));
  }
  r.below("lineshape", "kicked spectra vs S_0", class_deviation, 0.03);
  r.below("lineshape", "kicked spectra gauge spread", spread, 0.03);
  log << "lineshape checks done\n";
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return c.module + "/" + c.name + " measured " + format_number(c.measured);
  }
  return "";
}

VerifyReport run_verify_suite(const ScenarioConfig& config, std::ostream& log) {
  VerifyReport report;
  Recorder r(report, log);
  check_operator_core(r);
  check_drives(r);
  check_propagation(r);
  check_circuit(r, config, log);
  check_dipole(r, config, log);
  check_lineshape(r, log);
  return report;
}

void write_verify_report(const std::filesystem::path& path, const VerifyReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"module", c.module},
                      {"name", c.name},
                      {"measured", c.measured},
                      {"threshold", c.threshold},
                      {"relation", c.relation},
                      {"passed", c.passed}});
  }
  nlohmann::json doc{{"passed", report.passed()}, {"checks", checks}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace gaugekit
