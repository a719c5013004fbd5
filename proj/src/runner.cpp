#include "gaugekit/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "gaugekit/csv_writer.hpp"
#include "gaugekit/errors.hpp"
#include "gaugekit/verify_suite.hpp"

namespace gaugekit {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kPi = 3.14159265358979323846;
constexpr int kResidualSamples = 9;

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const json& value) {
  std::ofstream out = open_output(path);
  out << value.dump(2) << '\n';
}

std::vector<double> uniform_samples(double t0, double t1, int count) {
  std::vector<double> t(count);
  for (int i = 0; i < count; ++i) t[i] = count == 1 ? t0 : t0 + (t1 - t0) * i / (count - 1);
  return t;
}

struct Window {
  double t0;
  double t1;
  double dt;
};

/// Default window: two drive timescales (or 4 pi) starting at t0 = 0 for the circuit, and the
/// pulse center +- 4 width/speed for the dipole. Default dt is 1/200 of the fastest period.
Window circuit_window(const ScenarioConfig& c) {
  const DriveSignal& phi = c.circuit.flux_drive;
  Window w{c.numerics.t0, c.numerics.t1, c.numerics.dt};
  const double scale = phi.timescale();
  if (w.t1 <= w.t0) w.t1 = w.t0 + (std::isfinite(scale) ? 2.0 * scale : 4.0 * kPi);
  if (w.dt == 0.0) {
    const double plasma = std::sqrt((c.circuit.EJ0 + c.circuit.EJ1) / c.circuit.total_capacitance());
    w.dt = std::min(2.0 * kPi / plasma, scale) / 200.0;
  }
  return w;
}

Window dipole_window(const ScenarioConfig& c) {
  const DriveSignal& mu = c.dipole.mu;
  Window w{c.numerics.t0, c.numerics.t1, c.numerics.dt};
  const double scale = mu.timescale();
  if (w.t1 <= w.t0) {
    const double half = std::isfinite(scale) ? 4.0 * scale : 8.0;
    w.t0 = mu.center - half;
    w.t1 = mu.center + half;
  }
  if (w.dt == 0.0) {
    const double period = 2.0 * kPi / std::max(c.dipole.omega0, c.dipole.omega_c);
    w.dt = std::min(period, scale) / 200.0;
  }
  return w;
}

struct GaugeRow {
  double alpha = 0.0;
  double fidelity_correct = 0.0;
  double fidelity_naive = 0.0;
  double residual = 0.0;
  double x_coefficient = 0.0;
};

/// Shared sweep for the two gauge models. The reference evolution is the naive Hamiltonian at
/// the irrotational gauge; every gauge alpha starts from the frame-mapped reference state.
void run_gauge_sweep(const GaugeModel& model, const ScenarioConfig& config, const Window& window,
                     const std::vector<Observable>& observables, const std::function<double(double)>& x_coefficient,
                     const fs::path& out_dir, int threads, std::ostream& log, json& summary) {
  const double alpha_irr = model.irrotational_alpha();
  const TimeDependentHamiltonian reference = model.naive(alpha_irr);
  const Vector psi0 = ground_state(reference.evaluate(window.t0));

  PropagationOptions endpoints;
  endpoints.method = config.numerics.method;
  endpoints.record_stride = 0;
  const Trajectory ref = propagate(reference, psi0, window.t0, window.t1, window.dt, endpoints);
  log << "reference gauge alpha_irr = " << format_number(alpha_irr) << " propagated\n";

  const std::vector<double> samples = uniform_samples(window.t0, window.t1, kResidualSamples);
  std::vector<GaugeRow> rows(config.gauge_list.size());
  std::mutex write_mutex;
  parallel_for(static_cast<int>(rows.size()), threads, [&](int i) {
    const double alpha = config.gauge_list[i];
    const TimeDependentHamiltonian correct = model.correct(alpha);
    const TimeDependentHamiltonian naive = model.naive(alpha);
    Vector start = model.apply_gauge_unitary(alpha_irr, alpha, window.t0, psi0);
    start /= start.norm();

    PropagationOptions recorded;
    recorded.method = config.numerics.method;
    recorded.record_stride = config.numerics.record_stride;
    recorded.observables = observables;
    const Trajectory traj = propagate(correct, start, window.t0, window.t1, window.dt, recorded);
    const Trajectory naive_traj = propagate(naive, start, window.t0, window.t1, window.dt, endpoints);
    if (traj.max_norm_drift() > 1e-8 || naive_traj.max_norm_drift() > 1e-8) {
      throw InvariantError("norm drift above 1e-8 in gauge " + format_number(alpha));
    }
    const Vector mapped = model.apply_gauge_unitary(alpha_irr, alpha, window.t1, ref.final_state());

    GaugeRow& row = rows[i];
    row.alpha = alpha;
    row.fidelity_correct = fidelity(mapped, traj.final_state());
    row.fidelity_naive = fidelity(mapped, naive_traj.final_state());
    row.residual = residual(naive, correct, samples);
    row.x_coefficient = x_coefficient(alpha);

    std::lock_guard<std::mutex> lock(write_mutex);
    std::ofstream out = open_output(out_dir / ("trajectory_alpha_" + alpha_label(alpha) + ".csv"));
    write_trajectory_csv(traj, out);
    log << "gauge " << format_number(alpha) << ": fidelity_correct=" << format_number(row.fidelity_correct)
        << " fidelity_naive=" << format_number(row.fidelity_naive) << "\n";
  });

  {
    std::ofstream out = open_output(out_dir / "fidelity_vs_alpha.csv");
    CsvWriter csv(out, {"alpha", "fidelity_correct", "fidelity_naive"});
    for (const auto& r : rows) csv.row({r.alpha, r.fidelity_correct, r.fidelity_naive});
  }
  {
    std::ofstream out = open_output(out_dir / "residual_vs_alpha.csv");
    CsvWriter csv(out, {"alpha", "residual", "x_coefficient"});
    for (const auto& r : rows) csv.row({r.alpha, r.residual, r.x_coefficient});
  }

  summary["alpha_irr"] = alpha_irr;
  summary["reference_alpha"] = alpha_irr;
  summary["t0"] = window.t0;
  summary["t1"] = window.t1;
  summary["dt"] = window.dt;
  summary["method"] = std::string(to_string(config.numerics.method));
  summary["residual_samples"] = kResidualSamples;
  json gauges = json::array();
  for (const auto& r : rows) {
    gauges.push_back({{"alpha", r.alpha},
                      {"fidelity_correct", r.fidelity_correct},
                      {"fidelity_naive", r.fidelity_naive},
                      {"residual", r.residual},
                      {"x_coefficient", r.x_coefficient}});
  }
  summary["gauges"] = gauges;
}

json drive_json(const DriveSignal& d) {
  return {{"kind", std::string(to_string(d.kind))},
          {"amplitude", d.amplitude},
          {"offset", d.offset},
          {"ramp_time", d.ramp_time},
          {"frequency", d.frequency},
          {"width", d.width},
          {"speed", d.speed},
          {"center", d.center}};
}

void run_circuit(const ScenarioConfig& config, const fs::path& out_dir, int threads, std::ostream& log) {
  CircuitModel model(config.circuit);
  model.set_omit_correction(config.faults.skip_correction);
  const Window window = circuit_window(config);
  const GridBasis& grid = model.grid();
  const std::vector<Observable> observables{{"q", position_operator(grid)}, {"p", momentum_operator(grid)}};
  const double alpha_irr = model.irrotational_alpha();
  json summary{{"experiment", "circuit"},
               {"C0", config.circuit.C0},
               {"C1", config.circuit.C1},
               {"EJ0", config.circuit.EJ0},
               {"EJ1", config.circuit.EJ1},
               {"n_points", grid.n_points()},
               {"half_width", grid.half_width()},
               {"drive", drive_json(config.circuit.flux_drive)}};
  run_gauge_sweep(model, config, window, observables, [=](double a) { return a - alpha_irr; }, out_dir, threads,
                  log, summary);
  write_json(out_dir / "summary.json", summary);
}

void run_dipole(const ScenarioConfig& config, const fs::path& out_dir, int threads, std::ostream& log) {
  DipoleModel model(config.dipole);
  model.set_omit_correction(config.faults.skip_correction);
  const Window window = dipole_window(config);
  const FockBasis matter(model.matter_dim(), config.dipole.omega0, config.dipole.m);
  const FockBasis field(model.field_dim(), config.dipole.omega_c, 1.0);
  const LadderSet mat = ladder_operators(matter);
  const LadderSet fld = ladder_operators(field);
  const std::vector<Observable> observables{
      {"x", tensor(mat.x, Operator::identity(model.field_dim(), fld.x.basis()))},
      {"X", tensor(Operator::identity(model.matter_dim(), mat.x.basis()), fld.x)}};
  const double alpha_irr = model.irrotational_alpha();
  const double e = config.dipole.e;
  json summary{{"experiment", "dipole"},
               {"m", config.dipole.m},
               {"e", e},
               {"omega0", config.dipole.omega0},
               {"omega_c", config.dipole.omega_c},
               {"theta", config.dipole.theta},
               {"n_matter", config.dipole.n_matter},
               {"n_field", config.dipole.n_field},
               {"padding", config.dipole.padding},
               {"drive", drive_json(config.dipole.mu)}};
  run_gauge_sweep(model, config, window, observables, [=](double a) { return -e * (a - alpha_irr); }, out_dir,
                  threads, log, summary);
  write_json(out_dir / "summary.json", summary);
}

void write_spectrum_csv(const fs::path& path, const Spectrum& closed, const Spectrum& numerical) {
  std::ofstream out = open_output(path);
  CsvWriter csv(out, {"omega", "S_closed", "S_numerical", "gauge_alpha"});
  for (std::size_t k = 0; k < closed.omega.size(); ++k) {
    csv.row({closed.omega[k], closed.S[k], numerical.S[k], numerical.alpha});
  }
}

void run_lineshape(const ScenarioConfig& config, const fs::path& out_dir, int threads, std::ostream& log) {
  const LineshapeBlock& ls = config.lineshape;
  const Numerics& n = config.numerics;
  const ModeGrid grid = ModeGrid::centered(ls.omega_eg, n.band_half_width * ls.gamma, n.modes);
  EmissionOptions options;
  options.T = n.T / ls.gamma;
  options.dt = n.dt > 0.0 ? n.dt : 0.25 / grid.omega_max;
  const std::vector<double> omega = grid.frequencies();

  struct Row {
    double alpha;
    double resonance;
    double deviation;
    double decay_rate;
    double residual_excited;
  };
  std::vector<Row> rows(config.gauge_list.size());
  parallel_for(static_cast<int>(rows.size()), threads, [&](int i) {
    const double alpha = config.gauge_list[i];
    const EmitterSpec spec = EmitterSpec::from_linewidth(ls.omega_eg, ls.gamma, grid, alpha);
    const EmissionRun run = simulate_emission(spec, grid, options);
    if (std::norm(run.state.c_e) >= 1e-4) {
      throw InvariantError("emitter has not decayed by T; increase numerics.T");
    }
    const Spectrum numerical = numerical_spectrum(run.state, grid, ls.omega_eg, alpha);
    const Spectrum closed = closed_form_spectrum(alpha, omega, ls.omega_eg, ls.gamma);
    write_spectrum_csv(out_dir / ("spectrum_alpha_" + alpha_label(alpha) + ".csv"), closed, numerical);
    rows[i] = Row{alpha, interpolate_spectrum(numerical, ls.omega_eg),
                  max_relative_deviation(numerical, closed, ls.omega_eg, 5.0 * ls.gamma),
                  fit_decay_rate(run.times, run.excited_population), std::norm(run.state.c_e)};
  });

  json metadata{{"Gamma", ls.gamma},
                {"omega_eg", ls.omega_eg},
                {"N", grid.N},
                {"delta_omega", grid.spacing()},
                {"omega_min", grid.omega_min},
                {"omega_max", grid.omega_max},
                {"T", options.T},
                {"dt", options.dt},
                {"normalization", "S(w_k) = (w_k/w_eg)^2 |c_k|^2 / delta_omega"},
                {"resonance_closed_form", 2.0 / (kPi * ls.gamma)}};
  json gauges = json::array();
  for (const auto& r : rows) {
    gauges.push_back({{"alpha", r.alpha},
                      {"resonance_value", r.resonance},
                      {"max_relative_deviation_5gamma", r.deviation},
                      {"decay_rate", r.decay_rate},
                      {"residual_excited_population", r.residual_excited}});
    log << "gauge " << format_number(r.alpha) << ": max deviation " << format_number(r.deviation) << "\n";
  }
  metadata["gauges"] = gauges;

  if (ls.kick) {
    const KickSign sign = determine_kick_sign(ls.omega_eg, ls.gamma, grid, options);
    log << "kick sign " << sign.sign << " (deviation " << format_number(sign.chosen_deviation) << ", rejected "
        << format_number(sign.rejected_deviation) << ")\n";
    const Spectrum coulomb = closed_form_spectrum(0.0, omega, ls.omega_eg, ls.gamma);
    std::vector<double> deviations(config.gauge_list.size());
    parallel_for(static_cast<int>(deviations.size()), threads, [&](int i) {
      const double alpha = config.gauge_list[i];
      const Spectrum kicked = sudden_switch_class_run(alpha, ls.omega_eg, ls.gamma, grid, options, sign.sign);
      write_spectrum_csv(out_dir / ("kicked_spectrum_alpha_" + alpha_label(alpha) + ".csv"), coulomb, kicked);
      deviations[i] = max_relative_deviation(kicked, coulomb, ls.omega_eg, 5.0 * ls.gamma);
    });
    json kicked = json::array();
    for (std::size_t i = 0; i < deviations.size(); ++i) {
      kicked.push_back({{"alpha", config.gauge_list[i]}, {"max_relative_deviation_from_S0", deviations[i]}});
    }
    metadata["kick_sign"] = sign.sign;
    metadata["kick_sign_deviation"] = sign.chosen_deviation;
    metadata["rejected_kick_sign_deviation"] = sign.rejected_deviation;
    metadata["kicked"] = kicked;
  } else {
    metadata["kick_sign"] = nullptr;
  }
  write_json(out_dir / "spectrum_metadata.json", metadata);
  write_json(out_dir / "summary.json", json{{"experiment", "lineshape"}, {"metadata", "spectrum_metadata.json"},
                                            {"gauge_list", config.gauge_list}});
}

void report_error(std::ostream& err, const fs::path* out_dir, const std::string& kind, const std::string& message,
                  const std::string& field) {
  json e{{"error", {{"kind", kind}, {"message", message}}}};
  if (!field.empty()) e["error"]["field"] = field;
  err << e.dump() << '\n';
  if (out_dir) {
    std::error_code ec;
    fs::create_directories(*out_dir, ec);
    if (!ec) {
      std::ofstream out(*out_dir / "error.json", std::ios::binary);
      if (out) out << e.dump(2) << '\n';
    }
  }
}

template <typename Body>
int guarded(std::ostream& err, const std::optional<fs::path>& out_dir, Body body) {
  auto dir = [&] { return out_dir ? &*out_dir : nullptr; };
  try {
    return body();
  } catch (const ConfigError& e) {
    report_error(err, dir(), "config", e.what(), e.field());
    return exit_config;
  } catch (const InvariantError& e) {
    report_error(err, dir(), "invariant", e.what(), "");
    return exit_invariant;
  } catch (const std::exception& e) {
    report_error(err, dir(), "internal", e.what(), "");
    return exit_internal;
  }
}

}  // namespace

fs::path resolve_output_dir(const ScenarioConfig& config, const RunOptions& options) {
  if (options.out_dir && !options.out_dir->empty()) return *options.out_dir;
  if (const char* env = std::getenv("GAUGEKIT_OUT"); env && *env) return env;
  if (!config.output_dir.empty()) return config.output_dir;
  return "gaugekit_out";
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first) first = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

std::string alpha_label(double alpha) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.10g", alpha);
  return buffer;
}

void run_scenario(const ScenarioConfig& config, const fs::path& out_dir, int threads, std::ostream& log) {
  fs::create_directories(out_dir);
  switch (config.experiment) {
    case Experiment::circuit:
      run_circuit(config, out_dir, threads, log);
      break;
    case Experiment::dipole:
      run_dipole(config, out_dir, threads, log);
      break;
    case Experiment::lineshape:
      run_lineshape(config, out_dir, threads, log);
      break;
    case Experiment::verify: {
      const VerifyReport report = run_verify_suite(config, log);
      write_verify_report(out_dir / "verify_report.json", report);
      if (!report.passed()) throw InvariantError("verification suite: " + report.first_failure());
      break;
    }
  }
}

int run_command(const std::string& config_path, const RunOptions& options, std::ostream& log, std::ostream& err) {
  std::optional<fs::path> out_dir;
  if (options.out_dir && !options.out_dir->empty()) out_dir = *options.out_dir;
  return guarded(err, out_dir, [&] {
    if (options.threads < 1) throw ConfigError("--threads", "must be at least 1");
    const ScenarioConfig config = ScenarioConfig::load(config_path);
    out_dir = resolve_output_dir(config, options);
    run_scenario(config, *out_dir, options.threads, log);
    log << "outputs written to " << out_dir->string() << "\n";
    return static_cast<int>(exit_ok);
  });
}

int verify_command(const std::optional<std::string>& config_path, const RunOptions& options, std::ostream& log,
                   std::ostream& err) {
  std::optional<fs::path> out_dir;
  if (options.out_dir && !options.out_dir->empty()) out_dir = *options.out_dir;
  return guarded(err, out_dir, [&] {
    if (options.threads < 1) throw ConfigError("--threads", "must be at least 1");
    const ScenarioConfig config = config_path ? ScenarioConfig::load(*config_path) : ScenarioConfig::verify_defaults();
    if (config.experiment != Experiment::verify) {
      throw ConfigError("experiment", "verify expects an experiment of type verify");
    }
    out_dir = resolve_output_dir(config, options);
    run_scenario(config, *out_dir, options.threads, log);
    log << "all checks passed; report written to " << (*out_dir / "verify_report.json").string() << "\n";
    return static_cast<int>(exit_ok);
  });
}

}  // namespace gaugekit
