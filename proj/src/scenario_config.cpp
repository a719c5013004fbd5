#include "gaugekit/scenario_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gaugekit/errors.hpp"

namespace gaugekit {

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

/// Reads fields of one JSON object, remembering which keys were consumed.
class Block {
 public:
  Block(const json& value, std::string path) : value_(value), path_(std::move(path)) {
    if (!value_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return value_.contains(key);
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return value_.at(key);
  }

  void number(const std::string& key, double& out) {
    if (!has(key)) return;
    const json& v = value_.at(key);
    if (!v.is_number()) throw ConfigError(field(key), "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) throw ConfigError(field(key), "must be finite");
  }

  void positive(const std::string& key, double& out) {
    number(key, out);
    if (!(out > 0.0)) throw ConfigError(field(key), "must be positive");
  }

  void integer(const std::string& key, int& out, int minimum) {
    if (!has(key)) return;
    const json& v = value_.at(key);
    if (!v.is_number_integer()) throw ConfigError(field(key), "expected an integer");
    const auto value = v.get<long long>();
    if (value < minimum || value > 1'000'000'000) {
      throw ConfigError(field(key), "must be an integer >= " + std::to_string(minimum));
    }
    out = static_cast<int>(value);
  }

  void boolean(const std::string& key, bool& out) {
    if (!has(key)) return;
    const json& v = value_.at(key);
    if (!v.is_boolean()) throw ConfigError(field(key), "expected true or false");
    out = v.get<bool>();
  }

  void string(const std::string& key, std::string& out) {
    if (!has(key)) return;
    const json& v = value_.at(key);
    if (!v.is_string()) throw ConfigError(field(key), "expected a string");
    out = v.get<std::string>();
  }

  void finish() const {
    for (const auto& item : value_.items()) {
      if (!seen_.count(item.key())) throw ConfigError(field(item.key()), "unknown key");
    }
  }

 private:
  const json& value_;
  std::string path_;
  std::set<std::string> seen_;
};

Experiment experiment_from_string(const std::string& name) {
  if (name == "circuit") return Experiment::circuit;
  if (name == "dipole") return Experiment::dipole;
  if (name == "lineshape") return Experiment::lineshape;
  if (name == "verify") return Experiment::verify;
  throw ConfigError("experiment", "must be one of circuit, dipole, lineshape, verify");
}

DriveSignal parse_drive(const json& value) {
  Block b(value, "drive");
  std::string kind_name;
  b.string("kind", kind_name);
  if (kind_name.empty()) throw ConfigError("drive.kind", "required");
  DriveSignal d;
  try {
    d.kind = drive_kind_from_string(kind_name);
  } catch (const std::invalid_argument&) {
    throw ConfigError("drive.kind", "must be one of constant, linear_ramp, smooth_step, sinusoid, gaussian_pulse");
  }
  b.number("amplitude", d.amplitude);
  b.number("offset", d.offset);
  b.positive("ramp_time", d.ramp_time);
  b.number("frequency", d.frequency);
  b.positive("width", d.width);
  b.number("speed", d.speed);
  b.number("center", d.center);
  b.finish();
  return d;
}

void parse_numerics(const json& value, Numerics& n) {
  Block b(value, "numerics");
  b.integer("n_points", n.n_points, 2);
  if ((n.n_points & (n.n_points - 1)) != 0) throw ConfigError("numerics.n_points", "must be a power of two");
  b.positive("half_width", n.half_width);
  b.number("t0", n.t0);
  b.number("t1", n.t1);
  b.number("dt", n.dt);
  if (n.dt < 0.0) throw ConfigError("numerics.dt", "must be positive (or 0 for the default)");
  std::string method;
  b.string("method", method);
  if (!method.empty()) {
    try {
      n.method = method_from_string(method);
    } catch (const std::invalid_argument&) {
      throw ConfigError("numerics.method", "must be midpoint_exp or rk4");
    }
  }
  b.integer("record_stride", n.record_stride, 0);
  b.integer("n_matter", n.n_matter, 2);
  b.integer("n_field", n.n_field, 2);
  b.integer("padding", n.padding, 0);
  b.integer("modes", n.modes, 1);
  b.positive("band_half_width", n.band_half_width);
  b.positive("T", n.T);
  b.finish();
}

void require_unused(Block& root, const std::string& key, Experiment experiment) {
  if (root.has(key)) {
    throw ConfigError(key, "block is not used by experiment " + std::string(to_string(experiment)));
  }
}

}  // namespace

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::circuit:
      return "circuit";
    case Experiment::dipole:
      return "dipole";
    case Experiment::lineshape:
      return "lineshape";
    case Experiment::verify:
      return "verify";
  }
  return "unknown";
}

ScenarioConfig ScenarioConfig::parse(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  Block b(root, "");
  ScenarioConfig c;

  std::string experiment;
  b.string("experiment", experiment);
  if (experiment.empty()) throw ConfigError("experiment", "required");
  c.experiment = experiment_from_string(experiment);

  if (b.has("gauge_list")) {
    const json& list = b.raw("gauge_list");
    if (!list.is_array()) throw ConfigError("gauge_list", "expected an array of numbers");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string path = "gauge_list[" + std::to_string(i) + "]";
      if (!list[i].is_number()) throw ConfigError(path, "expected a number");
      const double alpha = list[i].get<double>();
      if (!std::isfinite(alpha)) throw ConfigError(path, "must be finite");
      c.gauge_list.push_back(alpha);
    }
    if (c.gauge_list.empty()) throw ConfigError("gauge_list", "must not be empty");
    for (std::size_t i = 0; i < c.gauge_list.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (c.gauge_list[i] == c.gauge_list[j]) {
          throw ConfigError("gauge_list[" + std::to_string(i) + "]", "duplicate gauge");
        }
      }
    }
  } else if (c.experiment == Experiment::verify) {
    c.gauge_list = {0.0, 0.25, 1.0};
  } else {
    throw ConfigError("gauge_list", "required");
  }
  if (c.experiment == Experiment::lineshape) {
    for (std::size_t i = 0; i < c.gauge_list.size(); ++i) {
      if (c.gauge_list[i] < 0.0 || c.gauge_list[i] > 1.0) {
        throw ConfigError("gauge_list[" + std::to_string(i) + "]", "lineshape gauges must lie in [0, 1]");
      }
    }
  }

  b.string("output_dir", c.output_dir);
  if (b.has("numerics")) parse_numerics(b.raw("numerics"), c.numerics);
  if (b.has("drive")) c.drive = parse_drive(b.raw("drive"));

  if (b.has("fault_injection")) {
    Block f(b.raw("fault_injection"), "fault_injection");
    f.boolean("skip_correction", c.faults.skip_correction);
    f.finish();
  }

  const Numerics& n = c.numerics;
  switch (c.experiment) {
    case Experiment::circuit: {
      require_unused(b, "dipole", c.experiment);
      require_unused(b, "lineshape", c.experiment);
      if (b.has("circuit")) {
        Block m(b.raw("circuit"), "circuit");
        m.positive("C0", c.circuit.C0);
        m.positive("C1", c.circuit.C1);
        m.positive("EJ0", c.circuit.EJ0);
        m.positive("EJ1", c.circuit.EJ1);
        m.finish();
      }
      c.circuit.flux_drive = c.drive.value_or(DriveSignal::sinusoid(0.4, 1.0));
      c.circuit.basis = GridBasis(n.n_points, n.half_width);
      break;
    }
    case Experiment::dipole: {
      require_unused(b, "circuit", c.experiment);
      require_unused(b, "lineshape", c.experiment);
      if (b.has("dipole")) {
        Block m(b.raw("dipole"), "dipole");
        m.positive("m", c.dipole.m);
        m.positive("e", c.dipole.e);
        m.positive("omega0", c.dipole.omega0);
        m.positive("omega_c", c.dipole.omega_c);
        m.number("theta", c.dipole.theta);
        if (c.dipole.theta < 0.0 || c.dipole.theta > 0.5 * kPi + 1e-15) {
          throw ConfigError("dipole.theta", "must lie in [0, pi/2]");
        }
        m.finish();
      }
      c.dipole.mu = c.drive.value_or(DriveSignal::gaussian_pulse(1.0, 2.0));
      c.dipole.n_matter = n.n_matter;
      c.dipole.n_field = n.n_field;
      c.dipole.padding = n.padding;
      break;
    }
    case Experiment::lineshape: {
      require_unused(b, "circuit", c.experiment);
      require_unused(b, "dipole", c.experiment);
      if (c.drive) throw ConfigError("drive", "block is not used by experiment lineshape");
      if (b.has("lineshape")) {
        Block m(b.raw("lineshape"), "lineshape");
        m.positive("omega_eg", c.lineshape.omega_eg);
        m.positive("gamma", c.lineshape.gamma);
        m.boolean("kick", c.lineshape.kick);
        m.finish();
      }
      const ModeGrid grid = ModeGrid::centered(c.lineshape.omega_eg, n.band_half_width * c.lineshape.gamma, n.modes);
      try {
        EmitterSpec::from_linewidth(c.lineshape.omega_eg, c.lineshape.gamma, grid, 0.0).validate(grid);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("lineshape", e.what());
      }
      break;
    }
    case Experiment::verify:
      require_unused(b, "circuit", c.experiment);
      require_unused(b, "dipole", c.experiment);
      require_unused(b, "lineshape", c.experiment);
      if (c.drive) throw ConfigError("drive", "block is not used by experiment verify");
      break;
  }
  b.finish();
  return c;
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

ScenarioConfig ScenarioConfig::verify_defaults() { return parse(R"({"experiment": "verify"})"); }

}  // namespace gaugekit
