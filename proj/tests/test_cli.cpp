#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kRoot = fs::path(GAUGEKIT_TEST_DIR) / "cli_work";

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = kRoot / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path path = dir / "scenario.json";
  std::ofstream(path) << text;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

struct Result {
  int code;
  std::string err;
};

Result run(const std::string& args, const fs::path& dir, const std::string& env = "") {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = env + " " + std::string(GAUGEKIT_CLI) + " " + args + " > " + (dir / "stdout.txt").string() +
                          " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
}

std::vector<std::vector<double>> read_rows(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream s(line);
    std::string cell;
    while (std::getline(s, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

const char* kCircuit = R"({
  "experiment": "circuit", "gauge_list": [0, 0.25, 1],
  "circuit": {"C0": 3, "C1": 1},
  "numerics": {"n_points": 128, "t1": 2.0, "dt": 0.01}
})";

}  // namespace

TEST(Cli, CircuitRunWritesOutputs) {
  const fs::path dir = fresh_dir("circuit");
  const fs::path config = write_config(dir, kCircuit);
  const fs::path out = dir / "out";
  const Result r = run("run " + config.string() + " --out " + out.string(), dir);
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* a : {"0", "0.25", "1"}) {
    EXPECT_EQ(first_line(out / ("trajectory_alpha_" + std::string(a) + ".csv")), "t,norm,q,p");
  }
  EXPECT_EQ(first_line(out / "fidelity_vs_alpha.csv"), "alpha,fidelity_correct,fidelity_naive");
  EXPECT_EQ(first_line(out / "residual_vs_alpha.csv"), "alpha,residual,x_coefficient");
  const json summary = json::parse(slurp(out / "summary.json"));
  EXPECT_DOUBLE_EQ(summary["alpha_irr"].get<double>(), 0.25);

  const auto fidelity = read_rows(out / "fidelity_vs_alpha.csv");
  ASSERT_EQ(fidelity.size(), 3u);
  for (const auto& row : fidelity) EXPECT_GE(row[1], 1.0 - 1e-6);
  const auto residual = read_rows(out / "residual_vs_alpha.csv");
  ASSERT_EQ(residual.size(), 3u);
  EXPECT_EQ(residual[1][1], 0.0);
  EXPECT_DOUBLE_EQ(residual[0][2], -0.25);
  EXPECT_DOUBLE_EQ(residual[2][2], 0.75);
  EXPECT_GT(residual[2][1], residual[0][1]);
}

TEST(Cli, RerunIsByteIdentical) {
  const fs::path dir = fresh_dir("rerun");
  const fs::path config = write_config(dir, kCircuit);
  ASSERT_EQ(run("run " + config.string() + " --out " + (dir / "a").string(), dir).code, 0);
  ASSERT_EQ(run("run " + config.string() + " --out " + (dir / "b").string(), dir).code, 0);
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    EXPECT_EQ(slurp(entry.path()), slurp(dir / "b" / entry.path().filename())) << entry.path();
    ++compared;
  }
  EXPECT_EQ(compared, 6);
}

TEST(Cli, OutputDirectoryPrecedence) {
  const fs::path dir = fresh_dir("precedence");
  std::string text = kCircuit;
  text.insert(text.find('{') + 1, "\"output_dir\": \"" + (dir / "from_config").string() + "\",");
  text.replace(text.find("[0, 0.25, 1]"), 12, "[0.25]");
  const fs::path config = write_config(dir, text);
  ASSERT_EQ(run("run " + config.string(), dir).code, 0);
  EXPECT_TRUE(fs::exists(dir / "from_config" / "summary.json"));
  const std::string env = "GAUGEKIT_OUT=" + (dir / "from_env").string();
  ASSERT_EQ(run("run " + config.string(), dir, env).code, 0);
  EXPECT_TRUE(fs::exists(dir / "from_env" / "summary.json"));
  ASSERT_EQ(run("run " + config.string() + " --out " + (dir / "from_flag").string(), dir, env).code, 0);
  EXPECT_TRUE(fs::exists(dir / "from_flag" / "summary.json"));
}

TEST(Cli, ConfigErrorNamesField) {
  const fs::path dir = fresh_dir("bad_config");
  const fs::path config =
      write_config(dir, R"({"experiment": "circuit", "gauge_list": [0], "circuit": {"C0": -1}})");
  const Result r = run("run " + config.string() + " --out " + (dir / "out").string(), dir);
  EXPECT_EQ(r.code, 2);
  const json err = json::parse(r.err);
  EXPECT_EQ(err["error"]["kind"], "config");
  EXPECT_EQ(err["error"]["field"], "circuit.C0");
  const json saved = json::parse(slurp(dir / "out" / "error.json"));
  EXPECT_EQ(saved["error"]["field"], "circuit.C0");
}

TEST(Cli, UsageErrors) {
  const fs::path dir = fresh_dir("usage");
  EXPECT_EQ(run("", dir).code, 2);
  EXPECT_EQ(run("run", dir).code, 2);
  EXPECT_EQ(run("run " + (dir / "missing.json").string(), dir).code, 2);
  EXPECT_EQ(run("--help", dir).code, 0);
  const fs::path config = write_config(dir, kCircuit);
  EXPECT_EQ(run("verify " + config.string(), dir).code, 2);
}

TEST(Cli, LineshapeRun) {
  const fs::path dir = fresh_dir("lineshape");
  const fs::path config = write_config(dir, R"({
    "experiment": "lineshape", "gauge_list": [0, 1],
    "lineshape": {"omega_eg": 1.0, "gamma": 0.02},
    "numerics": {"modes": 1000, "band_half_width": 40}
  })");
  const fs::path out = dir / "out";
  const Result r = run("run " + config.string() + " --out " + out.string(), dir);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(first_line(out / "spectrum_alpha_0.csv"), "omega,S_closed,S_numerical,gauge_alpha");
  const json meta = json::parse(slurp(out / "spectrum_metadata.json"));
  EXPECT_EQ(meta["N"], 1000);
  EXPECT_DOUBLE_EQ(meta["Gamma"].get<double>(), 0.02);
  const double closed = meta["resonance_closed_form"].get<double>();
  EXPECT_NEAR(closed, 2.0 / (M_PI * 0.02), 1e-9);
  for (const auto& g : meta["gauges"]) {
    EXPECT_NEAR(g["resonance_value"].get<double>() / closed, 1.0, 0.01);
  }
  const auto rows = read_rows(out / "spectrum_alpha_1.csv");
  ASSERT_EQ(rows.size(), 1000u);
  for (const auto& row : rows) EXPECT_EQ(row[3], 1.0);
}

TEST(Cli, VerifyFaultInjectionAndEmptyGaugeList) {
  const fs::path dir = fresh_dir("verify_fault");
  const fs::path faulty =
      write_config(dir, R"({"experiment": "verify", "fault_injection": {"skip_correction": true}})");
  const Result r = run("verify " + faulty.string() + " --out " + (dir / "out").string(), dir);
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(json::parse(r.err)["error"]["kind"], "invariant");
  const json report = json::parse(slurp(dir / "out" / "verify_report.json"));
  EXPECT_FALSE(report["passed"].get<bool>());

  const fs::path empty = dir / "empty.json";
  std::ofstream(empty) << R"({"experiment": "verify", "gauge_list": []})";
  EXPECT_EQ(run("verify " + empty.string(), dir).code, 2);
}
