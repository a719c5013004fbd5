#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gaugekit/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"gaugekit: gauge-relative light-matter dynamics"};
  app.require_subcommand(1);

  gaugekit::RunOptions options;
  std::string run_config;
  std::string verify_config;
  std::string out_dir;

  CLI::App* run = app.add_subcommand("run", "Run a circuit, dipole or lineshape scenario");
  run->add_option("config", run_config, "Scenario JSON file")->required();
  run->add_option("--out", out_dir, "Output directory (overrides GAUGEKIT_OUT and the config)");
  run->add_option("--threads", options.threads, "Worker threads for the gauge list")->check(CLI::PositiveNumber);

  CLI::App* verify = app.add_subcommand("verify", "Run the invariant suite of every module");
  verify->add_option("config", verify_config, "Optional verify scenario JSON file");
  verify->add_option("--out", out_dir, "Output directory for verify_report.json");
  verify->add_option("--threads", options.threads, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gaugekit::exit_config;
  }
  if (!out_dir.empty()) options.out_dir = out_dir;

  if (*run) return gaugekit::run_command(run_config, options, std::cout, std::cerr);
  std::optional<std::string> config;
  if (!verify_config.empty()) config = verify_config;
  return gaugekit::verify_command(config, options, std::cout, std::cerr);
}
