// forcectl: compile scenes into robot programs and run force-control experiments.

#include <CLI11.hpp>

#include <iostream>

#include "forcectl/cli.hpp"

int main(int argc, char **argv) {
  using namespace forcectl;

  CLI::App app{"Scene-to-program compiler and fuzzy-PI / PI force-control simulator"};
  app.require_subcommand(1);

  std::string tracedir;
  std::string rulebase;
  std::uint64_t seed = 0;
  auto addRunFlags = [&](CLI::App *cmd) {
    cmd->add_option("--trace-dir", tracedir, "Directory for traces and metrics (overrides trace_dir)");
    cmd->add_option("--rulebase", rulebase, "Rule base override")->check(CLI::IsMember({"as_printed", "canonical"}));
    cmd->add_option("--seed", seed, "Reserved; the simulator is deterministic");
  };
  auto runOptions = [&] {
    cli::RunOptions options;
    if (!tracedir.empty()) {
      options.traceDir = tracedir;
    }
    if (!rulebase.empty()) {
      options.rulebase = fuzzy::parseRuleVariant(rulebase);
    }
    if (app.get_subcommands().front()->count("--seed") > 0) {
      options.seed = seed;
    }
    return options;
  };

  std::string scenePath;
  std::string programPath;
  std::vector<double> calib;
  auto *compile = app.add_subcommand("compile", "Compile a scene file into a robot program");
  compile->add_option("scene", scenePath, "Scene file")->required();
  compile->add_option("-o,--output", programPath, "Program file to write")->required();
  compile->add_option("--calib", calib, "Calibration offset: dx dy dz dyaw")->expected(4);

  std::string configPath;
  auto *run = app.add_subcommand("run", "Run one closed-loop experiment");
  run->add_option("config", configPath, "Experiment config file")->required();
  addRunFlags(run);

  auto *compare = app.add_subcommand("compare", "Run the same experiment under PI and fuzzy-PI");
  compare->add_option("config", configPath, "Experiment config file")->required();
  addRunFlags(compare);

  std::vector<double> kpValues;
  std::vector<double> kiValues;
  auto *sweep = app.add_subcommand("sweep", "Tabulate metrics over a grid of kp and ki values");
  sweep->add_option("config", configPath, "Experiment config file")->required();
  sweep->add_option("--kp", kpValues, "kp values")->required();
  sweep->add_option("--ki", kiValues, "ki values")->required();
  addRunFlags(sweep);

  CLI11_PARSE(app, argc, argv);

  if (compile->parsed()) {
    std::optional<scene::CalibrationTransform> transform;
    if (!calib.empty()) {
      transform = scene::CalibrationTransform{calib[0], calib[1], calib[2], calib[3]};
    }
    return cli::cmdCompile(scenePath, programPath, transform, std::cout, std::cerr);
  }
  if (run->parsed()) {
    return cli::cmdRun(configPath, runOptions(), std::cout, std::cerr);
  }
  if (compare->parsed()) {
    return cli::cmdCompare(configPath, runOptions(), std::cout, std::cerr);
  }
  return cli::cmdSweep(configPath, runOptions(), kpValues, kiValues, std::cout, std::cerr);
}
