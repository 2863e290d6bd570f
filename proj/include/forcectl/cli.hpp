#pragma once

// Command implementations behind the `forcectl` executable. Each returns a
// process exit code (see ExitCode) and reports diagnostics on `err`.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "forcectl/fuzzy.hpp"
#include "forcectl/scene.hpp"

namespace forcectl::cli {

struct RunOptions {
  /// Overrides [experiment] trace_dir.
  std::optional<std::filesystem::path> traceDir;
  /// Overrides [controller] rulebase.
  std::optional<fuzzy::RuleVariant> rulebase;
  /// Reserved; the simulator is deterministic and ignores it.
  std::optional<std::uint64_t> seed;
};

int cmdCompile(const std::filesystem::path &scenePath, const std::filesystem::path &outPath,
               const std::optional<scene::CalibrationTransform> &calibration, std::ostream &out, std::ostream &err);

/// Writes <trace_dir>/<name>_<controller>.csv and <name>_<controller>_metrics.txt.
int cmdRun(const std::filesystem::path &configPath, const RunOptions &options, std::ostream &out, std::ostream &err);

/// Runs the scenario under PI and fuzzy-PI, writes both traces and metrics plus <name>_compare.txt.
int cmdCompare(const std::filesystem::path &configPath, const RunOptions &options, std::ostream &out,
               std::ostream &err);

/// Tabulates metrics of the selected controller over a kp x ki grid.
int cmdSweep(const std::filesystem::path &configPath, const RunOptions &options, const std::vector<double> &kpValues,
             const std::vector<double> &kiValues, std::ostream &out, std::ostream &err);

}  // namespace forcectl::cli
