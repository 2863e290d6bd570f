#pragma once

/**
 * Experiment configuration: the scene file's line-oriented `key value`
 * format, grouped into `[section]` blocks.
 *
 *   [experiment]   name, scene, trace_dir
 *   [controller]   controller (pi|fuzzy_pi), rulebase (as_printed|canonical),
 *                  axis, du_max, kp, ki, kx, partition default,
 *                  centers <7 values>, half_widths <1 or 7 values>
 *   [pi]           kp, ki, kx          gains used whenever PI runs
 *   [fuzzy_pi]     kp, ki, kx          gains used whenever fuzzy-PI runs
 *   [environment]  ks, dt, z_surface, obstacle_height, obstacle_xmin,
 *                  obstacle_xmax, calib_dx, calib_dy, calib_dz, calib_dyaw,
 *                  f_setpoint, contact_threshold, settle_band, settle_hold,
 *                  max_steps
 *
 * Gains for a controller resolve as: built-in tuning, then its own block,
 * then kp/ki/kx from [controller] when that block selects it. Lines before
 * the first header belong to [experiment].
 */

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "forcectl/control.hpp"
#include "forcectl/sim.hpp"

namespace forcectl::config {

/// Tuned gains shipped for the foreign-object placement scenario.
control::ControllerGains defaultGains(control::ControllerKind kind);

struct ExperimentConfig {
  std::string name = "experiment";
  std::filesystem::path scenePath;
  std::filesystem::path traceDir = ".";
  control::ControllerKind selected = control::ControllerKind::FuzzyPi;
  control::ControllerConfig pi;
  control::ControllerConfig fuzzyPi;
  sim::Environment environment;
  /// Overrides the scene's `setpoint` header when present.
  std::optional<double> forceSetpoint;

  [[nodiscard]] const control::ControllerConfig &controller(control::ControllerKind kind) const {
    return kind == control::ControllerKind::Pi ? pi : fuzzyPi;
  }
  control::ControllerConfig &controller(control::ControllerKind kind) {
    return kind == control::ControllerKind::Pi ? pi : fuzzyPi;
  }

  /// Throws ConfigError if any block violates its invariants.
  void validate() const;
};

/// Relative scene and trace paths are resolved against `baseDir`. Throws
/// ParseError on unknown sections/keys or malformed values.
ExperimentConfig parseExperimentConfig(std::string_view text, const std::filesystem::path &baseDir = {},
                                       std::string defaultName = "experiment");

/// Reads and parses a config file; the experiment name defaults to the file stem. Throws IoError if unreadable.
ExperimentConfig loadExperimentConfig(const std::filesystem::path &path);

/// Whole-file read. Throws IoError.
std::string readFile(const std::filesystem::path &path);
/// Whole-file write, replacing existing content. Throws IoError.
void writeFile(const std::filesystem::path &path, std::string_view content);

}  // namespace forcectl::config
