#pragma once

/**
 * Data-parallel kernels with serial reference implementations.
 *
 * The OpenMP versions must produce bit-identical results to the serial ones:
 * every output slot is written by exactly one iteration and no reduction
 * crosses iterations.
 */

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "forcectl/control.hpp"
#include "forcectl/program.hpp"
#include "forcectl/sim.hpp"

namespace forcectl::parallel {

/// Controller output du over an (e, de) grid, row-major: result[i * de.size() + j] = du(e[i], de[j]).
std::vector<double> controlSurfaceSerial(const control::ControllerConfig &config, std::span<const double> errors,
                                         std::span<const double> changes);
std::vector<double> controlSurface(const control::ControllerConfig &config, std::span<const double> errors,
                                   std::span<const double> changes);

/// `count` evenly spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t count);

struct ExperimentOutcome {
  sim::Trace trace;
  /// False when the step budget ran out; `trace` is then the partial trace.
  bool converged = false;
  /// Validation failure message, empty otherwise.
  std::string error;
};

/// One closed-loop run per configuration, all against the same program and environment.
std::vector<ExperimentOutcome> runBatchSerial(const program::RobotProgram &program,
                                              std::span<const control::ControllerConfig> configs,
                                              const sim::Environment &env);
std::vector<ExperimentOutcome> runBatch(const program::RobotProgram &program,
                                        std::span<const control::ControllerConfig> configs,
                                        const sim::Environment &env);

struct SweepPoint {
  double kp = 0.0;
  double ki = 0.0;
  bool converged = false;
  /// Empty when the run had no contact phase or failed.
  std::optional<sim::Metrics> metrics;
};

/// Trial-and-error tuning grid: every (kp, ki) pair on top of `base`, row-major over kp.
std::vector<SweepPoint> sweepGains(const control::ControllerConfig &base, std::span<const double> kpValues,
                                   std::span<const double> kiValues, const program::RobotProgram &program,
                                   const sim::Environment &env, double setpoint);

}  // namespace forcectl::parallel
