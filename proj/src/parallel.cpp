#include "forcectl/parallel.hpp"

#include <cstdint>

namespace forcectl::parallel {

namespace {

ExperimentOutcome runOne(const program::RobotProgram &program, const control::ControllerConfig &config,
                         const sim::Environment &env) {
  ExperimentOutcome outcome;
  try {
    outcome.trace = sim::runClosedLoop(program, config, env);
    outcome.converged = true;
  } catch (const sim::NonConvergenceError &error) {
    outcome.trace = error.partialTrace();
  } catch (const Error &error) {
    outcome.error = error.what();
  }
  return outcome;
}

}  // namespace

std::vector<double> controlSurfaceSerial(const control::ControllerConfig &config, std::span<const double> errors,
                                         std::span<const double> changes) {
  const control::ForceController controller(config);
  std::vector<double> out(errors.size() * changes.size());
  for (std::size_t i = 0; i < errors.size(); ++i) {
    for (std::size_t j = 0; j < changes.size(); ++j) {
      out[i * changes.size() + j] = controller.command(errors[i], changes[j]);
    }
  }
  return out;
}

std::vector<double> controlSurface(const control::ControllerConfig &config, std::span<const double> errors,
                                   std::span<const double> changes) {
  const control::ForceController controller(config);
  std::vector<double> out(errors.size() * changes.size());
  const auto rows = static_cast<std::int64_t>(errors.size());
  const std::size_t cols = changes.size();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < rows; ++i) {
    const auto row = static_cast<std::size_t>(i);
    for (std::size_t j = 0; j < cols; ++j) {
      out[row * cols + j] = controller.command(errors[row], changes[j]);
    }
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> values(count);
  if (count == 1) {
    values[0] = lo;
    return values;
  }
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  if (count > 0) {
    values.back() = hi;
  }
  return values;
}

std::vector<ExperimentOutcome> runBatchSerial(const program::RobotProgram &program,
                                              std::span<const control::ControllerConfig> configs,
                                              const sim::Environment &env) {
  std::vector<ExperimentOutcome> outcomes(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    outcomes[i] = runOne(program, configs[i], env);
  }
  return outcomes;
}

std::vector<ExperimentOutcome> runBatch(const program::RobotProgram &program,
                                        std::span<const control::ControllerConfig> configs,
                                        const sim::Environment &env) {
  std::vector<ExperimentOutcome> outcomes(configs.size());
  const auto count = static_cast<std::int64_t>(configs.size());
  // Runs vary a lot in length, hence dynamic scheduling.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto index = static_cast<std::size_t>(i);
    outcomes[index] = runOne(program, configs[index], env);
  }
  return outcomes;
}

std::vector<SweepPoint> sweepGains(const control::ControllerConfig &base, std::span<const double> kpValues,
                                   std::span<const double> kiValues, const program::RobotProgram &program,
                                   const sim::Environment &env, double setpoint) {
  std::vector<control::ControllerConfig> configs;
  configs.reserve(kpValues.size() * kiValues.size());
  for (const double kp : kpValues) {
    for (const double ki : kiValues) {
      auto config = base;
      config.gains.kp = kp;
      config.gains.ki = ki;
      configs.push_back(config);
    }
  }
  const auto outcomes = runBatch(program, configs, env);
  std::vector<SweepPoint> points(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    points[i] = {configs[i].gains.kp, configs[i].gains.ki, outcomes[i].converged, std::nullopt};
    if (outcomes[i].error.empty()) {
      try {
        points[i].metrics = sim::computeMetrics(outcomes[i].trace, setpoint);
      } catch (const sim::MetricError &) {
      }
    }
  }
  return points;
}

}  // namespace forcectl::parallel
