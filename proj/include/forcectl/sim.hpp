#pragma once

/**
 * Deterministic discrete-time cell: a point end-effector executing a robot
 * program against a linear-spring contact environment, with an optional
 * foreign object and a calibration offset between the modelled and real
 * cell. The runner closes the loop sensor -> controller -> actuator once per
 * sample period.
 */

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "forcectl/control.hpp"
#include "forcectl/errors.hpp"
#include "forcectl/program.hpp"
#include "forcectl/scene.hpp"

namespace forcectl::sim {

/// Box lying on the surface, unknown to the scene model; spans [xMin, xMax] in x and all of y.
struct Obstacle {
  double height = 20.0;
  double xMin = 0.0;
  double xMax = 0.0;
};

struct Environment {
  /// Nominal contact surface height (mm).
  double zSurface = 0.0;
  /// Contact stiffness (N/mm).
  double stiffness = 10.0;
  std::optional<Obstacle> obstacle;
  /// Real cell = calibration applied to the modelled cell.
  scene::CalibrationTransform calibration;
  /// Sample period (s).
  double dt = 0.004;
  /// |f_a| above this (N) counts as contact.
  double contactThreshold = 0.1;
  /// Settling band as a fraction of |f_d|; never narrower than contactThreshold.
  double settleBand = 0.05;
  /// Consecutive in-band samples that end a force-controlled segment.
  std::size_t settleHold = 50;
  std::size_t maxSteps = 100000;

  /// Throws ConfigError on non-positive stiffness, dt, thresholds or an empty obstacle span.
  void validate() const;
  /// Absolute settling band (N) for a given setpoint.
  [[nodiscard]] double band(double setpoint) const;
};

struct WorldState {
  scene::Pose ee;
  bool gripper = false;
  /// Sample index; t = k * dt.
  std::size_t k = 0;
  double t = 0.0;
};

struct TraceRecord {
  std::size_t k = 0;
  double t = 0.0;
  /// Setpoint and measured force on the controlled axis (N).
  double fd = 0.0;
  double fa = 0.0;
  double e = 0.0;
  double de = 0.0;
  /// Controller increment issued this sample and the running sum (mm).
  double du = 0.0;
  double u = 0.0;
  /// End-effector height at which fa was measured (mm).
  double eeZ = 0.0;
  /// True while the force controller is in charge of the controlled axis.
  bool contact = false;

  friend bool operator==(const TraceRecord &, const TraceRecord &) = default;
};

using Trace = std::vector<TraceRecord>;

/// Penetration (mm) of a pose into the real cell, 0 in free space.
double penetration(const Environment &env, const scene::Pose &ee);

/// fz = -stiffness * penetration; every other component is 0.
control::Wrench contactForce(const Environment &env, const scene::Pose &ee);

/// Moves the end-effector by du (mm) along the translation matching `axis`
/// (fx -> x, fy -> y, fz -> z), advances one sample and senses the new pose.
/// Throws ConfigError for torque axes.
std::pair<WorldState, control::Wrench> stepWorld(WorldState world, const Environment &env, double du,
                                                 control::Axis axis = control::Axis::Fz);

/// Raised when the step budget runs out; carries everything simulated so far.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string &what, Trace partial)
      : Error(ExitCode::kNonConvergence, what), partial_(std::move(partial)) {}
  [[nodiscard]] const Trace &partialTrace() const { return partial_; }

 private:
  Trace partial_;
};

/**
 * Executes `program` one sample at a time.
 *
 * MOVEL segments advance speed * dt per sample. SETFORCE arms force control;
 * while armed, the first sample with |f_a| above the contact threshold hands
 * the controlled axis to the controller, which then stays in charge (path
 * progress paused) until |e| has been inside the settling band for
 * settleHold consecutive samples. That ends the segment where the
 * end-effector stands. The next GRIP disarms force control. GRIP and SETFORCE
 * take one sample each.
 *
 * The error state runs over the whole trace and is primed by the first
 * sample, so de = e - e_prev holds on every record. Throws
 * NonConvergenceError when maxSteps samples have been used.
 */
Trace runClosedLoop(const program::RobotProgram &program, const control::ControllerConfig &config,
                    const Environment &env);

class MetricError : public Error {
 public:
  explicit MetricError(const std::string &what) : Error(ExitCode::kValidation, what) {}
};

struct Metrics {
  /// max(0, (|peak f_a| - |f_d|) / |f_d|) * 100 over the contact phase.
  double overshootPct = 0.0;
  /// Contact-phase index after which |e| stays below the band; nullopt = not settled.
  std::optional<std::size_t> settlingSteps;
  /// Mean |e| over the final 20% of the contact phase (N).
  double steadyStateError = 0.0;
  double peakForce = 0.0;
  std::size_t contactSteps = 0;
};

/// Contact phase = records flagged `contact`, in trace order. `bandFraction`
/// is relative to |f_d|. Throws MetricError when no record is in contact or f_d is 0.
Metrics computeMetrics(const Trace &trace, double setpoint, double bandFraction = 0.05);

/// Header `k,t,f_d,f_a,e,de,du,u,ee_z,contact`, 9 significant digits, LF endings.
void writeTraceCsv(std::ostream &out, const Trace &trace);

}  // namespace forcectl::sim
