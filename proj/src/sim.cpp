#include "forcectl/sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "forcectl/numfmt.hpp"

namespace forcectl::sim {

namespace {

double &translation(scene::Pose &pose, control::Axis axis) {
  switch (axis) {
    case control::Axis::Fx: return pose.x;
    case control::Axis::Fy: return pose.y;
    case control::Axis::Fz: return pose.z;
    default: break;
  }
  throw ConfigError("the contact model only supports force axes; '" + std::string(control::name(axis)) +
                    "' cannot be controlled");
}

scene::Pose interpolate(const scene::Pose &from, const scene::Pose &to, std::size_t i, std::size_t n) {
  if (i >= n) {
    return to;
  }
  const double s = static_cast<double>(i) / static_cast<double>(n);
  auto lerp = [s](double a, double b) { return a + (b - a) * s; };
  auto slerpAngle = [s](double a, double b) { return scene::normalizeAngle(a + scene::normalizeAngle(b - a) * s); };
  return {lerp(from.x, to.x),           lerp(from.y, to.y),           lerp(from.z, to.z),
          slerpAngle(from.roll, to.roll), slerpAngle(from.pitch, to.pitch), slerpAngle(from.yaw, to.yaw)};
}

/// Sequential executor; one instance per run.
class Runner {
 public:
  Runner(const program::RobotProgram &program, const control::ControllerConfig &config, const Environment &env)
      : program_(program), controller_(config), env_(env), axis_(config.axis) {
    const auto &first = std::get<program::MoveL>(program.instructions.front());
    world_.ee = first.pose;
  }

  Trace run() {
    for (const auto &instruction : program_.instructions) {
      if (const auto *move = std::get_if<program::MoveL>(&instruction)) {
        executeMove(*move);
      } else if (const auto *grip = std::get_if<program::Grip>(&instruction)) {
        armed_ = false;
        setpoint_ = 0.0;
        sample(0.0, false);
        world_.gripper = grip->on;
      } else {
        const auto &force = std::get<program::SetForce>(instruction);
        if (force.axis != axis_) {
          throw ConfigError("program arms force control on '" + std::string(control::name(force.axis)) +
                            "' but the controller is configured for '" + std::string(control::name(axis_)) + "'");
        }
        armed_ = true;
        setpoint_ = force.setpoint;
        sample(0.0, false);
      }
    }
    return std::move(trace_);
  }

 private:
  void executeMove(const program::MoveL &move) {
    const scene::Pose start = world_.ee;
    const double distance =
        std::hypot(move.pose.x - start.x, move.pose.y - start.y, move.pose.z - start.z);
    const double perStep = move.speed * env_.dt;
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(distance / perStep)));
    const double band = env_.band(setpoint_);

    bool engaged = false;
    std::size_t inBand = 0;
    std::size_t i = 0;
    while (i < n) {
      const double fa = contactForce(env_, world_.ee)[axis_];
      if (armed_ && !engaged && std::fabs(fa) > env_.contactThreshold) {
        engaged = true;
      }
      if (engaged) {
        const double e = setpoint_ - fa;
        const double du = controller_.command(e, nextError(e).de);
        sample(du, true);
        translation(world_.ee, axis_) += du;
        inBand = std::fabs(e) < band ? inBand + 1 : 0;
        if (inBand >= env_.settleHold) {
          return;
        }
      } else {
        sample(0.0, false);
        ++i;
        world_.ee = interpolate(start, move.pose, i, n);
      }
    }
  }

  [[nodiscard]] control::ErrorState nextError(double e) const { return control::updateError(error_, e); }

  /// Senses at the current pose and appends one record for this sample.
  void sample(double du, bool contact) {
    if (trace_.size() >= env_.maxSteps) {
      throw NonConvergenceError("step budget of " + std::to_string(env_.maxSteps) + " samples exhausted",
                                std::move(trace_));
    }
    const double fa = contactForce(env_, world_.ee)[axis_];
    const double e = setpoint_ - fa;
    error_ = control::updateError(error_, e);
    displacement_ = control::accumulate(displacement_, du);
    trace_.push_back({world_.k, world_.t, setpoint_, fa, error_.e, error_.de, du, displacement_.u, world_.ee.z,
                      contact});
    ++world_.k;
    world_.t = static_cast<double>(world_.k) * env_.dt;
  }

  const program::RobotProgram &program_;
  control::ForceController controller_;
  const Environment &env_;
  control::Axis axis_;

  WorldState world_;
  bool armed_ = false;
  double setpoint_ = 0.0;
  control::ErrorState error_;
  control::Displacement displacement_;
  Trace trace_;
};

}  // namespace

void Environment::validate() const {
  if (!std::isfinite(zSurface)) {
    throw ConfigError("z_surface must be finite");
  }
  if (!(stiffness > 0.0) || !std::isfinite(stiffness)) {
    throw ConfigError("ks (contact stiffness) must be positive");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError("dt must be positive");
  }
  if (!(contactThreshold > 0.0)) {
    throw ConfigError("contact_threshold must be positive");
  }
  if (!(settleBand > 0.0)) {
    throw ConfigError("settle_band must be positive");
  }
  if (settleHold == 0) {
    throw ConfigError("settle_hold must be at least 1");
  }
  if (maxSteps == 0) {
    throw ConfigError("max_steps must be at least 1");
  }
  if (!calibration.isFinite()) {
    throw ConfigError("calibration offsets must be finite");
  }
  if (obstacle) {
    if (!(obstacle->height > 0.0) || !std::isfinite(obstacle->height)) {
      throw ConfigError("obstacle_height must be positive");
    }
    if (!(obstacle->xMin < obstacle->xMax)) {
      throw ConfigError("obstacle_xmin must be below obstacle_xmax");
    }
  }
}

double Environment::band(double setpoint) const {
  return std::max(settleBand * std::fabs(setpoint), contactThreshold);
}

double penetration(const Environment &env, const scene::Pose &ee) {
  // Geometry is described in the model frame; bring the end-effector there.
  const scene::Pose local = env.calibration.invert(ee);
  double top = env.zSurface;
  if (env.obstacle && local.x >= env.obstacle->xMin && local.x <= env.obstacle->xMax) {
    top += env.obstacle->height;
  }
  return std::max(0.0, top - local.z);
}

control::Wrench contactForce(const Environment &env, const scene::Pose &ee) {
  control::Wrench wrench;
  const double p = penetration(env, ee);
  if (p > 0.0) {
    wrench.fz = -env.stiffness * p;
  }
  return wrench;
}

std::pair<WorldState, control::Wrench> stepWorld(WorldState world, const Environment &env, double du,
                                                 control::Axis axis) {
  translation(world.ee, axis) += du;
  ++world.k;
  world.t = static_cast<double>(world.k) * env.dt;
  return {world, contactForce(env, world.ee)};
}

Trace runClosedLoop(const program::RobotProgram &program, const control::ControllerConfig &config,
                    const Environment &env) {
  program::validate(program);
  config.validate();
  env.validate();
  if (config.axis != control::Axis::Fz) {
    throw ConfigError("the contact model only produces fz; axis '" + std::string(control::name(config.axis)) +
                      "' cannot be closed-loop controlled");
  }
  return Runner(program, config, env).run();
}

Metrics computeMetrics(const Trace &trace, double setpoint, double bandFraction) {
  if (setpoint == 0.0) {
    throw MetricError("metrics need a nonzero force setpoint");
  }
  std::vector<const TraceRecord *> phase;
  for (const auto &record : trace) {
    if (record.contact) {
      phase.push_back(&record);
    }
  }
  if (phase.empty()) {
    throw MetricError("trace has no contact phase");
  }

  const double target = std::fabs(setpoint);
  const double band = bandFraction * target;
  Metrics m;
  m.contactSteps = phase.size();
  for (const auto *record : phase) {
    m.peakForce = std::max(m.peakForce, std::fabs(record->fa));
  }
  m.overshootPct = std::max(0.0, (m.peakForce - target) / target) * 100.0;

  std::size_t firstInBand = phase.size();
  while (firstInBand > 0 && std::fabs(phase[firstInBand - 1]->e) < band) {
    --firstInBand;
  }
  if (firstInBand < phase.size()) {
    m.settlingSteps = firstInBand;
  }

  const auto tail = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.2 * phase.size())));
  double sum = 0.0;
  for (std::size_t i = phase.size() - tail; i < phase.size(); ++i) {
    sum += std::fabs(phase[i]->e);
  }
  m.steadyStateError = sum / static_cast<double>(tail);
  return m;
}

void writeTraceCsv(std::ostream &out, const Trace &trace) {
  using numfmt::significant;
  out << "k,t,f_d,f_a,e,de,du,u,ee_z,contact\n";
  for (const auto &r : trace) {
    out << r.k << ',' << significant(r.t, 9) << ',' << significant(r.fd, 9) << ',' << significant(r.fa, 9) << ','
        << significant(r.e, 9) << ',' << significant(r.de, 9) << ',' << significant(r.du, 9) << ','
        << significant(r.u, 9) << ',' << significant(r.eeZ, 9) << ',' << (r.contact ? 1 : 0) << '\n';
  }
}

}  // namespace forcectl::sim
