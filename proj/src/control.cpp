#include "forcectl/control.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "forcectl/errors.hpp"

namespace forcectl::control {

namespace {

constexpr std::array<std::string_view, 6> kAxisNames{"fx", "fy", "fz", "tx", "ty", "tz"};

}  // namespace

std::string_view name(Axis axis) { return kAxisNames[static_cast<std::size_t>(axis)]; }

Axis parseAxis(std::string_view text) {
  for (std::size_t i = 0; i < kAxisNames.size(); ++i) {
    if (kAxisNames[i] == text) {
      return static_cast<Axis>(i);
    }
  }
  throw ConfigError("unknown wrench axis '" + std::string(text) + "' (expected fx, fy, fz, tx, ty or tz)");
}

double Wrench::operator[](Axis axis) const {
  switch (axis) {
    case Axis::Fx: return fx;
    case Axis::Fy: return fy;
    case Axis::Fz: return fz;
    case Axis::Tx: return tx;
    case Axis::Ty: return ty;
    case Axis::Tz: return tz;
  }
  return 0.0;
}

double &Wrench::operator[](Axis axis) {
  switch (axis) {
    case Axis::Fx: return fx;
    case Axis::Fy: return fy;
    case Axis::Fz: return fz;
    case Axis::Tx: return tx;
    case Axis::Ty: return ty;
    case Axis::Tz: break;
  }
  return tz;
}

bool Wrench::isFinite() const {
  return std::isfinite(fx) && std::isfinite(fy) && std::isfinite(fz) && std::isfinite(tx) && std::isfinite(ty) &&
         std::isfinite(tz);
}

double computeError(const Wrench &desired, const Wrench &actual, Axis axis) { return desired[axis] - actual[axis]; }

ErrorState updateError(ErrorState state, double e) {
  const double previous = state.primed ? state.e : e;
  return {e, previous, e - previous, true};
}

void ControllerGains::validate() const {
  if (!std::isfinite(kp) || !std::isfinite(ki) || !std::isfinite(kx)) {
    throw ConfigError("gains must be finite");
  }
  if (!(kx > 0.0)) {
    throw ConfigError("kx must be positive");
  }
  if (kp < 0.0 || ki < 0.0) {
    throw ConfigError("kp and ki must be non-negative");
  }
  if (kp == 0.0 && ki == 0.0) {
    throw ConfigError("kp and ki cannot both be zero");
  }
}

Displacement accumulate(Displacement d, double du) { return {du, d.u + du}; }

std::string_view name(ControllerKind kind) { return kind == ControllerKind::Pi ? "pi" : "fuzzy_pi"; }

ControllerKind parseControllerKind(std::string_view text) {
  if (text == "pi") {
    return ControllerKind::Pi;
  }
  if (text == "fuzzy_pi") {
    return ControllerKind::FuzzyPi;
  }
  throw ConfigError("unknown controller '" + std::string(text) + "' (expected pi or fuzzy_pi)");
}

void ControllerConfig::validate() const {
  gains.validate();
  if (!(duMax > 0.0)) {
    throw ConfigError("du_max must be positive");
  }
}

double piStep(const ControllerGains &gains, double duMax, double e, double de) {
  const double du = gains.kx * (gains.kp * de + gains.ki * e);
  return std::clamp(du, -duMax, duMax);
}

double fuzzyPiStep(const ControllerConfig &config, const fuzzy::RuleBase &rules, double e, double de) {
  const double eNorm = std::clamp(config.gains.ki * e, fuzzy::kUniverseMin, fuzzy::kUniverseMax);
  const double deNorm = std::clamp(config.gains.kp * de, fuzzy::kUniverseMin, fuzzy::kUniverseMax);
  const double out = fuzzy::infer(eNorm, deNorm, rules, config.partition, config.partition);
  return std::clamp(config.gains.kx * out, -config.duMax, config.duMax);
}

double fuzzyPiStep(const ControllerConfig &config, double e, double de) {
  return fuzzyPiStep(config, fuzzy::RuleBase::of(config.rules), e, de);
}

double positionalPiOracle(const ControllerGains &gains, std::span<const double> errorHistory, double dt) {
  if (errorHistory.empty()) {
    throw ConfigError("positional PI oracle needs a nonempty error history");
  }
  if (!(dt > 0.0)) {
    throw ConfigError("positional PI oracle needs dt > 0");
  }
  double integral = 0.0;
  for (const double e : errorHistory) {
    integral += e * dt;
  }
  const double continuousKi = gains.ki / dt;
  return gains.kx * (gains.kp * errorHistory.back() + continuousKi * integral);
}

ForceController::ForceController(ControllerConfig config)
    : config_(std::move(config)), rules_(fuzzy::RuleBase::of(config_.rules)) {
  config_.validate();
}

double ForceController::command(double e, double de) const {
  return config_.kind == ControllerKind::Pi ? piStep(config_.gains, config_.duMax, e, de)
                                            : fuzzyPiStep(config_, rules_, e, de);
}

double ForceController::step(double e) {
  error_ = updateError(error_, e);
  const double du = command(error_.e, error_.de);
  displacement_ = accumulate(displacement_, du);
  return du;
}

}  // namespace forcectl::control
