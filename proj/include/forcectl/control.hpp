#pragma once

/**
 * Per-axis force controllers producing end-effector displacement increments
 * (mm) from wrench error: a conventional incremental PI law and a fuzzy-PI
 * law that routes the same (error, change of error) pair through the fuzzy
 * core. Both share the scaling factors kp, ki, kx and a per-step saturation.
 */

#include <span>
#include <string_view>

#include "forcectl/fuzzy.hpp"

namespace forcectl::control {

enum class Axis { Fx, Fy, Fz, Tx, Ty, Tz };

std::string_view name(Axis axis);
/// "fx".."tz". Throws ConfigError otherwise.
Axis parseAxis(std::string_view text);

/// 6-axis force (N) / torque (N m) sample.
struct Wrench {
  double fx = 0.0;
  double fy = 0.0;
  double fz = 0.0;
  double tx = 0.0;
  double ty = 0.0;
  double tz = 0.0;

  [[nodiscard]] double operator[](Axis axis) const;
  double &operator[](Axis axis);
  [[nodiscard]] bool isFinite() const;

  friend bool operator==(const Wrench &, const Wrench &) = default;
};

/// e = f_d[axis] - f_a[axis].
double computeError(const Wrench &desired, const Wrench &actual, Axis axis);

struct ErrorState {
  double e = 0.0;
  double ePrev = 0.0;
  double de = 0.0;
  /// False until the first sample; that sample seeds ePrev so the first de is 0.
  bool primed = false;

  /// A state whose previous error is already `previous`, so the first update yields de = e - previous.
  static ErrorState seeded(double previous) { return {previous, previous, 0.0, true}; }
};

ErrorState updateError(ErrorState state, double e);

struct ControllerGains {
  /// Scales the change of error (1/N).
  double kp = 0.0;
  /// Scales the error (1/N).
  double ki = 0.0;
  /// Output scale (mm).
  double kx = 1.0;

  /// Throws ConfigError unless kx > 0, kp >= 0, ki >= 0 and not both kp and ki are 0.
  void validate() const;
};

/// Running controller output: u_k = u_{k-1} + du_k.
struct Displacement {
  double du = 0.0;
  double u = 0.0;
};

Displacement accumulate(Displacement d, double du);

enum class ControllerKind { Pi, FuzzyPi };

std::string_view name(ControllerKind kind);
/// "pi" or "fuzzy_pi". Throws ConfigError otherwise.
ControllerKind parseControllerKind(std::string_view text);

struct ControllerConfig {
  ControllerKind kind = ControllerKind::FuzzyPi;
  ControllerGains gains;
  fuzzy::LinguisticPartition partition = fuzzy::LinguisticPartition::defaults();
  fuzzy::RuleVariant rules = fuzzy::RuleVariant::Canonical;
  /// Per-step saturation (mm).
  double duMax = 2.0;
  Axis axis = Axis::Fz;

  void validate() const;
};

/// clamp(kx * (kp * de + ki * e), -duMax, duMax).
double piStep(const ControllerGains &gains, double duMax, double e, double de);

/// kx * COA(rules(fuzzify(clamp(ki * e)), fuzzify(clamp(kp * de)))), clamped to +-duMax.
/// The output partition reuses the input layout.
double fuzzyPiStep(const ControllerConfig &config, double e, double de);

/// Same as fuzzyPiStep with a pre-built rule base (avoids rebuilding the table each step).
double fuzzyPiStep(const ControllerConfig &config, const fuzzy::RuleBase &rules, double e, double de);

/**
 * Positional PI evaluated directly from an error history, kept as an
 * independent check on the incremental form:
 *
 *   u_n = kx * (kp * e_n + (ki / dt) * sum_j e_j * dt)
 *
 * `ki` is the per-sample integral gain used by piStep, so the continuous
 * integral gain is ki / dt and the rectangle-rule integral is sum_j e_j * dt.
 * The two dt factors cancel analytically but are kept so the oracle follows
 * the continuous-time law term by term. Throws ConfigError on an empty history
 * or non-positive dt.
 */
double positionalPiOracle(const ControllerGains &gains, std::span<const double> errorHistory, double dt);

/// Stateful single-axis controller: error bookkeeping, the selected law and the running displacement.
class ForceController {
 public:
  explicit ForceController(ControllerConfig config);

  /// Feeds one error sample; returns the saturated increment du (mm).
  double step(double e);

  /// The configured law applied to an explicit (e, de) pair. Does not touch internal state.
  [[nodiscard]] double command(double e, double de) const;

  [[nodiscard]] const ErrorState &error() const { return error_; }
  [[nodiscard]] const Displacement &displacement() const { return displacement_; }
  [[nodiscard]] const ControllerConfig &config() const { return config_; }

 private:
  ControllerConfig config_;
  fuzzy::RuleBase rules_;
  ErrorState error_;
  Displacement displacement_;
};

}  // namespace forcectl::control
