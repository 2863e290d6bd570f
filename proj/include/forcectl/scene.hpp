#pragma once

/**
 * Neutral scene description standing in for the CAD assembly model.
 *
 * Line-oriented text, '#' starts a comment, tokens are whitespace-delimited:
 *
 *   clearance 100                 # approach height above pick/place poses (mm), required, > 0
 *   speed 50                      # Cartesian speed (mm/s), required, > 0
 *   setpoint -10                  # optional placement force (N)
 *   object cup pos 0 0 0 rpy 0 0 0 tags pick
 *   object slot pos 300 0 0 tags place
 *
 * Object clauses may appear in any order after the name. `pos` and `tags`
 * are required, `rpy` defaults to 0 0 0. Angles are degrees, fixed-axis ZYX.
 */

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace forcectl::scene {

/// Wraps an angle in degrees to (-180, 180].
double normalizeAngle(double degrees);

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;

  /// Angles wrapped to (-180, 180].
  [[nodiscard]] Pose normalized() const;
  [[nodiscard]] bool isFinite() const;

  friend bool operator==(const Pose &, const Pose &) = default;
};

struct TagSet {
  bool pick = false;
  bool place = false;
  bool obstacle = false;

  [[nodiscard]] bool empty() const { return !pick && !place && !obstacle; }
  friend bool operator==(const TagSet &, const TagSet &) = default;
};

struct SceneObject {
  std::string name;
  Pose pose;
  TagSet tags;

  friend bool operator==(const SceneObject &, const SceneObject &) = default;
};

struct Scene {
  std::vector<SceneObject> objects;
  double clearance = 100.0;
  double speed = 50.0;
  std::optional<double> setpoint;

  friend bool operator==(const Scene &, const Scene &) = default;
};

/// Rigid offset between the modelled and the real cell.
struct CalibrationTransform {
  double dx = 0.0;
  double dy = 0.0;
  double dz = 0.0;
  /// Rotation about the world z axis through the origin (degrees), applied before the translation.
  double dyaw = 0.0;

  [[nodiscard]] bool isIdentity() const { return dx == 0.0 && dy == 0.0 && dz == 0.0 && dyaw == 0.0; }
  [[nodiscard]] bool isFinite() const;

  /// Model frame -> real frame.
  [[nodiscard]] Pose apply(const Pose &pose) const;
  /// Real frame -> model frame.
  [[nodiscard]] Pose invert(const Pose &pose) const;
};

/// Throws ParseError (with line/column) on syntax errors, duplicate names,
/// missing required fields, non-finite numbers and tag conflicts.
Scene parseScene(std::string_view text);

/// Canonical text form; parseScene(emitScene(s)) == s.
std::string emitScene(const Scene &scene);

Scene applyCalibration(Scene scene, const CalibrationTransform &transform);

}  // namespace forcectl::scene
