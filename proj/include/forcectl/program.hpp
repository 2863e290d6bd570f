#pragma once

/**
 * Textual robot motion programs and the pick/place compiler that produces
 * them from a scene.
 *
 * Grammar, one instruction per line:
 *
 *   MOVEL <x> <y> <z> <roll> <pitch> <yaw> <speed>   positions mm (6 decimals), angles deg, speed mm/s
 *   GRIP ON | GRIP OFF
 *   SETFORCE <axis> <value>                          axis fx..tz, value N or N m
 */

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "forcectl/control.hpp"
#include "forcectl/scene.hpp"

namespace forcectl::program {

struct MoveL {
  scene::Pose pose;
  double speed = 0.0;
  friend bool operator==(const MoveL &, const MoveL &) = default;
};

struct Grip {
  bool on = false;
  friend bool operator==(const Grip &, const Grip &) = default;
};

/// Arms closed-loop force control on `axis` with `setpoint` for the following MOVEL segments.
struct SetForce {
  control::Axis axis = control::Axis::Fz;
  double setpoint = 0.0;
  friend bool operator==(const SetForce &, const SetForce &) = default;
};

using Instruction = std::variant<MoveL, Grip, SetForce>;

struct RobotProgram {
  std::vector<Instruction> instructions;
  friend bool operator==(const RobotProgram &, const RobotProgram &) = default;
};

/// Throws CompileError if the program is empty, does not start with MOVEL,
/// or leaves a GRIP ON without a later GRIP OFF.
void validate(const RobotProgram &program);

struct CompileOptions {
  control::Axis forceAxis = control::Axis::Fz;
  /// Used when the scene carries no `setpoint` header.
  double defaultSetpoint = -10.0;
};

/**
 * Pairs pick and place objects in file order and emits, per pair:
 *
 *   MOVEL above pick, MOVEL pick, GRIP ON, MOVEL above pick,
 *   MOVEL above place, SETFORCE, MOVEL place, GRIP OFF, MOVEL above place
 *
 * "Above" means +clearance on z. Throws CompileError when the scene has no
 * pick, no place, or unequal numbers of each.
 */
RobotProgram compile(const scene::Scene &scene, const CompileOptions &options = {});

std::string emitInstruction(const Instruction &instruction);
std::string emitProgram(const RobotProgram &program);

/// Grammar check only; call validate() for the structural invariants.
RobotProgram parseProgram(std::string_view text);

}  // namespace forcectl::program
