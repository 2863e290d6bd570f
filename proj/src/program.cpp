#include "forcectl/program.hpp"

#include <sstream>

#include "forcectl/errors.hpp"
#include "forcectl/numfmt.hpp"
#include "lexer.hpp"

namespace forcectl::program {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void expectArity(const detail::Line &line, std::size_t count) {
  if (line.tokens.size() < count) {
    throw ParseError(line.number, detail::endColumn(line),
                     std::string(line.tokens.front().text) + " expects " + std::to_string(count - 1) + " operands");
  }
  if (line.tokens.size() > count) {
    throw ParseError(line.number, line.tokens[count].column, "unexpected trailing token");
  }
}

}  // namespace

void validate(const RobotProgram &program) {
  if (program.instructions.empty()) {
    throw CompileError("program is empty");
  }
  if (!std::holds_alternative<MoveL>(program.instructions.front())) {
    throw CompileError("program must start with MOVEL");
  }
  bool holding = false;
  for (const auto &instruction : program.instructions) {
    if (const auto *grip = std::get_if<Grip>(&instruction)) {
      holding = grip->on;
    }
  }
  if (holding) {
    throw CompileError("GRIP ON is never followed by GRIP OFF");
  }
}

RobotProgram compile(const scene::Scene &scene, const CompileOptions &options) {
  std::vector<const scene::SceneObject *> picks;
  std::vector<const scene::SceneObject *> places;
  for (const auto &object : scene.objects) {
    if (object.tags.pick) {
      picks.push_back(&object);
    }
    if (object.tags.place) {
      places.push_back(&object);
    }
  }
  if (picks.empty()) {
    throw CompileError("scene has no object tagged 'pick'");
  }
  if (places.empty()) {
    throw CompileError("scene has no object tagged 'place'");
  }
  if (picks.size() != places.size()) {
    throw CompileError("scene has " + std::to_string(picks.size()) + " pick objects but " +
                       std::to_string(places.size()) + " place objects; they are paired in file order");
  }
  if (!(scene.clearance > 0.0) || !(scene.speed > 0.0)) {
    throw CompileError("clearance and speed must be positive");
  }

  const double setpoint = scene.setpoint.value_or(options.defaultSetpoint);
  auto above = [&](scene::Pose pose) {
    pose.z += scene.clearance;
    return pose;
  };

  RobotProgram program;
  auto &out = program.instructions;
  for (std::size_t i = 0; i < picks.size(); ++i) {
    const scene::Pose &pick = picks[i]->pose;
    const scene::Pose &place = places[i]->pose;
    out.emplace_back(MoveL{above(pick), scene.speed});
    out.emplace_back(MoveL{pick, scene.speed});
    out.emplace_back(Grip{true});
    out.emplace_back(MoveL{above(pick), scene.speed});
    out.emplace_back(MoveL{above(place), scene.speed});
    out.emplace_back(SetForce{options.forceAxis, setpoint});
    out.emplace_back(MoveL{place, scene.speed});
    out.emplace_back(Grip{false});
    out.emplace_back(MoveL{above(place), scene.speed});
  }
  return program;
}

std::string emitInstruction(const Instruction &instruction) {
  return std::visit(
      Overloaded{
          [](const MoveL &move) {
            const auto &p = move.pose;
            return "MOVEL " + numfmt::fixed(p.x, 6) + ' ' + numfmt::fixed(p.y, 6) + ' ' + numfmt::fixed(p.z, 6) +
                   ' ' + numfmt::shortestDecimal(p.roll) + ' ' + numfmt::shortestDecimal(p.pitch) + ' ' +
                   numfmt::shortestDecimal(p.yaw) + ' ' + numfmt::shortest(move.speed);
          },
          [](const Grip &grip) { return std::string(grip.on ? "GRIP ON" : "GRIP OFF"); },
          [](const SetForce &force) {
            return "SETFORCE " + std::string(control::name(force.axis)) + ' ' + numfmt::shortest(force.setpoint);
          },
      },
      instruction);
}

std::string emitProgram(const RobotProgram &program) {
  std::string text;
  for (const auto &instruction : program.instructions) {
    text += emitInstruction(instruction);
    text += '\n';
  }
  return text;
}

RobotProgram parseProgram(std::string_view text) {
  RobotProgram program;
  for (const auto &line : detail::tokenize(text)) {
    const auto &op = line.tokens.front();
    if (op.text == "MOVEL") {
      expectArity(line, 8);
      MoveL move;
      move.pose.x = detail::number(line, 1, "x");
      move.pose.y = detail::number(line, 2, "y");
      move.pose.z = detail::number(line, 3, "z");
      move.pose.roll = scene::normalizeAngle(detail::number(line, 4, "roll"));
      move.pose.pitch = scene::normalizeAngle(detail::number(line, 5, "pitch"));
      move.pose.yaw = scene::normalizeAngle(detail::number(line, 6, "yaw"));
      move.speed = detail::number(line, 7, "speed");
      if (!(move.speed > 0.0)) {
        throw ParseError(line.number, line.tokens[7].column, "MOVEL speed must be positive");
      }
      program.instructions.emplace_back(move);
    } else if (op.text == "GRIP") {
      expectArity(line, 2);
      const auto &state = line.tokens[1];
      if (state.text != "ON" && state.text != "OFF") {
        throw ParseError(line.number, state.column, "GRIP expects ON or OFF");
      }
      program.instructions.emplace_back(Grip{state.text == "ON"});
    } else if (op.text == "SETFORCE") {
      expectArity(line, 3);
      SetForce force;
      try {
        force.axis = control::parseAxis(line.tokens[1].text);
      } catch (const ConfigError &error) {
        throw ParseError(line.number, line.tokens[1].column, error.what());
      }
      force.setpoint = detail::number(line, 2, "force setpoint");
      program.instructions.emplace_back(force);
    } else {
      throw ParseError(line.number, op.column,
                       "unknown instruction '" + std::string(op.text) + "' (expected MOVEL, GRIP or SETFORCE)");
    }
  }
  return program;
}

}  // namespace forcectl::program
