#include "forcectl/scene.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "forcectl/errors.hpp"
#include "forcectl/numfmt.hpp"
#include "lexer.hpp"

namespace forcectl::scene {

namespace {

/// sin/cos of an angle in degrees, exact at multiples of 90.
void sinCosDegrees(double degrees, double &sine, double &cosine) {
  const double wrapped = normalizeAngle(degrees);
  if (wrapped == 0.0) {
    sine = 0.0, cosine = 1.0;
  } else if (wrapped == 90.0) {
    sine = 1.0, cosine = 0.0;
  } else if (wrapped == 180.0) {
    sine = 0.0, cosine = -1.0;
  } else if (wrapped == -90.0) {
    sine = -1.0, cosine = 0.0;
  } else {
    const double radians = wrapped * std::numbers::pi / 180.0;
    sine = std::sin(radians);
    cosine = std::cos(radians);
  }
}

bool isIdentifier(std::string_view text) {
  if (text.empty() || !(std::isalpha(static_cast<unsigned char>(text[0])) || text[0] == '_')) {
    return false;
  }
  for (const char c : text) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
      return false;
    }
  }
  return true;
}

TagSet parseTags(const detail::Line &line, const detail::Token &token) {
  TagSet tags;
  std::size_t start = 0;
  const std::string_view text = token.text;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    const std::string_view tag = text.substr(start, end - start);
    const std::size_t column = token.column + start;
    bool *slot = nullptr;
    if (tag == "pick") {
      slot = &tags.pick;
    } else if (tag == "place") {
      slot = &tags.place;
    } else if (tag == "obstacle") {
      slot = &tags.obstacle;
    } else {
      throw ParseError(line.number, column,
                       "unknown tag '" + std::string(tag) + "' (expected pick, place or obstacle)");
    }
    if (*slot) {
      throw ParseError(line.number, column, "tag '" + std::string(tag) + "' repeated");
    }
    *slot = true;
    start = end + 1;
  }
  if (tags.pick && tags.place) {
    throw ParseError(line.number, token.column, "an object cannot be both pick and place");
  }
  return tags;
}

SceneObject parseObject(const detail::Line &line) {
  if (line.tokens.size() < 2) {
    throw ParseError(line.number, detail::endColumn(line), "expected an object name");
  }
  const auto &nameToken = line.tokens[1];
  if (!isIdentifier(nameToken.text)) {
    throw ParseError(line.number, nameToken.column, "invalid object name '" + std::string(nameToken.text) + "'");
  }
  SceneObject object{std::string(nameToken.text), {}, {}};
  bool havePos = false;
  bool haveRpy = false;
  bool haveTags = false;
  std::size_t i = 2;
  while (i < line.tokens.size()) {
    const auto &keyword = line.tokens[i];
    if (keyword.text == "pos") {
      if (havePos) {
        throw ParseError(line.number, keyword.column, "'pos' given twice");
      }
      object.pose.x = detail::number(line, i + 1, "pos x");
      object.pose.y = detail::number(line, i + 2, "pos y");
      object.pose.z = detail::number(line, i + 3, "pos z");
      havePos = true;
      i += 4;
    } else if (keyword.text == "rpy") {
      if (haveRpy) {
        throw ParseError(line.number, keyword.column, "'rpy' given twice");
      }
      object.pose.roll = detail::number(line, i + 1, "roll");
      object.pose.pitch = detail::number(line, i + 2, "pitch");
      object.pose.yaw = detail::number(line, i + 3, "yaw");
      haveRpy = true;
      i += 4;
    } else if (keyword.text == "tags") {
      if (haveTags) {
        throw ParseError(line.number, keyword.column, "'tags' given twice");
      }
      if (i + 1 >= line.tokens.size()) {
        throw ParseError(line.number, detail::endColumn(line), "expected a tag list after 'tags'");
      }
      object.tags = parseTags(line, line.tokens[i + 1]);
      haveTags = true;
      i += 2;
    } else {
      throw ParseError(line.number, keyword.column,
                       "unexpected '" + std::string(keyword.text) + "' (expected pos, rpy or tags)");
    }
  }
  if (!havePos) {
    throw ParseError(line.number, detail::endColumn(line), "object '" + object.name + "' is missing 'pos'");
  }
  if (!haveTags) {
    throw ParseError(line.number, detail::endColumn(line), "object '" + object.name + "' is missing 'tags'");
  }
  object.pose = object.pose.normalized();
  return object;
}

}  // namespace

double normalizeAngle(double degrees) {
  double wrapped = std::fmod(degrees, 360.0);
  if (wrapped <= -180.0) {
    wrapped += 360.0;
  } else if (wrapped > 180.0) {
    wrapped -= 360.0;
  }
  return wrapped;
}

Pose Pose::normalized() const {
  return {x, y, z, normalizeAngle(roll), normalizeAngle(pitch), normalizeAngle(yaw)};
}

bool Pose::isFinite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(z) && std::isfinite(roll) && std::isfinite(pitch) &&
         std::isfinite(yaw);
}

bool CalibrationTransform::isFinite() const {
  return std::isfinite(dx) && std::isfinite(dy) && std::isfinite(dz) && std::isfinite(dyaw);
}

Pose CalibrationTransform::apply(const Pose &pose) const {
  if (isIdentity()) {
    return pose;
  }
  double s = 0.0;
  double c = 1.0;
  sinCosDegrees(dyaw, s, c);
  Pose out = pose;
  out.x = c * pose.x - s * pose.y + dx;
  out.y = s * pose.x + c * pose.y + dy;
  out.z = pose.z + dz;
  out.yaw = normalizeAngle(pose.yaw + dyaw);
  return out;
}

Pose CalibrationTransform::invert(const Pose &pose) const {
  if (isIdentity()) {
    return pose;
  }
  double s = 0.0;
  double c = 1.0;
  sinCosDegrees(dyaw, s, c);
  const double x = pose.x - dx;
  const double y = pose.y - dy;
  Pose out = pose;
  out.x = c * x + s * y;
  out.y = -s * x + c * y;
  out.z = pose.z - dz;
  out.yaw = normalizeAngle(pose.yaw - dyaw);
  return out;
}

Scene parseScene(std::string_view text) {
  Scene scene;
  bool haveClearance = false;
  bool haveSpeed = false;
  std::set<std::string, std::less<>> names;

  for (const auto &line : detail::tokenize(text)) {
    const auto &head = line.tokens.front();
    auto header = [&](bool &seen) -> double {
      if (seen) {
        throw ParseError(line.number, head.column, "'" + std::string(head.text) + "' given twice");
      }
      if (line.tokens.size() > 2) {
        throw ParseError(line.number, line.tokens[2].column, "unexpected trailing token");
      }
      seen = true;
      return detail::number(line, 1, std::string(head.text));
    };

    if (head.text == "object") {
      SceneObject object = parseObject(line);
      if (!names.insert(object.name).second) {
        throw ParseError(line.number, line.tokens[1].column, "duplicate object name '" + object.name + "'");
      }
      scene.objects.push_back(std::move(object));
    } else if (head.text == "clearance") {
      scene.clearance = header(haveClearance);
      if (!(scene.clearance > 0.0)) {
        throw ParseError(line.number, line.tokens[1].column, "clearance must be positive");
      }
    } else if (head.text == "speed") {
      scene.speed = header(haveSpeed);
      if (!(scene.speed > 0.0)) {
        throw ParseError(line.number, line.tokens[1].column, "speed must be positive");
      }
    } else if (head.text == "setpoint") {
      bool seen = scene.setpoint.has_value();
      scene.setpoint = header(seen);
    } else {
      throw ParseError(line.number, head.column,
                       "unknown statement '" + std::string(head.text) +
                           "' (expected object, clearance, speed or setpoint)");
    }
  }
  if (!haveClearance) {
    throw ParseError(1, 1, "missing required header 'clearance'");
  }
  if (!haveSpeed) {
    throw ParseError(1, 1, "missing required header 'speed'");
  }
  return scene;
}

std::string emitScene(const Scene &scene) {
  using numfmt::shortest;
  std::ostringstream out;
  out << "clearance " << shortest(scene.clearance) << '\n';
  out << "speed " << shortest(scene.speed) << '\n';
  if (scene.setpoint) {
    out << "setpoint " << shortest(*scene.setpoint) << '\n';
  }
  for (const auto &object : scene.objects) {
    const Pose &p = object.pose;
    out << "object " << object.name << " pos " << shortest(p.x) << ' ' << shortest(p.y) << ' ' << shortest(p.z)
        << " rpy " << shortest(p.roll) << ' ' << shortest(p.pitch) << ' ' << shortest(p.yaw) << " tags ";
    std::string tags;
    for (const auto &[flag, label] : {std::pair{object.tags.pick, "pick"}, std::pair{object.tags.place, "place"},
                                      std::pair{object.tags.obstacle, "obstacle"}}) {
      if (flag) {
        tags += tags.empty() ? "" : ",";
        tags += label;
      }
    }
    out << tags << '\n';
  }
  return out.str();
}

Scene applyCalibration(Scene scene, const CalibrationTransform &transform) {
  for (auto &object : scene.objects) {
    object.pose = transform.apply(object.pose);
  }
  return scene;
}

}  // namespace forcectl::scene
