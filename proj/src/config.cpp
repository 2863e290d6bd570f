#include "forcectl/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "forcectl/errors.hpp"
#include "lexer.hpp"

namespace forcectl::config {

namespace {

// Trial-and-error tuning against the 10 N/mm foreign-object placement scenario.
constexpr double kFuzzyKp = 0.02;
constexpr double kFuzzyKi = 0.05;
constexpr double kFuzzyKx = 1.0;
// Deliberately aggressive integral action, reproducing the overshoot of a plain PI loop.
constexpr double kPiKp = 0.02;
constexpr double kPiKi = 0.15;
constexpr double kPiKx = 1.0;

enum class Section { Experiment, Controller, Pi, FuzzyPi, Environment };

Section parseSection(const detail::Line &line) {
  const auto &token = line.tokens.front();
  if (line.tokens.size() > 1) {
    throw ParseError(line.number, line.tokens[1].column, "unexpected token after section header");
  }
  const std::string_view text = token.text;
  if (text.size() < 3 || text.back() != ']') {
    throw ParseError(line.number, token.column, "malformed section header");
  }
  const std::string_view name = text.substr(1, text.size() - 2);
  if (name == "experiment") return Section::Experiment;
  if (name == "controller") return Section::Controller;
  if (name == "pi") return Section::Pi;
  if (name == "fuzzy_pi") return Section::FuzzyPi;
  if (name == "environment") return Section::Environment;
  throw ParseError(line.number, token.column + 1,
                   "unknown section '" + std::string(name) +
                       "' (expected experiment, controller, pi, fuzzy_pi or environment)");
}

struct GainOverrides {
  std::optional<double> kp;
  std::optional<double> ki;
  std::optional<double> kx;

  void applyTo(control::ControllerGains &gains) const {
    gains.kp = kp.value_or(gains.kp);
    gains.ki = ki.value_or(gains.ki);
    gains.kx = kx.value_or(gains.kx);
  }
};

class Reader {
 public:
  explicit Reader(const detail::Line &line) : line_(line) {}

  [[nodiscard]] std::string_view key() const { return line_.tokens.front().text; }

  [[nodiscard]] double number() const {
    arity(2);
    return detail::number(line_, 1, std::string(key()));
  }

  [[nodiscard]] std::size_t count() const {
    const double value = number();
    if (value < 0.0 || value != std::floor(value) || value > 1e12) {
      throw ParseError(line_.number, line_.tokens[1].column, std::string(key()) + " must be a non-negative integer");
    }
    return static_cast<std::size_t>(value);
  }

  [[nodiscard]] std::string_view word() const {
    arity(2);
    return line_.tokens[1].text;
  }

  /// Wraps enum parsers that throw ConfigError so the diagnostic gets a position.
  template <class Fn>
  auto parsed(Fn &&fn) const {
    const auto value = word();
    try {
      return fn(value);
    } catch (const ConfigError &error) {
      throw ParseError(line_.number, line_.tokens[1].column, error.what());
    }
  }

  [[nodiscard]] std::vector<double> numbers() const {
    std::vector<double> values;
    for (std::size_t i = 1; i < line_.tokens.size(); ++i) {
      values.push_back(detail::number(line_, i, std::string(key())));
    }
    if (values.empty()) {
      throw ParseError(line_.number, detail::endColumn(line_), "expected values for " + std::string(key()));
    }
    return values;
  }

  [[noreturn]] void unknown(std::string_view section) const {
    throw ParseError(line_.number, line_.tokens.front().column,
                     "unknown key '" + std::string(key()) + "' in [" + std::string(section) + "]");
  }

  [[noreturn]] void fail(const std::string &message) const {
    throw ParseError(line_.number, line_.tokens.front().column, message);
  }

 private:
  void arity(std::size_t expected) const {
    if (line_.tokens.size() < expected) {
      throw ParseError(line_.number, detail::endColumn(line_), "expected a value for " + std::string(key()));
    }
    if (line_.tokens.size() > expected) {
      throw ParseError(line_.number, line_.tokens[expected].column, "unexpected trailing token");
    }
  }

  const detail::Line &line_;
};

bool gainKey(const Reader &reader, GainOverrides &gains) {
  if (reader.key() == "kp") {
    gains.kp = reader.number();
  } else if (reader.key() == "ki") {
    gains.ki = reader.number();
  } else if (reader.key() == "kx") {
    gains.kx = reader.number();
  } else {
    return false;
  }
  return true;
}

std::filesystem::path resolve(const std::filesystem::path &baseDir, std::string_view text) {
  std::filesystem::path path{std::string(text)};
  if (path.is_relative() && !baseDir.empty()) {
    return baseDir / path;
  }
  return path;
}

}  // namespace

control::ControllerGains defaultGains(control::ControllerKind kind) {
  if (kind == control::ControllerKind::Pi) {
    return {kPiKp, kPiKi, kPiKx};
  }
  return {kFuzzyKp, kFuzzyKi, kFuzzyKx};
}

void ExperimentConfig::validate() const {
  pi.validate();
  fuzzyPi.validate();
  environment.validate();
  if (forceSetpoint && !std::isfinite(*forceSetpoint)) {
    throw ConfigError("f_setpoint must be finite");
  }
}

ExperimentConfig parseExperimentConfig(std::string_view text, const std::filesystem::path &baseDir,
                                       std::string defaultName) {
  ExperimentConfig config;
  config.name = std::move(defaultName);
  config.traceDir = baseDir.empty() ? std::filesystem::path(".") : baseDir;
  config.pi.kind = control::ControllerKind::Pi;
  config.pi.gains = defaultGains(control::ControllerKind::Pi);
  config.fuzzyPi.kind = control::ControllerKind::FuzzyPi;
  config.fuzzyPi.gains = defaultGains(control::ControllerKind::FuzzyPi);

  // Settings shared by both controllers, collected first and applied at the end.
  GainOverrides selectedGains;
  GainOverrides piGains;
  GainOverrides fuzzyGains;
  std::optional<fuzzy::RuleVariant> rules;
  std::optional<control::Axis> axis;
  std::optional<double> duMax;
  std::optional<std::vector<double>> centers;
  std::optional<std::vector<double>> halfWidths;
  std::size_t partitionLine = 0;
  double obstacleHeight = 0.0;
  std::optional<double> obstacleXMin;
  std::optional<double> obstacleXMax;
  bool haveScene = false;

  Section section = Section::Experiment;
  std::set<std::pair<int, std::string>> seen;

  for (const auto &line : detail::tokenize(text)) {
    if (line.tokens.front().text.starts_with('[')) {
      section = parseSection(line);
      continue;
    }
    const Reader r(line);
    if (!seen.emplace(static_cast<int>(section), std::string(r.key())).second) {
      r.fail("'" + std::string(r.key()) + "' given twice in the same section");
    }
    const std::string_view key = r.key();
    switch (section) {
      case Section::Experiment:
        if (key == "name") {
          config.name = std::string(r.word());
        } else if (key == "scene") {
          config.scenePath = resolve(baseDir, r.word());
          haveScene = true;
        } else if (key == "trace_dir") {
          config.traceDir = resolve(baseDir, r.word());
        } else {
          r.unknown("experiment");
        }
        break;
      case Section::Controller:
        if (gainKey(r, selectedGains)) {
        } else if (key == "controller") {
          config.selected = r.parsed(control::parseControllerKind);
        } else if (key == "rulebase") {
          rules = r.parsed(fuzzy::parseRuleVariant);
        } else if (key == "axis") {
          axis = r.parsed(control::parseAxis);
        } else if (key == "du_max") {
          duMax = r.number();
        } else if (key == "partition") {
          if (r.word() != "default") {
            r.fail("partition accepts only 'default'; give custom layouts with centers/half_widths");
          }
        } else if (key == "centers") {
          centers = r.numbers();
          if (centers->size() != fuzzy::kLabelCount) {
            r.fail("centers needs exactly 7 values");
          }
          partitionLine = line.number;
        } else if (key == "half_widths") {
          halfWidths = r.numbers();
          if (halfWidths->size() == 1) {
            const double width = halfWidths->front();
            halfWidths->assign(fuzzy::kLabelCount, width);
          }
          if (halfWidths->size() != fuzzy::kLabelCount) {
            r.fail("half_widths needs 1 or 7 values");
          }
          partitionLine = line.number;
        } else {
          r.unknown("controller");
        }
        break;
      case Section::Pi:
        if (!gainKey(r, piGains)) {
          r.unknown("pi");
        }
        break;
      case Section::FuzzyPi:
        if (!gainKey(r, fuzzyGains)) {
          r.unknown("fuzzy_pi");
        }
        break;
      case Section::Environment: {
        auto &env = config.environment;
        if (key == "ks") {
          env.stiffness = r.number();
        } else if (key == "dt") {
          env.dt = r.number();
        } else if (key == "z_surface") {
          env.zSurface = r.number();
        } else if (key == "obstacle_height") {
          obstacleHeight = r.number();
        } else if (key == "obstacle_xmin") {
          obstacleXMin = r.number();
        } else if (key == "obstacle_xmax") {
          obstacleXMax = r.number();
        } else if (key == "calib_dx") {
          env.calibration.dx = r.number();
        } else if (key == "calib_dy") {
          env.calibration.dy = r.number();
        } else if (key == "calib_dz") {
          env.calibration.dz = r.number();
        } else if (key == "calib_dyaw") {
          env.calibration.dyaw = r.number();
        } else if (key == "f_setpoint") {
          config.forceSetpoint = r.number();
        } else if (key == "contact_threshold") {
          env.contactThreshold = r.number();
        } else if (key == "settle_band") {
          env.settleBand = r.number();
        } else if (key == "settle_hold") {
          env.settleHold = r.count();
        } else if (key == "max_steps") {
          env.maxSteps = r.count();
        } else {
          r.unknown("environment");
        }
        break;
      }
    }
  }

  if (!haveScene) {
    throw ParseError(1, 1, "missing required key 'scene' in [experiment]");
  }
  if (obstacleHeight != 0.0) {
    if (!obstacleXMin || !obstacleXMax) {
      throw ConfigError("obstacle_height needs obstacle_xmin and obstacle_xmax");
    }
    config.environment.obstacle = sim::Obstacle{obstacleHeight, *obstacleXMin, *obstacleXMax};
  }

  piGains.applyTo(config.pi.gains);
  fuzzyGains.applyTo(config.fuzzyPi.gains);
  selectedGains.applyTo(config.controller(config.selected).gains);

  std::optional<fuzzy::LinguisticPartition> partition;
  if (centers || halfWidths) {
    if (!centers || !halfWidths) {
      throw ParseError(partitionLine, 1, "a custom partition needs both centers and half_widths");
    }
    try {
      partition = fuzzy::LinguisticPartition::fromArrays(std::span<const double, fuzzy::kLabelCount>(centers->data(), fuzzy::kLabelCount),
                                                      std::span<const double, fuzzy::kLabelCount>(halfWidths->data(), fuzzy::kLabelCount));
    } catch (const ConfigError &error) {
      throw ParseError(partitionLine, 1, error.what());
    }
  }
  for (auto *controller : {&config.pi, &config.fuzzyPi}) {
    controller->rules = rules.value_or(controller->rules);
    controller->axis = axis.value_or(controller->axis);
    controller->duMax = duMax.value_or(controller->duMax);
    if (partition) {
      controller->partition = *partition;
    }
  }
  return config;
}

std::string readFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError("error while reading '" + path.string() + "'");
  }
  return buffer.str();
}

void writeFile(const std::filesystem::path &path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) {
    throw IoError("error while writing '" + path.string() + "'");
  }
}

ExperimentConfig loadExperimentConfig(const std::filesystem::path &path) {
  return parseExperimentConfig(readFile(path), path.parent_path(), path.stem().string());
}

}  // namespace forcectl::config
