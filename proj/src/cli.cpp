#include "forcectl/cli.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "forcectl/config.hpp"
#include "forcectl/errors.hpp"
#include "forcectl/numfmt.hpp"
#include "forcectl/parallel.hpp"
#include "forcectl/program.hpp"
#include "forcectl/sim.hpp"

namespace forcectl::cli {

namespace {

using config::ExperimentConfig;
using control::ControllerKind;

struct Prepared {
  ExperimentConfig config;
  program::RobotProgram program;
  double setpoint = 0.0;
};

Prepared prepare(const std::filesystem::path &configPath, const RunOptions &options) {
  Prepared p{config::loadExperimentConfig(configPath), {}, 0.0};
  if (options.traceDir) {
    p.config.traceDir = *options.traceDir;
  }
  if (options.rulebase) {
    p.config.pi.rules = *options.rulebase;
    p.config.fuzzyPi.rules = *options.rulebase;
  }
  p.config.validate();

  auto scene = scene::parseScene(config::readFile(p.config.scenePath));
  if (p.config.forceSetpoint) {
    scene.setpoint = p.config.forceSetpoint;
  }
  program::CompileOptions compileOptions;
  compileOptions.forceAxis = p.config.fuzzyPi.axis;
  p.program = program::compile(scene, compileOptions);
  p.setpoint = scene.setpoint.value_or(compileOptions.defaultSetpoint);
  return p;
}

std::string num(double value) { return numfmt::significant(value, 9); }

struct Summary {
  ControllerKind kind;
  bool converged = false;
  std::size_t samples = 0;
  double finalU = 0.0;
  double maxAbsDu = 0.0;
  std::optional<sim::Metrics> metrics;
};

Summary summarize(ControllerKind kind, const parallel::ExperimentOutcome &outcome, double setpoint) {
  Summary s{kind, outcome.converged, outcome.trace.size(), 0.0, 0.0, std::nullopt};
  if (!outcome.trace.empty()) {
    s.finalU = outcome.trace.back().u;
  }
  for (const auto &record : outcome.trace) {
    s.maxAbsDu = std::max(s.maxAbsDu, std::fabs(record.du));
  }
  try {
    s.metrics = sim::computeMetrics(outcome.trace, setpoint);
  } catch (const sim::MetricError &) {
  }
  return s;
}

std::string metricsText(const Summary &s, const control::ControllerConfig &config) {
  std::ostringstream out;
  out << "controller=" << control::name(s.kind) << '\n';
  out << "rulebase=" << fuzzy::name(config.rules) << '\n';
  out << "kp=" << num(config.gains.kp) << '\n';
  out << "ki=" << num(config.gains.ki) << '\n';
  out << "kx=" << num(config.gains.kx) << '\n';
  out << "converged=" << (s.converged ? "true" : "false") << '\n';
  out << "samples=" << s.samples << '\n';
  out << "final_u_mm=" << num(s.finalU) << '\n';
  out << "max_abs_du_mm=" << num(s.maxAbsDu) << '\n';
  if (s.metrics) {
    const auto &m = *s.metrics;
    out << "contact_steps=" << m.contactSteps << '\n';
    out << "overshoot_pct=" << num(m.overshootPct) << '\n';
    out << "settling_steps=" << (m.settlingSteps ? std::to_string(*m.settlingSteps) : "not_settled") << '\n';
    out << "steady_state_error_N=" << num(m.steadyStateError) << '\n';
    out << "peak_force_N=" << num(m.peakForce) << '\n';
  } else {
    out << "contact_steps=0\n";
  }
  return out.str();
}

std::string csvText(const sim::Trace &trace) {
  std::ostringstream out;
  sim::writeTraceCsv(out, trace);
  return out.str();
}

void writeOutputs(const Prepared &p, const Summary &summary, const sim::Trace &trace) {
  const std::string stem = p.config.name + "_" + std::string(control::name(summary.kind));
  std::error_code ec;
  std::filesystem::create_directories(p.config.traceDir, ec);
  config::writeFile(p.config.traceDir / (stem + ".csv"), csvText(trace));
  config::writeFile(p.config.traceDir / (stem + "_metrics.txt"), metricsText(summary, p.config.controller(summary.kind)));
}

std::string compareTable(const std::array<Summary, 2> &rows) {
  std::ostringstream out;
  auto cell = [](const Summary &s, auto &&field) -> std::string {
    if (!s.converged) {
      return "NOT_CONVERGED";
    }
    return field(s);
  };
  auto metric = [&](const Summary &s, auto &&field) -> std::string {
    return cell(s, [&](const Summary &x) { return x.metrics ? field(*x.metrics) : std::string("no_contact"); });
  };
  const std::array<std::pair<std::string, std::function<std::string(const Summary &)>>, 7> lines{{
      {"converged", [](const Summary &s) { return std::string(s.converged ? "yes" : "no"); }},
      {"overshoot_pct", [&](const Summary &s) { return metric(s, [](const sim::Metrics &m) { return num(m.overshootPct); }); }},
      {"settling_steps",
       [&](const Summary &s) {
         return metric(s, [](const sim::Metrics &m) {
           return m.settlingSteps ? std::to_string(*m.settlingSteps) : std::string("not_settled");
         });
       }},
      {"steady_state_error_N",
       [&](const Summary &s) { return metric(s, [](const sim::Metrics &m) { return num(m.steadyStateError); }); }},
      {"peak_force_N", [&](const Summary &s) { return metric(s, [](const sim::Metrics &m) { return num(m.peakForce); }); }},
      {"final_u_mm", [](const Summary &s) { return num(s.finalU); }},
      {"max_abs_du_mm", [](const Summary &s) { return num(s.maxAbsDu); }},
  }};
  out << std::left << std::setw(22) << "metric" << std::setw(16) << control::name(rows[0].kind)
      << control::name(rows[1].kind) << '\n';
  for (const auto &[label, field] : lines) {
    out << std::left << std::setw(22) << label << std::setw(16) << field(rows[0]) << field(rows[1]) << '\n';
  }
  return out.str();
}

int report(const Error &error, std::ostream &err) {
  err << "forcectl: " << error.what() << '\n';
  return static_cast<int>(error.code());
}

}  // namespace

int cmdCompile(const std::filesystem::path &scenePath, const std::filesystem::path &outPath,
               const std::optional<scene::CalibrationTransform> &calibration, std::ostream &out, std::ostream &err) {
  try {
    auto scene = scene::parseScene(config::readFile(scenePath));
    if (calibration) {
      scene = scene::applyCalibration(std::move(scene), *calibration);
    }
    const auto program = program::compile(scene);
    config::writeFile(outPath, program::emitProgram(program));
    out << "wrote " << program.instructions.size() << " instructions to " << outPath.string() << '\n';
    return 0;
  } catch (const ParseError &error) {
    err << "forcectl: " << scenePath.string() << ": " << error.what() << '\n';
    return static_cast<int>(error.code());
  } catch (const Error &error) {
    return report(error, err);
  }
}

int cmdRun(const std::filesystem::path &configPath, const RunOptions &options, std::ostream &out, std::ostream &err) {
  try {
    const Prepared p = prepare(configPath, options);
    const auto &controller = p.config.controller(p.config.selected);
    const std::array configs{controller};
    const auto outcome = parallel::runBatchSerial(p.program, configs, p.config.environment).front();
    if (!outcome.error.empty()) {
      throw ConfigError(outcome.error);
    }
    const Summary summary = summarize(p.config.selected, outcome, p.setpoint);
    writeOutputs(p, summary, outcome.trace);
    out << metricsText(summary, controller);
    if (!outcome.converged) {
      err << "forcectl: " << control::name(p.config.selected) << " did not settle within "
          << p.config.environment.maxSteps << " samples; partial trace written\n";
      return static_cast<int>(ExitCode::kNonConvergence);
    }
    return 0;
  } catch (const Error &error) {
    return report(error, err);
  }
}

int cmdCompare(const std::filesystem::path &configPath, const RunOptions &options, std::ostream &out,
               std::ostream &err) {
  try {
    const Prepared p = prepare(configPath, options);
    const std::array configs{p.config.pi, p.config.fuzzyPi};
    const auto outcomes = parallel::runBatch(p.program, configs, p.config.environment);
    std::array<Summary, 2> rows{};
    for (std::size_t i = 0; i < configs.size(); ++i) {
      if (!outcomes[i].error.empty()) {
        throw ConfigError(outcomes[i].error);
      }
      rows[i] = summarize(configs[i].kind, outcomes[i], p.setpoint);
      writeOutputs(p, rows[i], outcomes[i].trace);
    }
    const std::string table = compareTable(rows);
    config::writeFile(p.config.traceDir / (p.config.name + "_compare.txt"), table);
    out << table;
    for (const auto &row : rows) {
      if (!row.converged) {
        err << "forcectl: " << control::name(row.kind) << " did not settle within " << p.config.environment.maxSteps
            << " samples\n";
        return static_cast<int>(ExitCode::kNonConvergence);
      }
    }
    return 0;
  } catch (const Error &error) {
    return report(error, err);
  }
}

int cmdSweep(const std::filesystem::path &configPath, const RunOptions &options, const std::vector<double> &kpValues,
             const std::vector<double> &kiValues, std::ostream &out, std::ostream &err) {
  try {
    const Prepared p = prepare(configPath, options);
    const auto points = parallel::sweepGains(p.config.controller(p.config.selected), kpValues, kiValues, p.program,
                                             p.config.environment, p.setpoint);
    out << "kp,ki,converged,overshoot_pct,settling_steps,steady_state_error_N\n";
    for (const auto &point : points) {
      out << num(point.kp) << ',' << num(point.ki) << ',' << (point.converged ? 1 : 0) << ',';
      if (point.metrics) {
        const auto &m = *point.metrics;
        out << num(m.overshootPct) << ',' << (m.settlingSteps ? std::to_string(*m.settlingSteps) : "") << ','
            << num(m.steadyStateError);
      } else {
        out << ",,";
      }
      out << '\n';
    }
    return 0;
  } catch (const Error &error) {
    return report(error, err);
  }
}

}  // namespace forcectl::cli
