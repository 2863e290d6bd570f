#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "forcectl/cli.hpp"
#include "forcectl/config.hpp"
#include "forcectl/errors.hpp"

using namespace forcectl;
namespace fs = std::filesystem;

namespace {

/// Fresh scratch directory per test case.
fs::path scratch(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / ("forcectl_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

constexpr const char *kScene = R"(clearance 100
speed 50
object cup pos 0 0 0 tags pick
object slot pos 300 0 0 tags place
)";

constexpr const char *kConfig = R"([experiment]
scene cell.scene
trace_dir out

[controller]
controller fuzzy_pi
rulebase canonical
du_max 2

[environment]
ks 10
dt 0.004
obstacle_height 20
obstacle_xmin 280
obstacle_xmax 320
f_setpoint -10
)";

}  // namespace

TEST_CASE("config parsing") {
  const auto config = config::parseExperimentConfig(kConfig, "/base");
  CHECK(config.scenePath == fs::path("/base/cell.scene"));
  CHECK(config.traceDir == fs::path("/base/out"));
  CHECK(config.selected == control::ControllerKind::FuzzyPi);
  CHECK(config.fuzzyPi.gains.kp == config::defaultGains(control::ControllerKind::FuzzyPi).kp);
  CHECK(config.pi.gains.ki == config::defaultGains(control::ControllerKind::Pi).ki);
  CHECK(config.pi.kind == control::ControllerKind::Pi);
  CHECK(config.environment.stiffness == 10.0);
  REQUIRE(config.environment.obstacle.has_value());
  CHECK(config.environment.obstacle->height == 20.0);
  CHECK(config.forceSetpoint == -10.0);
  CHECK_NOTHROW(config.validate());

  SUBCASE("gain precedence") {
    const auto c = config::parseExperimentConfig(
        "scene s\n[controller]\ncontroller pi\nkp 0.3\n[pi]\nkp 0.1\nki 0.2\n[fuzzy_pi]\nki 0.07\n");
    CHECK(c.selected == control::ControllerKind::Pi);
    CHECK(c.pi.gains.kp == 0.3);
    CHECK(c.pi.gains.ki == 0.2);
    CHECK(c.fuzzyPi.gains.ki == 0.07);
    CHECK(c.fuzzyPi.gains.kp == config::defaultGains(control::ControllerKind::FuzzyPi).kp);
  }
  SUBCASE("custom partition") {
    const auto c = config::parseExperimentConfig(
        "scene s\n[controller]\ncenters -1 -0.5 -0.2 0 0.2 0.5 1\nhalf_widths 0.5\nrulebase as_printed\n");
    CHECK(c.fuzzyPi.partition.center(fuzzy::Label::PS) == 0.2);
    CHECK(c.fuzzyPi.partition[fuzzy::Label::NL].halfWidth == 0.5);
    CHECK(c.pi.rules == fuzzy::RuleVariant::AsPrinted);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(config::parseExperimentConfig("[controller]\nrulebase canonical\n"), ParseError);
    CHECK_THROWS_AS(config::parseExperimentConfig("scene s\n[robot]\n"), ParseError);
    CHECK_THROWS_AS(config::parseExperimentConfig("scene s\n[environment]\nstiffness 3\n"), ParseError);
    CHECK_THROWS_AS(config::parseExperimentConfig("scene s\n[environment]\nks 3\nks 4\n"), ParseError);
    CHECK_THROWS_AS(config::parseExperimentConfig("scene s\n[controller]\nrulebase fancy\n"), ParseError);
    CHECK_THROWS_AS(config::parseExperimentConfig("scene s\n[controller]\ncenters 0 1\nhalf_widths 1\n"), ParseError);
    CHECK_THROWS_AS(config::parseExperimentConfig("scene s\n[controller]\ncenters 0 0 0 0 0 0 0\nhalf_widths 1\n"),
                    ParseError);
    CHECK_THROWS_AS(config::parseExperimentConfig("scene s\n[environment]\nsettle_hold 2.5\n"), ParseError);
    CHECK_THROWS_AS(config::parseExperimentConfig("scene s\n[environment]\nobstacle_height 3\n"), ConfigError);
    auto bad = config::parseExperimentConfig("scene s\n[environment]\nks -10\n");
    CHECK_THROWS_AS(bad.validate(), ConfigError);
  }
}

TEST_CASE("cmd_compile") {
  const auto dir = scratch("compile");
  config::writeFile(dir / "cell.scene", kScene);
  std::ostringstream out;
  std::ostringstream err;

  CHECK(cli::cmdCompile(dir / "cell.scene", dir / "cell.prog", std::nullopt, out, err) == 0);
  const std::string program = config::readFile(dir / "cell.prog");
  CHECK(program.starts_with("MOVEL 0.000000 0.000000 100.000000 0.0 0.0 0.0 50\n"));
  CHECK(program.find("SETFORCE fz -10\n") != std::string::npos);

  CHECK(cli::cmdCompile(dir / "cell.scene", dir / "shifted.prog", scene::CalibrationTransform{1, 0, 0, 0}, out,
                        err) == 0);
  CHECK(config::readFile(dir / "shifted.prog").starts_with("MOVEL 1.000000 0.000000 100.000000"));

  SUBCASE("missing file") {
    CHECK(cli::cmdCompile(dir / "nope.scene", dir / "x.prog", std::nullopt, out, err) == 4);
  }
  SUBCASE("parse error") {
    config::writeFile(dir / "bad.scene", "clearance 1\nspeed 1\nobject a pos 0 0 tags pick\n");
    CHECK(cli::cmdCompile(dir / "bad.scene", dir / "x.prog", std::nullopt, out, err) == 1);
    CHECK(err.str().find("line 3") != std::string::npos);
  }
  SUBCASE("compile error names the violated rule") {
    config::writeFile(dir / "noplace.scene", "clearance 1\nspeed 1\nobject a pos 0 0 0 tags pick\n");
    CHECK(cli::cmdCompile(dir / "noplace.scene", dir / "x.prog", std::nullopt, out, err) == 2);
    CHECK(err.str().find("place") != std::string::npos);
  }
  SUBCASE("unwritable output") {
    CHECK(cli::cmdCompile(dir / "cell.scene", dir / "missing_dir" / "x.prog", std::nullopt, out, err) == 4);
    CHECK(err.str().find("cannot open") != std::string::npos);
  }
}

TEST_CASE("cmd_run and cmd_compare") {
  const auto dir = scratch("run");
  config::writeFile(dir / "cell.scene", kScene);
  config::writeFile(dir / "hammer.cfg", kConfig);
  std::ostringstream out;
  std::ostringstream err;

  CHECK(cli::cmdRun(dir / "hammer.cfg", {}, out, err) == 0);
  CHECK(fs::exists(dir / "out" / "hammer_fuzzy_pi.csv"));
  const std::string metrics = config::readFile(dir / "out" / "hammer_fuzzy_pi_metrics.txt");
  CHECK(metrics.find("controller=fuzzy_pi\n") != std::string::npos);
  CHECK(metrics.find("converged=true\n") != std::string::npos);
  CHECK(metrics.find("overshoot_pct=0\n") != std::string::npos);
  const std::string firstCsv = config::readFile(dir / "out" / "hammer_fuzzy_pi.csv");
  CHECK(firstCsv.starts_with("k,t,f_d,f_a,e,de,du,u,ee_z,contact\n"));

  CHECK(cli::cmdRun(dir / "hammer.cfg", {}, out, err) == 0);
  CHECK(config::readFile(dir / "out" / "hammer_fuzzy_pi.csv") == firstCsv);

  SUBCASE("trace dir override") {
    cli::RunOptions options;
    options.traceDir = dir / "elsewhere";
    CHECK(cli::cmdRun(dir / "hammer.cfg", options, out, err) == 0);
    CHECK(fs::exists(dir / "elsewhere" / "hammer_fuzzy_pi_metrics.txt"));
  }
  SUBCASE("validation happens before running") {
    std::string text = kConfig;
    text.replace(text.find("ks 10"), 5, "ks 0");
    config::writeFile(dir / "soft.cfg", text);
    CHECK(cli::cmdRun(dir / "soft.cfg", {}, out, err) == 1);
    CHECK_FALSE(fs::exists(dir / "out" / "soft_fuzzy_pi.csv"));
  }
  SUBCASE("non-convergence writes the partial trace") {
    cli::RunOptions options;
    options.rulebase = fuzzy::RuleVariant::AsPrinted;
    std::string text = kConfig;
    text += "max_steps 4000\n";
    config::writeFile(dir / "stall.cfg", text);
    CHECK(cli::cmdRun(dir / "stall.cfg", options, out, err) == 3);
    CHECK(fs::exists(dir / "out" / "stall_fuzzy_pi.csv"));
    CHECK(config::readFile(dir / "out" / "stall_fuzzy_pi_metrics.txt").find("converged=false") != std::string::npos);
  }
  SUBCASE("compare") {
    std::ostringstream table;
    CHECK(cli::cmdCompare(dir / "hammer.cfg", {}, table, err) == 0);
    CHECK(table.str().starts_with("metric"));
    CHECK(table.str().find("overshoot_pct") != std::string::npos);
    CHECK(fs::exists(dir / "out" / "hammer_pi.csv"));
    CHECK(fs::exists(dir / "out" / "hammer_compare.txt"));
    CHECK(config::readFile(dir / "out" / "hammer_compare.txt") == table.str());
  }
  SUBCASE("compare marks a non-convergent controller") {
    std::string text = kConfig;
    text += "max_steps 4000\n[pi]\nkp 0.5\nki 0.5\n";
    config::writeFile(dir / "wild.cfg", text);
    std::ostringstream table;
    CHECK(cli::cmdCompare(dir / "wild.cfg", {}, table, err) == 3);
    CHECK(table.str().find("NOT_CONVERGED") != std::string::npos);
  }
  SUBCASE("compare without a disturbance reports no correction") {
    std::string text = kConfig;
    text.replace(text.find("obstacle_height 20"), 18, "obstacle_height 0");
    config::writeFile(dir / "flat.cfg", text);
    std::ostringstream table;
    CHECK(cli::cmdCompare(dir / "flat.cfg", {}, table, err) == 0);
    CHECK(table.str().find("no_contact") != std::string::npos);
    CHECK(table.str().find("final_u_mm            0               0\n") != std::string::npos);
  }
  SUBCASE("sweep") {
    std::ostringstream csv;
    CHECK(cli::cmdSweep(dir / "hammer.cfg", {}, {0.0, 0.02}, {0.05}, csv, err) == 0);
    CHECK(csv.str().starts_with("kp,ki,converged,overshoot_pct,settling_steps,steady_state_error_N\n0,0.05,1,0,"));
  }
}
