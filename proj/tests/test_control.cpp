#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "forcectl/control.hpp"
#include "forcectl/errors.hpp"

using namespace forcectl;
using namespace forcectl::control;

namespace {

Wrench fz(double value) {
  Wrench w;
  w.fz = value;
  return w;
}

ControllerConfig fuzzyConfig(fuzzy::RuleVariant rules = fuzzy::RuleVariant::Canonical) {
  ControllerConfig config;
  config.kind = ControllerKind::FuzzyPi;
  config.gains = {0.2, 0.05, 1.0};
  config.rules = rules;
  config.duMax = 2.0;
  return config;
}

}  // namespace

TEST_CASE("wrench error") {
  CHECK(computeError(fz(-10), fz(-10), Axis::Fz) == 0.0);
  CHECK(computeError(fz(-10), fz(-4), Axis::Fz) == -6.0);
  CHECK(computeError(fz(0), fz(3), Axis::Fz) == -3.0);

  Wrench desired;
  desired.tx = 1.5;
  Wrench actual;
  actual.tx = 0.5;
  actual.fz = 100.0;
  CHECK(computeError(desired, actual, Axis::Tx) == 1.0);

  CHECK(parseAxis("fz") == Axis::Fz);
  CHECK(name(Axis::Ty) == "ty");
  CHECK_THROWS_AS(parseAxis("z"), ConfigError);
  CHECK(fz(1.0).isFinite());
  CHECK_FALSE(fz(std::numeric_limits<double>::infinity()).isFinite());
}

TEST_CASE("error state update") {
  ErrorState state;
  state = updateError(state, 1.0);
  CHECK(state.de == 0.0);  // first sample primes e_prev
  state = updateError(state, 1.0);
  CHECK(state.de == 0.0);
  state = updateError(state, 2.0);
  CHECK(state.de == 1.0);
  CHECK(state.ePrev == 1.0);
  CHECK(state.e == 2.0);

  const auto seeded = updateError(ErrorState::seeded(0.0), 3.0);
  CHECK(seeded.de == 3.0);
}

TEST_CASE("gain validation") {
  CHECK_NOTHROW(ControllerGains{0.2, 0.05, 1.0}.validate());
  CHECK_NOTHROW(ControllerGains{0.0, 0.05, 1.0}.validate());
  CHECK_THROWS_AS(ControllerGains({0.2, 0.05, 0.0}).validate(), ConfigError);
  CHECK_THROWS_AS(ControllerGains({-0.1, 0.05, 1.0}).validate(), ConfigError);
  CHECK_THROWS_AS(ControllerGains({0.0, 0.0, 1.0}).validate(), ConfigError);
  auto config = fuzzyConfig();
  config.duMax = 0.0;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  CHECK(parseControllerKind("pi") == ControllerKind::Pi);
  CHECK(parseControllerKind("fuzzy_pi") == ControllerKind::FuzzyPi);
  CHECK_THROWS_AS(parseControllerKind("pid"), ConfigError);
}

TEST_CASE("incremental PI step") {
  const ControllerGains gains{1.0, 0.1, 1.0};
  CHECK(piStep(gains, 5.0, 2.0, 1.0) == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(piStep(gains, 5.0, 0.0, 0.0) == 0.0);
  CHECK(piStep({1.0, 1.0, 1.0}, 2.0, 100.0, 100.0) == 2.0);
  CHECK(piStep({1.0, 1.0, 1.0}, 2.0, -100.0, -100.0) == -2.0);
  CHECK(piStep({1.0, 0.1, 2.5}, 10.0, 2.0, 1.0) == doctest::Approx(3.0).epsilon(1e-15));

  SUBCASE("linear before saturation") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    const double inf = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 500; ++i) {
      const double e = dist(rng);
      const double de = dist(rng);
      const double alpha = dist(rng);
      CHECK(piStep(gains, inf, alpha * e, alpha * de) == doctest::Approx(alpha * piStep(gains, inf, e, de)));
    }
  }
}

TEST_CASE("accumulate displacement") {
  CHECK(accumulate({0.0, 0.0}, 1.2).u == 1.2);
  const auto d = accumulate({0.0, 5.0}, -0.5);
  CHECK(d.u == 4.5);
  CHECK(d.du == -0.5);

  Displacement running{0.0, 3.0};
  double sum = 0.0;
  for (const double du : {0.25, -1.5, 0.125, 2.0}) {
    running = accumulate(running, du);
    sum += du;
  }
  CHECK(running.u - 3.0 == doctest::Approx(sum));
}

TEST_CASE("positional PI oracle") {
  const ControllerGains gains{1.0, 0.1, 1.0};
  const std::vector<double> zeros{0.0, 0.0, 0.0};
  CHECK(positionalPiOracle(gains, zeros, 1.0) == 0.0);
  const std::vector<double> one{1.0};
  CHECK(positionalPiOracle(gains, one, 1.0) == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(positionalPiOracle(gains, one, 0.004) == doctest::Approx(1.1).epsilon(1e-12));
  CHECK_THROWS_AS(positionalPiOracle(gains, {}, 1.0), ConfigError);
  CHECK_THROWS_AS(positionalPiOracle(gains, one, 0.0), ConfigError);

  SUBCASE("matches accumulated increments") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> dist(-20.0, 20.0);
    const double inf = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> history;
      ErrorState state = ErrorState::seeded(0.0);
      double u = 0.0;
      for (int k = 0; k < 50; ++k) {
        history.push_back(dist(rng));
        state = updateError(state, history.back());
        u += piStep(gains, inf, state.e, state.de);
        CHECK(u == doctest::Approx(positionalPiOracle(gains, history, 0.004)).epsilon(1e-9).scale(1.0));
      }
    }
  }
}

TEST_CASE("fuzzy-PI step") {
  const auto config = fuzzyConfig();
  CHECK(fuzzyPiStep(config, 0.0, 0.0) == 0.0);
  CHECK(fuzzyPiStep(fuzzyConfig(fuzzy::RuleVariant::AsPrinted), 0.0, 0.0) == 0.0);

  // ki * e and kp * de both beyond 1: only PL x PL fires, whose consequent is PL at +1.
  CHECK(fuzzyPiStep(config, 100.0, 100.0) == 1.0);
  CHECK(fuzzyPiStep(config, -100.0, -100.0) == -1.0);
  auto scaled = config;
  scaled.gains.kx = 1.5;
  CHECK(fuzzyPiStep(scaled, 100.0, 100.0) == 1.5);
  scaled.gains.kx = 3.0;
  CHECK(fuzzyPiStep(scaled, 100.0, 100.0) == 2.0);  // du_max

  SUBCASE("properties") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> dist(-40.0, 40.0);
    for (int i = 0; i < 3000; ++i) {
      const double e = dist(rng);
      const double de = dist(rng);
      const double du = fuzzyPiStep(config, e, de);
      CHECK(std::fabs(du) <= config.gains.kx);
      CHECK(fuzzyPiStep(config, -e, -de) == doctest::Approx(-du).epsilon(1e-12).scale(1.0));
      if (e > 0.0 && de >= 0.0) {
        CHECK(du >= 0.0);
      }
      if (e < 0.0 && de <= 0.0) {
        CHECK(du <= 0.0);
      }
      CHECK(fuzzyPiStep(config, e, de) == du);
    }
  }
}

TEST_CASE("force controller") {
  ForceController pi([] {
    ControllerConfig config;
    config.kind = ControllerKind::Pi;
    config.gains = {1.0, 0.1, 1.0};
    config.duMax = 10.0;
    return config;
  }());
  CHECK(pi.step(2.0) == doctest::Approx(0.2));  // de = 0 on the first sample
  CHECK(pi.step(3.0) == doctest::Approx(1.3));
  CHECK(pi.displacement().u == doctest::Approx(1.5));
  CHECK(pi.error().de == 1.0);
  CHECK(pi.command(2.0, 1.0) == doctest::Approx(1.2));

  ControllerConfig bad;
  bad.gains = {0.0, 0.0, 1.0};
  CHECK_THROWS_AS(ForceController{bad}, ConfigError);
}
