// Serial reference vs OpenMP kernels. Set OMP_NUM_THREADS to vary the team size.

#include <benchmark/benchmark.h>

#include "forcectl/config.hpp"
#include "forcectl/parallel.hpp"
#include "forcectl/program.hpp"
#include "forcectl/scene.hpp"

namespace {

using namespace forcectl;

control::ControllerConfig fuzzyConfig() {
  control::ControllerConfig config;
  config.gains = config::defaultGains(control::ControllerKind::FuzzyPi);
  return config;
}

void BM_SurfaceSerial(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto axis = parallel::linspace(-40.0, 40.0, n);
  const auto config = fuzzyConfig();
  for (auto _ : state) {
    benchmark::DoNotOptimize(parallel::controlSurfaceSerial(config, axis, axis));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n));
}

void BM_SurfaceOpenMP(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto axis = parallel::linspace(-40.0, 40.0, n);
  const auto config = fuzzyConfig();
  for (auto _ : state) {
    benchmark::DoNotOptimize(parallel::controlSurface(config, axis, axis));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n));
}

struct Batch {
  program::RobotProgram program;
  std::vector<control::ControllerConfig> configs;
  sim::Environment env;
};

Batch makeBatch(std::size_t count) {
  scene::Scene cell;
  cell.objects = {{"cup", {0, 0, 0, 0, 0, 0}, {true, false, false}}, {"slot", {300, 0, 0, 0, 0, 0}, {false, true, false}}};
  Batch batch{program::compile(cell), {}, {}};
  batch.env.obstacle = sim::Obstacle{20.0, 280.0, 320.0};
  for (const double ki : parallel::linspace(0.01, 0.09, count)) {
    auto config = fuzzyConfig();
    config.gains.ki = ki;
    batch.configs.push_back(config);
  }
  return batch;
}

void BM_BatchSerial(benchmark::State &state) {
  const auto batch = makeBatch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(parallel::runBatchSerial(batch.program, batch.configs, batch.env));
  }
}

void BM_BatchOpenMP(benchmark::State &state) {
  const auto batch = makeBatch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(parallel::runBatch(batch.program, batch.configs, batch.env));
  }
}

}  // namespace

BENCHMARK(BM_SurfaceSerial)->Arg(101)->Arg(401);
BENCHMARK(BM_SurfaceOpenMP)->Arg(101)->Arg(401);
BENCHMARK(BM_BatchSerial)->Arg(8);
BENCHMARK(BM_BatchOpenMP)->Arg(8);

BENCHMARK_MAIN();
