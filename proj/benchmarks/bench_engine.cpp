#include <benchmark/benchmark.h>

#include "homeolife/evolution.hpp"
#include "homeolife/grid.hpp"
#include "homeolife/random.hpp"
#include "homeolife/rules.hpp"

namespace {

using namespace homeolife;

Grid seeded_grid() {
  auto rng = derive_stream(42, "bench-grid");
  return random_grid(0.5, rng);
}

void BM_LifeStep(benchmark::State& state) {
  Grid grid = seeded_grid();
  for (auto _ : state) {
    grid = life_step(grid);
    benchmark::DoNotOptimize(grid);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LifeStep);

void BM_CoupledStep(benchmark::State& state) {
  auto rng = derive_stream(42, "bench-genome");
  const CompiledGenome genome(
      random_genome(static_cast<std::size_t>(state.range(0)), rng));
  Grid grid = seeded_grid();
  for (auto _ : state) {
    grid = coupled_step(grid, genome);
    benchmark::DoNotOptimize(grid);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CoupledStep)->Arg(0)->Arg(45)->Arg(256);

// One fitness call: two 500-step rollouts.
void BM_EvaluateFitness(benchmark::State& state) {
  auto rng = derive_stream(42, "bench-genome");
  const Genome genome = random_genome(45, rng);
  GAConfig cfg;
  const auto [low, high] = evaluation_patterns(cfg);
  const TaskSpec task{TaskKind::kHomeostasisHigh};
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_fitness(genome, task, low, high, cfg));
  }
}
BENCHMARK(BM_EvaluateFitness)->Unit(benchmark::kMicrosecond);

void BM_Generation(benchmark::State& state) {
  GAConfig cfg;
  const auto [low, high] = evaluation_patterns(cfg);
  const EvaluationSetup setup{{TaskKind::kHomeostasisLow}, low, high, cfg};
  auto init = derive_stream(7, "bench-pop");
  Population population;
  for (int i = 0; i < cfg.population_size; ++i) {
    population.push_back({random_genome(45, init), std::nullopt});
  }
  evaluate_population(population, setup);
  auto rng = derive_stream(7, "bench-ga");
  for (auto _ : state) {
    population = next_generation(population, setup, rng);
  }
}
BENCHMARK(BM_Generation)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
