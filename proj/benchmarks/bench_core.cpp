#include <benchmark/benchmark.h>

#include <random>

#include "contrast/orchestrate.hpp"
#include "contrast/trajectory_queue.hpp"

using namespace contrast;

namespace {

crowdnav::CrowdSim shipped_sim(const char* a, const char* b) {
  const auto c = default_run_config();
  return make_crowd_sim(c, c.agent(a), c.agent(b), c.scenarios[0]);
}

void BM_CoupledCrowdStep(benchmark::State& state) {
  auto sim = shipped_sim("hi", "med");
  std::mt19937_64 rng(1);
  for (auto _ : state) {
    if (sim.is_terminal() || sim.step_count() >= 100) sim.reset();
    benchmark::DoNotOptimize(sim.step(EnvAction{rng() % 5}));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CoupledCrowdStep);

void BM_SnapshotRestore(benchmark::State& state) {
  auto sim = shipped_sim("hi", "lo");
  sim.step(EnvAction{2});
  for (auto _ : state) {
    const auto token = sim.snapshot();
    sim.restore(token);
  }
}
BENCHMARK(BM_SnapshotRestore);

void BM_MctsDecision(benchmark::State& state) {
  const auto c = default_run_config();
  auto sim = shipped_sim("hi", "med");
  MctsConfig cfg;
  cfg.simulations_per_decision = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    MctsSolver solver(sim.num_env_actions(), cfg, c.reward, 0);
    benchmark::DoNotOptimize(solver.get_action(sim));
  }
}
BENCHMARK(BM_MctsDecision)->Arg(5)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_SearchIteration(benchmark::State& state) {
  const auto c = default_run_config();
  auto sim = shipped_sim("hi", "lo");
  SearchConfig cfg = c.search;
  cfg.iterations = 1;
  cfg.mcts.simulations_per_decision = 5;
  for (auto _ : state) benchmark::DoNotOptimize(adaptive_scenario_search(sim, cfg, c.reward));
}
BENCHMARK(BM_SearchIteration)->Unit(benchmark::kMillisecond);

void BM_QueueInsert(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  TrajectoryQueue q(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    Trajectory t;
    t.total_reward = u(rng);
    q.insert(std::move(t));
  }
}
BENCHMARK(BM_QueueInsert)->Arg(10)->Arg(100);

void BM_ActionDivergence(benchmark::State& state) {
  const ActionVector a{0.3, -0.8};
  const ActionVector b{-0.1, 0.9};
  for (auto _ : state) benchmark::DoNotOptimize(action_divergence(a, b));
}
BENCHMARK(BM_ActionDivergence);

}  // namespace

BENCHMARK_MAIN();
