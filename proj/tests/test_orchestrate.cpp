#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "contrast/errors.hpp"
#include "contrast/orchestrate.hpp"

using namespace contrast;
namespace fs = std::filesystem;

namespace {

RunConfig small_config(const std::string& out) {
  auto c = default_run_config();
  c.search.iterations = 3;
  c.search.queue_capacity = 3;
  c.search.mcts.simulations_per_decision = 5;
  c.search.seed = 11;
  c.reward.horizon = 40;
  c.output_dir = fs::temp_directory_path() / "contrast_tests" / out;
  fs::remove_all(c.output_dir);
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(RunAllPairs, ThreeAgentsTwoScenariosGiveSixSummaries) {
  const auto c = small_config("pairs");
  const auto m = run_all_pairs(c);
  ASSERT_EQ(m.entries.size(), 6u);
  for (const auto& e : m.entries) {
    EXPECT_TRUE(fs::exists(c.output_dir / e.summary_file)) << e.summary_file;
    EXPECT_FALSE(e.queue_files.empty());
    const auto summary = read_trajectory_file(c.output_dir / e.summary_file);
    EXPECT_EQ(summary.trajectory.total_reward, e.summary_reward);
    const auto top = read_trajectory_file(c.output_dir / e.queue_files.front());
    EXPECT_EQ(top.trajectory.total_reward, e.summary_reward);
  }
  EXPECT_TRUE(fs::exists(c.output_dir / "manifest.json"));
  EXPECT_EQ(m.entries[0].scenario, "corner-NE");
  EXPECT_EQ(m.entries[0].pair, AgentPair("hi", "lo"));
}

TEST(RunAllPairs, TwoAgentsOneScenarioGiveOneEntry) {
  auto c = small_config("single");
  c.agents.pop_back();
  c.scenarios.pop_back();
  EXPECT_EQ(run_all_pairs(c).entries.size(), 1u);
}

TEST(RunAllPairs, RerunIsByteIdenticalAcrossWorkerCounts) {
  auto a = small_config("rerun_a");
  auto b = small_config("rerun_b");
  b.workers = 3;
  const auto ma = run_all_pairs(a);
  run_all_pairs(b);
  EXPECT_EQ(slurp(a.output_dir / "manifest.json"), slurp(b.output_dir / "manifest.json"));
  for (const auto& e : ma.entries) {
    EXPECT_EQ(slurp(a.output_dir / e.summary_file), slurp(b.output_dir / e.summary_file));
  }
}

TEST(RunAllPairs, RestrictedRunKeepsJobSeeds) {
  const auto full = run_all_pairs(small_config("restrict_full"));
  auto c = small_config("restrict_one");
  const auto one = run_all_pairs(c, {AgentPair("med", "lo")});
  ASSERT_EQ(one.entries.size(), 2u);
  for (const auto& e : one.entries) {
    bool matched = false;
    for (const auto& f : full.entries) {
      if (f.pair == e.pair && f.scenario == e.scenario) {
        EXPECT_EQ(f.seed, e.seed);
        EXPECT_EQ(f.summary_reward, e.summary_reward);
        matched = true;
      }
    }
    EXPECT_TRUE(matched);
  }
  EXPECT_THROW(run_all_pairs(c, {AgentPair("lo", "expert")}), ConfigError);
}

TEST(RunAllPairs, SwappingInstanceOrderLeavesRewardsUnchanged) {
  const auto c = small_config("swap");
  const auto& hi = c.agent("hi");
  const auto& lo = c.agent("lo");
  auto forward = make_crowd_sim(c, hi, lo, c.scenarios[1]);
  auto backward = make_crowd_sim(c, lo, hi, c.scenarios[1]);
  const auto f = adaptive_scenario_search(forward, c.search, c.reward);
  const auto b = adaptive_scenario_search(backward, c.search, c.reward);
  ASSERT_EQ(f.trajectories.size(), b.trajectories.size());
  for (std::size_t i = 0; i < f.trajectories.size(); ++i) {
    EXPECT_EQ(f.trajectories[i].total_reward, b.trajectories[i].total_reward);
    EXPECT_EQ(f.trajectories[i].actions(), b.trajectories[i].actions());
  }
}

TEST(RunAllBaselines, WritesEpisodesPerJob) {
  auto c = small_config("baselines");
  c.baseline_episodes = 2;
  const auto jobs = run_all_baselines(c);
  ASSERT_EQ(jobs.size(), 6u);
  for (const auto& j : jobs) {
    EXPECT_EQ(j.trajectories.size(), 2u);
    ASSERT_EQ(j.files.size(), 2u);
    EXPECT_TRUE(replay_file(j.files[0]).pass);
  }
}

TEST(DeriveSeed, SpreadsCoordinates) {
  EXPECT_NE(derive_seed(0, 0, 1), derive_seed(0, 1, 0));
  EXPECT_NE(derive_seed(0, 0, 0), derive_seed(1, 0, 0));
  EXPECT_EQ(derive_seed(7, 2, 3), derive_seed(7, 2, 3));
}

// Independent re-computation of the benchmark: plain episode loop with the
// same seeds, scored directly.
TEST(Bench, MatchesDirectEpisodeLoopAndRanksShippedAgents) {
  auto c = default_run_config();
  const auto report = bench_agents(c);
  ASSERT_EQ(report.rows.size(), 3u);
  for (std::size_t r = 0; r < 3; ++r) {
    const auto& agent = c.agents[r];
    double all = 0.0;
    for (std::size_t s = 0; s < c.scenarios.size(); ++s) {
      const auto& scenario = c.scenarios[s];
      crowdnav::CrowdSim sim(crowdnav::CrowdNavEnv(c.dynamics), {agent.policy, agent.policy},
                             {agent.id, agent.id}, scenario);
      double sum = 0.0;
      for (std::size_t e = 0; e < 100; ++e) {
        std::mt19937_64 rng(derive_seed(c.bench_seed, s, e));
        std::uniform_int_distribution<std::size_t> pick(0, 4);
        sim.reset();
        while (!sim.is_terminal() && sim.step_count() < c.reward.horizon) sim.step(EnvAction{pick(rng)});
        const auto pos = sim.instance(0).robot.position;
        sum += crowdnav::score_episode(scenario.robot.position, pos, scenario.robot.goal, sim.step_count(),
                                       sim.terminal_kinds()[0]);
      }
      EXPECT_NEAR(report.rows[r].scenario_means[s], sum / 100.0, 1e-12) << agent.id;
      all += sum;
    }
    EXPECT_NEAR(report.rows[r].mean, all / 200.0, 1e-12);
  }
  EXPECT_EQ(report.ranking, (std::vector<AgentId>{"hi", "med", "lo"}));
  EXPECT_TRUE(report.shipped_order_checked);
  EXPECT_TRUE(report.shipped_order_ok);
}

TEST(Bench, DuplicatedAgentTies) {
  auto c = default_run_config();
  c.bench_episodes = 20;
  c.agents = {{"twin-a", crowdnav::PolicyHandle::builtin("med")}, {"twin-b", crowdnav::PolicyHandle::builtin("med")}};
  const auto report = bench_agents(c);
  EXPECT_NEAR(report.rows[0].mean, report.rows[1].mean, 1e-12);
  EXPECT_FALSE(report.shipped_order_checked);
  EXPECT_EQ(report.ranking, (std::vector<AgentId>{"twin-a", "twin-b"}));
}

TEST(Bench, ReportIsReproducible) {
  auto c = default_run_config();
  c.bench_episodes = 10;
  EXPECT_EQ(bench_agents(c).text(), bench_agents(c).text());
  c.bench_seed = 1;
  EXPECT_NE(bench_agents(c).text(), bench_agents(default_run_config()).text());
}
