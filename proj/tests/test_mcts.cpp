#include <gtest/gtest.h>

#include <map>

#include "contrast/errors.hpp"
#include "contrast/mcts.hpp"
#include "support/toy_env.hpp"

using namespace contrast;

namespace {

RewardConfig horizon(std::size_t t) {
  RewardConfig r;
  r.horizon = t;
  return r;
}

MctsConfig budget(std::size_t k) {
  MctsConfig c;
  c.simulations_per_decision = k;
  return c;
}

}  // namespace

TEST(Mcts, SingleActionNeedsNoSearch) {
  auto sim = toy::make_sim({}, toy::hashed_policy(1), toy::hashed_policy(2), 1);
  MctsSolver solver(1, budget(50), horizon(4), 0);
  EXPECT_EQ(solver.get_action(sim), EnvAction{0});
  EXPECT_EQ(sim.steps_executed(), 0u);
}

TEST(Mcts, UnvisitedChildrenComeFirst) {
  auto sim = toy::make_sim({}, toy::hashed_policy(1), toy::hashed_policy(2), 5);
  MctsSolver solver(5, budget(5), horizon(6), 0);
  solver.get_action(sim);
  const auto& top = solver.tree().node(0);
  for (const auto& e : top.edges) EXPECT_EQ(e.visits, 1u);
}

TEST(Mcts, RestoresTheSimulator) {
  auto sim = toy::make_sim({}, toy::hashed_policy(1), toy::hashed_policy(2));
  sim.step(EnvAction{1});
  const auto before = sim.agent_states();
  MctsSolver solver(3, budget(20), horizon(5), 0);
  solver.get_action(sim);
  EXPECT_EQ(sim.agent_states(), before);
  EXPECT_EQ(sim.step_count(), 1u);
}

TEST(Mcts, TerminalOrClosedSimulatorThrows) {
  toy::Landscape l;
  l.terminal_radius = 0.5;
  toy::Policy runner{[](const toy::History&) { return ActionVector{1.0, 0.0}; }};
  auto sim = toy::make_sim(l, runner, toy::zero_policy());
  sim.step(EnvAction{0});
  MctsSolver solver(3, budget(4), horizon(4), 0);
  EXPECT_THROW(solver.get_action(sim), InvalidState);

  auto open = toy::make_sim({}, toy::zero_policy(), toy::zero_policy());
  MctsSolver short_horizon(3, budget(4), horizon(1), 0);
  open.step(EnvAction{0});
  EXPECT_THROW(short_horizon.get_action(open), InvalidState);
}

// Two steps, where only [1, 1] makes the agents diverge.
TEST(Mcts, FindsUniqueBestTwoStepSequence) {
  toy::Policy picky{[](const toy::History& h) {
    const bool on_path = !h.empty() && h[0] == 1 && (h.size() < 2 || h[1] == 1);
    return on_path ? ActionVector{1.0, 0.0} : ActionVector{0.0, 0.0};
  }};
  const auto cfg = horizon(2);
  const auto oracle = toy::brute_force({}, toy::zero_policy(), picky, cfg);
  EXPECT_EQ(oracle.best, 1.0 + 1.0 + 5.0 * 4.0);

  auto sim = toy::make_sim({}, toy::zero_policy(), picky);
  MctsSolver solver(3, budget(60), cfg, 0);
  solver.begin_episode();
  const EnvAction first = solver.get_action(sim);
  EXPECT_EQ(first, EnvAction{1});
  const auto out = sim.step(first);
  solver.update_policy(step_reward(out.actions), first);
  EXPECT_EQ(solver.get_action(sim), EnvAction{1});
}

TEST(Mcts, UpdatePolicyAdvancesRootAndCountsTheCommit) {
  auto sim = toy::make_sim({}, toy::hashed_policy(1), toy::hashed_policy(2));
  const auto cfg = horizon(3);
  MctsSolver solver(3, budget(9), cfg, 0);
  solver.begin_episode();
  const EnvAction a = solver.get_action(sim);
  const std::size_t before = solver.tree().edge(0, a).visits;
  const auto out = sim.step(a);
  solver.update_policy(step_reward(out.actions), a);
  EXPECT_EQ(solver.root(), *solver.tree().edge(0, a).child);
  // The root's siblings are no longer under the root.
  EXPECT_EQ(solver.tree().node(solver.root()).parent, std::optional<std::size_t>(0));

  while (!sim.is_terminal() && sim.step_count() < cfg.horizon) {
    const EnvAction b = solver.get_action(sim);
    const auto o = sim.step(b);
    solver.update_policy(step_reward(o.actions), b);
  }
  solver.end_episode(closing_reward(sim.reward_state(), sim.step_count(), cfg));
  EXPECT_EQ(solver.tree().edge(0, a).visits, before + 1);
  EXPECT_EQ(solver.root(), 0u);
}

// Edge statistics after whole episodes equal means recomputed from the
// logged backups.
TEST(Mcts, StatisticsMatchLoggedBackups) {
  auto sim = toy::make_sim({}, toy::hashed_policy(21), toy::hashed_policy(22));
  const auto cfg = horizon(5);
  MctsSolver solver(3, budget(7), cfg, 9);
  solver.set_backup_logging(true);
  for (int episode = 0; episode < 6; ++episode) {
    sim.reset();
    solver.begin_episode();
    while (!sim.is_terminal() && sim.step_count() < cfg.horizon) {
      const EnvAction a = solver.get_action(sim);
      const auto o = sim.step(a);
      solver.update_policy(step_reward(o.actions), a);
    }
    solver.end_episode(closing_reward(sim.reward_state(), sim.step_count(), cfg));
  }

  std::map<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, double>> recomputed;
  for (const auto& b : solver.backup_log()) {
    auto& slot = recomputed[{b.node, b.action.index}];
    ++slot.first;
    slot.second += b.value;
  }
  std::size_t edges_seen = 0;
  for (std::size_t id = 0; id < solver.tree().size(); ++id) {
    const auto& node = solver.tree().node(id);
    std::size_t node_visits = 0;
    for (std::size_t a = 0; a < node.edges.size(); ++a) {
      const auto& e = node.edges[a];
      node_visits += e.visits;
      auto it = recomputed.find({id, a});
      if (e.visits == 0) {
        EXPECT_EQ(it, recomputed.end());
        continue;
      }
      ++edges_seen;
      ASSERT_NE(it, recomputed.end());
      EXPECT_EQ(e.visits, it->second.first);
      EXPECT_DOUBLE_EQ(e.mean(), it->second.second / static_cast<double>(it->second.first));
    }
    EXPECT_EQ(node.visits, node_visits);
  }
  EXPECT_EQ(edges_seen, recomputed.size());
}

TEST(Mcts, AbandonLeavesStatisticsUntouched) {
  auto sim = toy::make_sim({}, toy::hashed_policy(1), toy::hashed_policy(2));
  const auto cfg = horizon(3);
  MctsSolver solver(3, budget(3), cfg, 0);
  solver.begin_episode();
  const EnvAction a = solver.get_action(sim);
  const auto visits = solver.tree().edge(0, a).visits;
  solver.update_policy(step_reward(sim.step(a).actions), a);
  solver.abandon_episode();
  EXPECT_EQ(solver.tree().edge(0, a).visits, visits);
  EXPECT_EQ(solver.root(), 0u);
}

TEST(Mcts, ConfigValidation) {
  MctsConfig c;
  c.simulations_per_decision = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.exploration = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(MctsSolver(0, {}, {}, 0), InvalidInput);
}
