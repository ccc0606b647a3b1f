#include "contrast/search.hpp"

#include <random>
#include <set>

#include "contrast/errors.hpp"
#include "contrast/trajectory_queue.hpp"

namespace contrast {
namespace {

using ActionSource = std::function<EnvAction(CoupledSimulator&)>;
using StepSink = std::function<void(const StepRecord&)>;

// Resets the simulator and plays one episode until terminal or the horizon.
Trajectory run_episode(CoupledSimulator& sim, const RewardConfig& reward, std::uint64_t seed,
                       const ActionSource& next_action, const StepSink& on_step = {}) {
  sim.reset();
  Trajectory traj;
  traj.seed = seed;
  traj.agents = sim.agent_ids();
  traj.init_state_id = sim.initial_state_id();
  while (!sim.is_terminal() && sim.step_count() < reward.horizon) {
    const EnvAction a = next_action(sim);
    StepRecord rec;
    rec.t = sim.step_count();
    StepOutcome out = sim.step(a);
    rec.env_action = a;
    rec.reward = step_reward(out.actions);
    rec.agent_actions = std::move(out.actions);
    rec.agent_states = std::move(out.states);
    if (on_step) on_step(rec);
    traj.steps.push_back(std::move(rec));
  }
  traj.terminal_reward = closing_reward(sim.reward_state(), sim.step_count(), reward);
  traj.total_reward = trajectory_total_reward(traj.steps, traj.terminal_reward);
  traj.terminal_kinds = sim.terminal_kinds();
  return traj;
}

std::vector<std::size_t> action_key(const Trajectory& t) {
  std::vector<std::size_t> key;
  key.reserve(t.steps.size());
  for (const auto& s : t.steps) key.push_back(s.env_action.index);
  return key;
}

template <class Stop>
std::vector<Trajectory> sample_uniform(CoupledSimulator& sim, const RewardConfig& reward,
                                       std::uint64_t seed, Stop stop) {
  reward.validate();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> uniform(0, sim.num_env_actions() - 1);
  auto draw = [&](CoupledSimulator&) { return EnvAction{uniform(rng)}; };
  std::vector<Trajectory> out;
  const std::uint64_t start = sim.steps_executed();
  while (!stop(out.size(), sim.steps_executed() - start)) {
    out.push_back(run_episode(sim, reward, seed, draw));
  }
  return out;
}

}  // namespace

void SearchConfig::validate() const {
  if (iterations < 1) throw ConfigError("search.iterations must be >= 1");
  if (queue_capacity < 1) throw ConfigError("search.queue_capacity must be >= 1");
  mcts.validate();
}

SearchResult adaptive_scenario_search(CoupledSimulator& sim, const SearchConfig& config,
                                      const RewardConfig& reward,
                                      const IterationObserver& observer) {
  config.validate();
  reward.validate();

  SearchResult result;
  const std::uint64_t steps_before = sim.steps_executed();
  TrajectoryQueue queue(config.queue_capacity);
  MctsSolver solver(sim.num_env_actions(), config.mcts, reward, config.seed);
  std::set<std::vector<std::size_t>> seen;

  auto choose = [&solver](CoupledSimulator& s) { return solver.get_action(s); };
  auto commit = [&solver](const StepRecord& rec) { solver.update_policy(rec.reward, rec.env_action); };

  for (std::size_t i = 0; i < config.iterations; ++i) {
    solver.begin_episode();
    Trajectory traj;
    try {
      traj = run_episode(sim, reward, config.seed, choose, commit);
    } catch (const std::exception&) {
      solver.abandon_episode();
      ++result.stats.faults;
      continue;
    }
    solver.end_episode(traj.terminal_reward);
    ++result.stats.iterations;
    if (observer) observer(i, traj);
    if (!seen.insert(action_key(traj)).second) {
      ++result.stats.duplicates;
      continue;
    }
    queue.insert(std::move(traj));
  }

  result.trajectories = queue.sorted();
  result.stats.simulation_steps = sim.steps_executed() - steps_before;
  return result;
}

std::vector<Trajectory> n_first_baseline(CoupledSimulator& sim, std::size_t n,
                                         const RewardConfig& reward, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("baseline needs n >= 1");
  return sample_uniform(sim, reward, seed,
                        [n](std::size_t produced, std::uint64_t) { return produced >= n; });
}

std::vector<Trajectory> uniform_episodes_within_budget(CoupledSimulator& sim,
                                                       std::uint64_t step_budget,
                                                       const RewardConfig& reward,
                                                       std::uint64_t seed) {
  return sample_uniform(sim, reward, seed, [step_budget](std::size_t, std::uint64_t spent) {
    return spent >= step_budget;
  });
}

Trajectory play_actions(CoupledSimulator& sim, std::span<const EnvAction> actions,
                        const RewardConfig& reward, std::uint64_t seed) {
  reward.validate();
  std::size_t next = 0;
  auto source = [&](CoupledSimulator&) {
    if (next >= actions.size()) throw InvalidInput("action sequence ended before the episode closed");
    return actions[next++];
  };
  Trajectory traj = run_episode(sim, reward, seed, source);
  if (next != actions.size()) throw InvalidInput("episode closed before the action sequence was exhausted");
  return traj;
}

const Trajectory& select_summary(std::span<const Trajectory> trajectories) {
  if (trajectories.empty()) throw InvalidInput("select_summary on an empty list");
  std::size_t best = 0;
  for (std::size_t i = 1; i < trajectories.size(); ++i) {
    if (trajectories[i].total_reward > trajectories[best].total_reward) best = i;
  }
  return trajectories[best];
}

}  // namespace contrast
