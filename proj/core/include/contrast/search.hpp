#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "contrast/coupled_sim.hpp"
#include "contrast/divergence.hpp"
#include "contrast/mcts.hpp"
#include "contrast/types.hpp"

namespace contrast {

/// Adaptive search parameters. The horizon T lives in RewardConfig.
struct SearchConfig {
  std::size_t iterations = 200;
  std::size_t queue_capacity = 10;
  MctsConfig mcts;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SearchStats {
  std::size_t iterations = 0;
  std::size_t faults = 0;
  std::size_t duplicates = 0;
  std::uint64_t simulation_steps = 0;  // every coupled step, rollouts included
};

struct SearchResult {
  std::vector<Trajectory> trajectories;  // descending total_reward
  SearchStats stats;
};

/// Called after each completed iteration with the iteration index and its trajectory.
using IterationObserver = std::function<void(std::size_t, const Trajectory&)>;

/// Repeatedly resets `sim` to its initial state and plays an episode with
/// environment actions chosen by a persistent UCT tree, keeping the
/// `queue_capacity` highest-reward distinct action sequences.
///
/// Each step earns the action-divergence reward; the terminal/horizon reward
/// is added once when the episode closes. An iteration whose simulator throws
/// is dropped and counted in stats.faults.
SearchResult adaptive_scenario_search(CoupledSimulator& sim, const SearchConfig& config,
                                      const RewardConfig& reward,
                                      const IterationObserver& observer = {});

/// `n` episodes with each environment action drawn uniformly at random, in
/// generation order.
std::vector<Trajectory> n_first_baseline(CoupledSimulator& sim, std::size_t n,
                                         const RewardConfig& reward, std::uint64_t seed);

/// Uniformly sampled episodes, generated until at least `step_budget` coupled
/// steps have been spent. Same stream as n_first_baseline for the same seed.
std::vector<Trajectory> uniform_episodes_within_budget(CoupledSimulator& sim,
                                                       std::uint64_t step_budget,
                                                       const RewardConfig& reward,
                                                       std::uint64_t seed);

/// Plays a fixed action sequence from the initial state. Throws InvalidInput
/// if the episode closes before the sequence is exhausted.
Trajectory play_actions(CoupledSimulator& sim, std::span<const EnvAction> actions,
                        const RewardConfig& reward, std::uint64_t seed);

/// Highest total_reward, earliest on ties. InvalidInput on an empty list.
const Trajectory& select_summary(std::span<const Trajectory> trajectories);

}  // namespace contrast
