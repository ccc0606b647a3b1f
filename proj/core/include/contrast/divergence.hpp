#pragma once

#include <cstddef>
#include <string>

#include "contrast/types.hpp"

namespace contrast {

/// Sum of squared differences between two executed actions.
double action_divergence(const ActionVector& a1, const ActionVector& a2);

/// Sum of squared differences between two agent states.
double state_divergence(const StateVector& s1, const StateVector& s2);

enum class Heuristic {
  StateDivergence,  // h = d_s(s1, s2) at the horizon
  Zero,
};

const char* to_string(Heuristic h);
Heuristic heuristic_from_string(const std::string& name);

struct RewardConfig {
  double alpha = 10.0;
  double beta = 5.0;
  std::size_t horizon = 100;
  Heuristic heuristic = Heuristic::StateDivergence;

  // Throws ConfigError on negative or non-finite weights, or a zero horizon.
  void validate() const;
};

/// What the reward needs to know about the coupled state after a step.
struct RewardState {
  PerInstance<StateVector> agent_states;
  PerInstance<bool> terminal{false, false};
};

/// The three-branch contrast reward.
///
///   either agent terminal        -> alpha * d_s(s1, s2)
///   otherwise, step_count >= T   -> beta * h(s1, s2)
///   otherwise                    -> d_a(a1, a2)
///
/// The terminal branch wins when an agent terminates exactly at the horizon.
double search_reward(const RewardState& state, const PerInstance<ActionVector>& executed_actions,
                     std::size_t step_count, const RewardConfig& cfg);

/// Per-step reward inside an episode: the action-divergence branch.
double step_reward(const PerInstance<ActionVector>& executed_actions);

/// Reward evaluated once when an episode closes (terminal or horizon).
/// Throws InvalidState if neither closing condition holds.
double closing_reward(const RewardState& state, std::size_t step_count, const RewardConfig& cfg);

}  // namespace contrast
