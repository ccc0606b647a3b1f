#include "contrast/divergence.hpp"

#include <cmath>

#include "contrast/errors.hpp"

namespace contrast {
namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInput("divergence: vector length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

double heuristic_value(const RewardState& state, const RewardConfig& cfg) {
  switch (cfg.heuristic) {
    case Heuristic::StateDivergence:
      return state_divergence(state.agent_states[0], state.agent_states[1]);
    case Heuristic::Zero:
      return 0.0;
  }
  return 0.0;
}

}  // namespace

double action_divergence(const ActionVector& a1, const ActionVector& a2) {
  return squared_distance(a1.values(), a2.values());
}

double state_divergence(const StateVector& s1, const StateVector& s2) {
  return squared_distance(s1.values(), s2.values());
}

const char* to_string(Heuristic h) {
  switch (h) {
    case Heuristic::StateDivergence: return "state_divergence";
    case Heuristic::Zero: return "zero";
  }
  return "state_divergence";
}

Heuristic heuristic_from_string(const std::string& name) {
  if (name == "state_divergence") return Heuristic::StateDivergence;
  if (name == "zero") return Heuristic::Zero;
  throw ConfigError("unknown heuristic: " + name);
}

void RewardConfig::validate() const {
  if (!std::isfinite(alpha) || alpha < 0.0) throw ConfigError("reward.alpha must be finite and >= 0");
  if (!std::isfinite(beta) || beta < 0.0) throw ConfigError("reward.beta must be finite and >= 0");
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
}

double search_reward(const RewardState& state, const PerInstance<ActionVector>& executed_actions,
                     std::size_t step_count, const RewardConfig& cfg) {
  if (state.terminal[0] || state.terminal[1]) {
    return cfg.alpha * state_divergence(state.agent_states[0], state.agent_states[1]);
  }
  if (step_count >= cfg.horizon) return cfg.beta * heuristic_value(state, cfg);
  return action_divergence(executed_actions[0], executed_actions[1]);
}

double step_reward(const PerInstance<ActionVector>& executed_actions) {
  return action_divergence(executed_actions[0], executed_actions[1]);
}

double closing_reward(const RewardState& state, std::size_t step_count, const RewardConfig& cfg) {
  if (state.terminal[0] || state.terminal[1]) {
    return cfg.alpha * state_divergence(state.agent_states[0], state.agent_states[1]);
  }
  if (step_count >= cfg.horizon) return cfg.beta * heuristic_value(state, cfg);
  throw InvalidState("closing reward requested before terminal or horizon");
}

}  // namespace contrast
