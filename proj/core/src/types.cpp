#include "contrast/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "contrast/errors.hpp"

namespace contrast {

template <class Tag>
FiniteVector<Tag>::FiniteVector(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidInput("vector entry is not finite");
  }
}

template class FiniteVector<ActionTag>;
template class FiniteVector<StateTag>;

const char* to_string(TerminalKind kind) {
  switch (kind) {
    case TerminalKind::Running: return "running";
    case TerminalKind::GoalReached: return "goal_reached";
    case TerminalKind::Collision: return "collision";
  }
  return "running";
}

TerminalKind terminal_kind_from_string(const std::string& name) {
  if (name == "running") return TerminalKind::Running;
  if (name == "goal_reached") return TerminalKind::GoalReached;
  if (name == "collision") return TerminalKind::Collision;
  throw InvalidInput("unknown terminal kind: " + name);
}

std::vector<EnvAction> Trajectory::actions() const {
  std::vector<EnvAction> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.env_action);
  return out;
}

bool Trajectory::reward_consistent() const {
  return trajectory_total_reward(steps, terminal_reward) == total_reward;
}

AgentPair::AgentPair(AgentId a, AgentId b) {
  if (a == b) throw InvalidInput("agent pair needs two distinct ids, got '" + a + "' twice");
  if (b < a) std::swap(a, b);
  first_ = std::move(a);
  second_ = std::move(b);
}

std::vector<AgentPair> enumerate_pairs(std::span<const AgentId> agent_ids) {
  if (agent_ids.size() < 2) throw InvalidInput("need at least two agents to form a pair");
  std::vector<AgentId> sorted(agent_ids.begin(), agent_ids.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidInput("duplicate agent id");
  }
  std::vector<AgentPair> pairs;
  pairs.reserve(sorted.size() * (sorted.size() - 1) / 2);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) pairs.emplace_back(sorted[i], sorted[j]);
  }
  return pairs;
}

double trajectory_total_reward(std::span<const StepRecord> steps, double terminal_reward) {
  if (!std::isfinite(terminal_reward)) throw InvalidInput("terminal reward is not finite");
  double total = 0.0;
  for (const auto& s : steps) {
    if (!std::isfinite(s.reward)) throw InvalidInput("step reward is not finite");
    total += s.reward;
  }
  return total + terminal_reward;
}

}  // namespace contrast
