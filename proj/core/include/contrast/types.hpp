#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace contrast {

/// A finite real vector of fixed length. Construction rejects NaN and Inf.
///
/// ActionVector and StateVector share this representation but are distinct
/// types so an agent's action can never be passed where a state is expected.
template <class Tag>
class FiniteVector {
 public:
  FiniteVector() = default;
  explicit FiniteVector(std::vector<double> values);
  FiniteVector(std::initializer_list<double> values)
      : FiniteVector(std::vector<double>(values)) {}

  static FiniteVector zeros(std::size_t n) { return FiniteVector(std::vector<double>(n, 0.0)); }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const FiniteVector&, const FiniteVector&) = default;

 private:
  std::vector<double> values_;
};

struct ActionTag {};
struct StateTag {};

/// Agent action (continuous, length m). For crowd navigation: a velocity command in m/s.
using ActionVector = FiniteVector<ActionTag>;
/// Agent state used for divergence (length n). For crowd navigation: robot position in m.
using StateVector = FiniteVector<StateTag>;

/// Index into the environment's discrete perturbation set.
struct EnvAction {
  std::size_t index = 0;
  friend bool operator==(EnvAction, EnvAction) = default;
};

enum class TerminalKind { Running, GoalReached, Collision };

const char* to_string(TerminalKind kind);
TerminalKind terminal_kind_from_string(const std::string& name);

template <class T>
using PerInstance = std::array<T, 2>;

struct StepRecord {
  std::size_t t = 0;
  EnvAction env_action;
  double reward = 0.0;
  PerInstance<ActionVector> agent_actions;
  PerInstance<StateVector> agent_states;  // post-step
};

using AgentId = std::string;

/// An environment-action sequence and the rewards it earned from a fixed
/// initial state.
struct Trajectory {
  std::vector<StepRecord> steps;
  double terminal_reward = 0.0;
  double total_reward = 0.0;
  std::uint64_t seed = 0;
  PerInstance<AgentId> agents;  // instance order
  std::string init_state_id;
  PerInstance<TerminalKind> terminal_kinds{TerminalKind::Running, TerminalKind::Running};

  std::vector<EnvAction> actions() const;
  // Re-sums step rewards and compares against total_reward exactly.
  bool reward_consistent() const;
};

/// Unordered agent pair in canonical (lexicographic) order.
class AgentPair {
 public:
  AgentPair(AgentId a, AgentId b);

  const AgentId& first() const { return first_; }
  const AgentId& second() const { return second_; }

  friend bool operator==(const AgentPair&, const AgentPair&) = default;

 private:
  AgentId first_;
  AgentId second_;
};

/// All N(N-1)/2 unique pairs, lexicographically ordered.
std::vector<AgentPair> enumerate_pairs(std::span<const AgentId> agent_ids);

double trajectory_total_reward(std::span<const StepRecord> steps, double terminal_reward);

}  // namespace contrast
