#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "contrast/divergence.hpp"
#include "contrast/errors.hpp"
#include "contrast/types.hpp"

namespace contrast {

/// Opaque handle to a saved coupled state. Only the simulator that produced
/// it can restore it, and only until that simulator is next reset.
class SimSnapshot {
 public:
  SimSnapshot() = default;
  SimSnapshot(std::uint64_t owner, std::uint64_t epoch, std::shared_ptr<const void> data)
      : owner_(owner), epoch_(epoch), data_(std::move(data)) {}

  bool empty() const { return data_ == nullptr; }
  std::uint64_t owner() const { return owner_; }
  std::uint64_t epoch() const { return epoch_; }
  const std::shared_ptr<const void>& data() const { return data_; }

 private:
  std::uint64_t owner_ = 0;
  std::uint64_t epoch_ = 0;
  std::shared_ptr<const void> data_;
};

struct StepOutcome {
  PerInstance<ActionVector> actions;  // executed by each instance's agent
  PerInstance<StateVector> states;    // post-step agent states
};

/// Two simulation instances advanced in lockstep by one shared environment
/// action. This is the surface the search consumes; CoupledSim<Env> below is
/// the standard implementation.
class CoupledSimulator {
 public:
  virtual ~CoupledSimulator() = default;

  virtual std::size_t num_env_actions() const = 0;

  /// Return both instances to the bound initial state.
  virtual void reset() = 0;

  /// Apply `action` to both instances, then let each agent act on its own
  /// instance. Throws InvalidState when both instances are terminal and
  /// InvalidInput when the action index is out of range.
  virtual StepOutcome step(EnvAction action) = 0;

  virtual std::size_t step_count() const = 0;
  virtual PerInstance<TerminalKind> terminal_kinds() const = 0;
  virtual PerInstance<StateVector> agent_states() const = 0;

  virtual SimSnapshot snapshot() const = 0;
  /// Throws InvalidToken for snapshots from another simulator or from
  /// before the most recent reset.
  virtual void restore(const SimSnapshot& token) = 0;

  virtual const std::string& initial_state_id() const = 0;
  virtual const PerInstance<AgentId>& agent_ids() const = 0;

  /// Lifetime count of step() calls, including ones later undone by restore.
  virtual std::uint64_t steps_executed() const = 0;

  /// True iff either instance is terminal.
  bool is_terminal() const {
    const auto kinds = terminal_kinds();
    return kinds[0] != TerminalKind::Running || kinds[1] != TerminalKind::Running;
  }

  RewardState reward_state() const {
    const auto kinds = terminal_kinds();
    return RewardState{agent_states(),
                       {kinds[0] != TerminalKind::Running, kinds[1] != TerminalKind::Running}};
  }
};

/// What a single-instance environment must provide to be coupled.
template <class E>
concept CoupledEnvironment =
    std::copyable<typename E::Instance> && std::copyable<typename E::Policy> &&
    requires(const E& env, typename E::Instance& inst, const typename E::Instance& cinst,
             const typename E::InitialState& init, const typename E::Policy& policy,
             EnvAction a, const ActionVector& act) {
      { env.num_env_actions() } -> std::convertible_to<std::size_t>;
      { env.action_dim() } -> std::convertible_to<std::size_t>;
      { env.make_instance(init) } -> std::same_as<typename E::Instance>;
      { env.initial_state_id(init) } -> std::convertible_to<std::string>;
      env.apply_env_action(inst, a);
      { env.act(policy, cinst) } -> std::same_as<ActionVector>;
      env.apply_agent_action(inst, act);
      { env.terminal_kind(cinst) } -> std::same_as<TerminalKind>;
      { env.agent_state(cinst) } -> std::same_as<StateVector>;
    };

std::uint64_t next_simulator_id();

template <CoupledEnvironment Env>
class CoupledSim final : public CoupledSimulator {
 public:
  using InitialState = typename Env::InitialState;
  using Instance = typename Env::Instance;
  using Policy = typename Env::Policy;

  CoupledSim(Env env, PerInstance<Policy> policies, PerInstance<AgentId> ids, InitialState init)
      : env_(std::move(env)),
        policies_(std::move(policies)),
        ids_(std::move(ids)),
        init_(std::move(init)) {
    reset();
  }

  CoupledSim(const CoupledSim& other)
      : env_(other.env_),
        policies_(other.policies_),
        ids_(other.ids_),
        init_(other.init_),
        init_id_(other.init_id_),
        id_(next_simulator_id()),
        state_(other.state_) {}
  CoupledSim& operator=(const CoupledSim& other) {
    if (this != &other) {
      CoupledSim copy(other);
      *this = std::move(copy);
    }
    return *this;
  }
  CoupledSim(CoupledSim&&) noexcept = default;
  CoupledSim& operator=(CoupledSim&&) noexcept = default;

  std::size_t num_env_actions() const override { return env_.num_env_actions(); }

  void reset() override {
    Instance fresh = env_.make_instance(init_);
    init_id_ = env_.initial_state_id(init_);
    state_.instances = {fresh, fresh};
    state_.kinds = {TerminalKind::Running, TerminalKind::Running};
    state_.step_count = 0;
    state_.applied = {};
    ++epoch_;
  }

  /// Rebind to a new initial state, then reset.
  void reset(InitialState init) {
    init_ = std::move(init);
    reset();
  }

  StepOutcome step(EnvAction action) override {
    if (state_.kinds[0] != TerminalKind::Running && state_.kinds[1] != TerminalKind::Running) {
      throw InvalidState("step on a coupled simulator whose instances are both terminal");
    }
    if (action.index >= env_.num_env_actions()) {
      throw InvalidInput("environment action " + std::to_string(action.index) + " out of range");
    }
    ++steps_executed_;
    StepOutcome out;
    for (std::size_t i = 0; i < 2; ++i) {
      Instance& inst = state_.instances[i];
      env_.apply_env_action(inst, action);
      state_.applied[i].push_back(action);
      if (state_.kinds[i] != TerminalKind::Running) {
        // Terminal agents are frozen; the environment keeps evolving.
        out.actions[i] = ActionVector::zeros(env_.action_dim());
      } else {
        ActionVector act = env_.act(policies_[i], inst);
        env_.apply_agent_action(inst, act);
        state_.kinds[i] = env_.terminal_kind(inst);
        out.actions[i] = std::move(act);
      }
      out.states[i] = env_.agent_state(inst);
    }
    ++state_.step_count;
    return out;
  }

  std::size_t step_count() const override { return state_.step_count; }
  PerInstance<TerminalKind> terminal_kinds() const override { return state_.kinds; }
  PerInstance<StateVector> agent_states() const override {
    return {env_.agent_state(state_.instances[0]), env_.agent_state(state_.instances[1])};
  }

  SimSnapshot snapshot() const override {
    return SimSnapshot(id_, epoch_, std::make_shared<const State>(state_));
  }

  void restore(const SimSnapshot& token) override {
    if (token.empty() || token.owner() != id_) throw InvalidToken("snapshot belongs to another simulator");
    if (token.epoch() != epoch_) throw InvalidToken("snapshot predates the last reset");
    state_ = *std::static_pointer_cast<const State>(token.data());
  }

  const std::string& initial_state_id() const override { return init_id_; }
  const PerInstance<AgentId>& agent_ids() const override { return ids_; }
  std::uint64_t steps_executed() const override { return steps_executed_; }

  const Env& environment() const { return env_; }
  const InitialState& initial_state() const { return init_; }
  const Instance& instance(std::size_t i) const { return state_.instances.at(i); }
  const PerInstance<Policy>& policies() const { return policies_; }
  /// Environment actions each instance has received since reset.
  const std::vector<EnvAction>& applied_actions(std::size_t i) const { return state_.applied.at(i); }

 private:
  struct State {
    PerInstance<Instance> instances;
    PerInstance<TerminalKind> kinds{TerminalKind::Running, TerminalKind::Running};
    std::size_t step_count = 0;
    PerInstance<std::vector<EnvAction>> applied;
  };

  Env env_;
  PerInstance<Policy> policies_;
  PerInstance<AgentId> ids_;
  InitialState init_;
  std::string init_id_;
  std::uint64_t id_ = next_simulator_id();
  std::uint64_t epoch_ = 0;
  std::uint64_t steps_executed_ = 0;
  State state_;
};

}  // namespace contrast
