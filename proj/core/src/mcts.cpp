#include "contrast/mcts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "contrast/errors.hpp"

namespace contrast {

void MctsConfig::validate() const {
  if (simulations_per_decision < 1) throw ConfigError("mcts.simulations_per_decision must be >= 1");
  if (!(exploration > 0.0) || !std::isfinite(exploration)) throw ConfigError("mcts.exploration must be > 0");
}

SearchTree::SearchTree(std::size_t num_actions) : num_actions_(num_actions) {
  if (num_actions_ == 0) throw InvalidInput("search tree needs at least one action");
  Node top;
  top.edges.resize(num_actions_);
  nodes_.push_back(std::move(top));
}

std::size_t SearchTree::child(std::size_t id, EnvAction a) {
  if (a.index >= num_actions_) throw InvalidInput("action out of range for search tree");
  if (auto existing = nodes_.at(id).edges[a.index].child) return *existing;
  Node n;
  n.depth = nodes_[id].depth + 1;
  n.parent = id;
  n.via = a;
  n.edges.resize(num_actions_);
  nodes_.push_back(std::move(n));
  const std::size_t created = nodes_.size() - 1;
  nodes_[id].edges[a.index].child = created;
  return created;
}

std::optional<std::size_t> SearchTree::find(std::span<const EnvAction> prefix) const {
  std::size_t id = 0;
  for (EnvAction a : prefix) {
    if (a.index >= num_actions_) return std::nullopt;
    const auto& next = nodes_[id].edges[a.index].child;
    if (!next) return std::nullopt;
    id = *next;
  }
  return id;
}

void SearchTree::record(std::size_t id, EnvAction a, double value) {
  Node& n = nodes_.at(id);
  Edge& e = n.edges.at(a.index);
  ++n.visits;
  ++e.visits;
  e.value_sum += value;
  if (!has_values_) {
    min_value_ = max_value_ = value;
    has_values_ = true;
  } else {
    min_value_ = std::min(min_value_, value);
    max_value_ = std::max(max_value_, value);
  }
}

MctsSolver::MctsSolver(std::size_t num_actions, MctsConfig config, RewardConfig reward,
                       std::uint64_t seed)
    : tree_(num_actions), config_(config), reward_(reward), rng_(seed) {
  config_.validate();
  reward_.validate();
}

void MctsSolver::begin_episode() {
  root_ = 0;
  committed_.clear();
}

EnvAction MctsSolver::select(std::size_t id) const {
  const auto& node = tree_.node(id);
  for (std::size_t a = 0; a < node.edges.size(); ++a) {
    if (node.edges[a].visits == 0) return EnvAction{a};
  }
  // Child means are scaled into [0, 1] by their own range at this node, so
  // the exploration constant does not depend on the reward scale and a few
  // huge terminal returns elsewhere in the tree do not flatten the choice.
  double lo = node.edges[0].mean();
  double hi = lo;
  for (const auto& e : node.edges) {
    lo = std::min(lo, e.mean());
    hi = std::max(hi, e.mean());
  }
  const double span = hi - lo;
  const double log_n = std::log(static_cast<double>(node.visits));
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < node.edges.size(); ++a) {
    const auto& e = node.edges[a];
    const double q = span > 0.0 ? (e.mean() - lo) / span : 0.0;
    const double score = q + config_.exploration * std::sqrt(log_n / static_cast<double>(e.visits));
    if (score > best_score) {
      best_score = score;
      best = a;
    }
  }
  return EnvAction{best};
}

void MctsSolver::backup(std::size_t id, EnvAction a, double value) {
  tree_.record(id, a, value);
  if (log_backups_) backup_log_.push_back({id, a, value});
}

void MctsSolver::simulate(CoupledSimulator& sim) {
  const std::size_t horizon = reward_.horizon;
  auto finished = [&] { return sim.is_terminal() || sim.step_count() >= horizon; };

  std::vector<Commit> path;
  std::size_t id = root_;
  while (!finished()) {
    const EnvAction a = select(id);
    const bool existed = tree_.edge(id, a).child.has_value();
    const StepOutcome out = sim.step(a);
    path.push_back({id, a, step_reward(out.actions)});
    id = tree_.child(id, a);
    if (!existed) break;
  }

  double rollout = 0.0;
  std::uniform_int_distribution<std::size_t> uniform(0, tree_.num_actions() - 1);
  while (!finished()) {
    const StepOutcome out = sim.step(EnvAction{uniform(rng_)});
    rollout += step_reward(out.actions);
  }

  double ret = rollout + closing_reward(sim.reward_state(), sim.step_count(), reward_);
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    ret += it->reward;
    backup(it->node, it->action, ret);
  }
}

EnvAction MctsSolver::get_action(CoupledSimulator& sim) {
  if (sim.is_terminal()) throw InvalidState("get_action on a terminal simulator");
  if (sim.step_count() >= reward_.horizon) throw InvalidState("get_action at the horizon");
  if (sim.num_env_actions() != tree_.num_actions()) throw InvalidInput("simulator action count does not match the tree");
  if (tree_.num_actions() == 1) return EnvAction{0};

  const SimSnapshot token = sim.snapshot();
  for (std::size_t k = 0; k < config_.simulations_per_decision; ++k) {
    simulate(sim);
    sim.restore(token);
  }

  const auto& node = tree_.node(root_);
  std::optional<std::size_t> best;
  for (std::size_t a = 0; a < node.edges.size(); ++a) {
    if (node.edges[a].visits == 0) continue;
    if (!best || node.edges[a].mean() > node.edges[*best].mean()) best = a;
  }
  return EnvAction{best.value_or(0)};
}

void MctsSolver::update_policy(double reward, EnvAction action) {
  committed_.push_back({root_, action, reward});
  root_ = tree_.child(root_, action);
}

void MctsSolver::end_episode(double closing) {
  double ret = closing;
  for (auto it = committed_.rbegin(); it != committed_.rend(); ++it) {
    ret += it->reward;
    backup(it->node, it->action, ret);
  }
  begin_episode();
}

void MctsSolver::abandon_episode() { begin_episode(); }

}  // namespace contrast
