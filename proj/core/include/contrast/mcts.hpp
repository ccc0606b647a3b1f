#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "contrast/coupled_sim.hpp"
#include "contrast/divergence.hpp"
#include "contrast/types.hpp"

namespace contrast {

struct MctsConfig {
  std::size_t simulations_per_decision = 30;
  double exploration = 1.414;

  void validate() const;
};

/// Tree over environment-action prefixes. Node 0 is the initial state; the
/// child of node n under action a is the prefix of n extended by a.
class SearchTree {
 public:
  struct Edge {
    std::size_t visits = 0;
    double value_sum = 0.0;
    std::optional<std::size_t> child;

    double mean() const { return visits == 0 ? 0.0 : value_sum / static_cast<double>(visits); }
  };

  struct Node {
    std::size_t visits = 0;
    std::size_t depth = 0;
    std::optional<std::size_t> parent;
    EnvAction via;
    std::vector<Edge> edges;
  };

  explicit SearchTree(std::size_t num_actions);

  std::size_t num_actions() const { return num_actions_; }
  std::size_t size() const { return nodes_.size(); }
  const Node& node(std::size_t id) const { return nodes_.at(id); }
  const Edge& edge(std::size_t id, EnvAction a) const { return nodes_.at(id).edges.at(a.index); }

  /// Child of `id` under `a`, created on first use.
  std::size_t child(std::size_t id, EnvAction a);
  /// Node for an action prefix from the top, if it has been expanded.
  std::optional<std::size_t> find(std::span<const EnvAction> prefix) const;

  /// One backed-up return for taking `a` at `id`.
  void record(std::size_t id, EnvAction a, double value);

  /// Range of all recorded returns; equal bounds before any record.
  double min_value() const { return min_value_; }
  double max_value() const { return max_value_; }

 private:
  std::size_t num_actions_;
  std::vector<Node> nodes_;
  double min_value_ = 0.0;
  double max_value_ = 0.0;
  bool has_values_ = false;
};

struct BackupRecord {
  std::size_t node = 0;
  EnvAction action;
  double value = 0.0;
};

/// UCT solver over environment actions with uniform-random rollouts,
/// undiscounted returns and subtree reuse along the committed path.
///
/// Within an episode the caller alternates get_action / update_policy; the
/// committed path's real return is backed up by end_episode. The tree lives
/// across episodes.
class MctsSolver {
 public:
  MctsSolver(std::size_t num_actions, MctsConfig config, RewardConfig reward, std::uint64_t seed);

  /// Move the root back to the top of the tree for a fresh episode.
  void begin_episode();

  /// Runs the configured number of simulations from the current root and
  /// returns the child with the highest mean return (lowest index on ties).
  /// The simulator is restored to its entry state. Throws InvalidState if
  /// the simulator is terminal or at the horizon.
  EnvAction get_action(CoupledSimulator& sim);

  /// Commit `action` with its observed step reward and advance the root.
  void update_policy(double reward, EnvAction action);

  /// Back up the committed path's return (step rewards plus `closing_reward`).
  void end_episode(double closing_reward);

  /// Drop the committed path without touching statistics.
  void abandon_episode();

  const SearchTree& tree() const { return tree_; }
  std::size_t root() const { return root_; }

  void set_backup_logging(bool on) { log_backups_ = on; }
  const std::vector<BackupRecord>& backup_log() const { return backup_log_; }

 private:
  EnvAction select(std::size_t id) const;
  void simulate(CoupledSimulator& sim);
  void backup(std::size_t id, EnvAction a, double value);

  struct Commit {
    std::size_t node;
    EnvAction action;
    double reward;
  };

  SearchTree tree_;
  MctsConfig config_;
  RewardConfig reward_;
  std::mt19937_64 rng_;
  std::size_t root_ = 0;
  std::vector<Commit> committed_;
  bool log_backups_ = false;
  std::vector<BackupRecord> backup_log_;
};

}  // namespace contrast
