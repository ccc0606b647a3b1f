#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "contrast/crowdnav.hpp"
#include "contrast/divergence.hpp"
#include "contrast/types.hpp"

namespace contrast {

inline constexpr int kTrajectoryFormatVersion = 1;
inline constexpr const char* kTrajectoryFormatName = "contrast-trajectory";

/// Everything needed to re-simulate a trajectory from scratch.
struct TrajectoryHeader {
  int version = kTrajectoryFormatVersion;
  std::string config_hash;
  std::string kind;  // adaptive | baseline | bench
  std::uint64_t seed = 0;
  PerInstance<AgentId> agents;
  PerInstance<crowdnav::PolicyHandle> policies;
  crowdnav::CrowdScenario scenario;
  crowdnav::CrowdDynamics dynamics;
  RewardConfig reward;
};

/// Position and velocity of one human at one step.
struct HumanSample {
  crowdnav::Vec2 position;
  crowdnav::Vec2 velocity;
  friend bool operator==(const HumanSample&, const HumanSample&) = default;
};

using CrowdFrame = PerInstance<std::vector<HumanSample>>;

/// In-memory form of a trajectory file.
///
/// On disk: one JSON object per line. Line 1 is the header, then one record
/// per step with keys in the fixed order t, env_action, reward, action_1,
/// action_2, state_1, state_2, humans_1, humans_2, and a final footer line
/// with terminal_1, terminal_2, terminal_reward, total_reward,
/// state_divergence, steps. Doubles are written in shortest round-trip
/// decimal form, so reading a file back reproduces every value bit for bit.
struct TrajectoryFile {
  TrajectoryHeader header;
  Trajectory trajectory;
  std::vector<CrowdFrame> crowd;  // one per step, post-step
  double state_divergence = 0.0;  // d_s of the final agent states
};

/// Builds the file contents for `trajectory`, re-simulating its action
/// sequence to capture the per-instance crowd states.
TrajectoryFile make_trajectory_file(TrajectoryHeader header, Trajectory trajectory);

void write_trajectory_file(const std::filesystem::path& path, const TrajectoryFile& file);
std::string serialize_trajectory_file(const TrajectoryFile& file);

/// FormatError on unreadable files, version mismatch or corrupt records.
/// Also rejects files whose footer total disagrees with the re-summed rewards.
TrajectoryFile read_trajectory_file(const std::filesystem::path& path);
TrajectoryFile parse_trajectory_file(const std::string& text);

struct ReplayReport {
  bool pass = false;
  std::optional<std::size_t> first_divergent_step;
  std::string detail;
};

/// Re-simulates from the header and compares every record bit-exactly.
ReplayReport replay(const TrajectoryFile& file);
/// Reads then replays. Format problems propagate as FormatError.
ReplayReport replay_file(const std::filesystem::path& path);

}  // namespace contrast
