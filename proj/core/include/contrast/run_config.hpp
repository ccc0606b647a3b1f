#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "contrast/crowdnav.hpp"
#include "contrast/divergence.hpp"
#include "contrast/search.hpp"
#include "contrast/types.hpp"

namespace contrast {

enum class RunMode { Adaptive, Baseline, Bench, Render, Replay };

const char* to_string(RunMode mode);
RunMode run_mode_from_string(const std::string& name);

struct AgentSpec {
  AgentId id;
  crowdnav::PolicyHandle policy;
};

/// Everything a run needs, resolved: named scenarios and policies are
/// already expanded to their full definitions.
struct RunConfig {
  RunMode mode = RunMode::Adaptive;
  std::vector<crowdnav::CrowdScenario> scenarios;
  std::vector<AgentSpec> agents;
  SearchConfig search;
  RewardConfig reward;
  crowdnav::CrowdDynamics dynamics;
  std::size_t baseline_episodes = 6;
  std::size_t bench_episodes = 100;
  std::uint64_t bench_seed = 0;
  std::filesystem::path output_dir = "out";
  std::size_t workers = 1;

  /// ConfigError if a search mode lacks a scenario or two agents, ids
  /// repeat, or any nested block is invalid.
  void validate() const;

  const AgentSpec& agent(const AgentId& id) const;
  const crowdnav::CrowdScenario& scenario(std::string_view id) const;
};

/// Parses the JSON config document. Unknown keys are rejected.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Defaults: both built-in scenarios, agents lo/med/hi.
RunConfig default_run_config();

struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_dir;
  std::vector<std::string> scenarios;  // built-in names or ids already in the config
};

void apply_overrides(RunConfig& config, const ConfigOverrides& overrides);

/// Canonical JSON of the resolved config (stable key order).
std::string canonical_config_json(const RunConfig& config);
/// 64-bit FNV-1a of canonical_config_json, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace contrast
