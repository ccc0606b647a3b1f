#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "contrast/run_config.hpp"
#include "contrast/search.hpp"
#include "contrast/trajectory_file.hpp"
#include "contrast/types.hpp"

namespace contrast {

/// Deterministic per-job seed from a base seed and two job coordinates.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b);

crowdnav::CrowdSim make_crowd_sim(const RunConfig& config, const AgentSpec& first,
                                  const AgentSpec& second, const crowdnav::CrowdScenario& scenario);

TrajectoryHeader make_header(const RunConfig& config, const std::string& kind, std::uint64_t seed,
                             const AgentSpec& first, const AgentSpec& second,
                             const crowdnav::CrowdScenario& scenario);

struct ManifestEntry {
  AgentPair pair;
  std::string scenario;
  std::uint64_t seed = 0;
  std::string summary_file;  // relative to the output directory
  double summary_reward = 0.0;
  std::vector<std::string> queue_files;
};

struct Manifest {
  std::string config_hash;
  std::vector<ManifestEntry> entries;

  std::string to_json() const;
};

struct SearchJob {
  AgentPair pair;
  std::string scenario;
  std::uint64_t seed = 0;
  SearchResult result;
  std::vector<std::filesystem::path> files;  // summary first, then the queue
};

/// One adaptive search for `pair` on `scenario`, persisted under
/// `out_dir/<scenario>/<first>__<second>/`. An empty out_dir skips writing.
SearchJob run_search_job(const RunConfig& config, const AgentPair& pair,
                         const crowdnav::CrowdScenario& scenario, std::uint64_t seed,
                         const std::filesystem::path& out_dir);

struct BaselineJob {
  AgentPair pair;
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<Trajectory> trajectories;  // generation order
  std::vector<std::filesystem::path> files;
};

BaselineJob run_baseline_job(const RunConfig& config, const AgentPair& pair,
                             const crowdnav::CrowdScenario& scenario, std::uint64_t seed,
                             const std::filesystem::path& out_dir);

/// One adaptive search per (agent pair, scenario), run on `config.workers`
/// threads. Writes every queue, each selected summary and manifest.json into
/// config.output_dir. Name resolution happens before any search starts.
///
/// A non-empty `only` restricts the run to those pairs; job seeds stay the
/// same as in the unrestricted run.
Manifest run_all_pairs(const RunConfig& config, const std::vector<AgentPair>& only = {});

/// N-first baseline for every (pair, scenario), same layout and seeds as
/// run_all_pairs.
std::vector<BaselineJob> run_all_baselines(const RunConfig& config,
                                           const std::vector<AgentPair>& only = {});

struct BenchRow {
  AgentId id;
  std::string policy;
  std::vector<double> scenario_means;  // config scenario order
  double mean = 0.0;                   // over all episodes
};

struct BenchReport {
  std::vector<std::string> scenarios;
  std::size_t episodes = 0;
  std::vector<BenchRow> rows;      // config agent order
  std::vector<AgentId> ranking;    // best first; ties by id
  bool shipped_order_checked = false;
  bool shipped_order_ok = true;    // lo < med < hi by overall mean, gaps > 1.0

  std::string text() const;
};

inline constexpr double kShippedOrderMinGap = 1.0;

/// `config.bench_episodes` seeded episodes per agent per scenario under
/// uniformly random environment actions. Every agent sees the same action
/// stream for a given (scenario, episode). If `persist_dir` is non-empty each
/// episode is written there as a trajectory file.
BenchReport bench_agents(const RunConfig& config, const std::filesystem::path& persist_dir = {});

}  // namespace contrast
