#include "contrast/orchestrate.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include "contrast/errors.hpp"
#include "json_io.hpp"

namespace contrast {

namespace fs = std::filesystem;
using json_io::Json;
using crowdnav::CrowdNavEnv;
using crowdnav::CrowdScenario;
using crowdnav::CrowdSim;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Agent ids end up in directory names.
std::string path_safe(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return out;
}

fs::path job_dir(const fs::path& root, const std::string& scenario, const AgentPair& pair) {
  return root / path_safe(scenario) / (path_safe(pair.first()) + "__" + path_safe(pair.second()));
}

std::string numbered(const char* stem, std::size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%02zu.jsonl", stem, i);
  return buf;
}

void write_file(const fs::path& path, const TrajectoryHeader& header, const Trajectory& traj) {
  write_trajectory_file(path, make_trajectory_file(header, traj));
}

template <class Fn>
void run_parallel(std::size_t jobs, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, jobs));
  if (workers == 1) {
    for (std::size_t i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < jobs; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(base) ^ a) ^ b);
}

CrowdSim make_crowd_sim(const RunConfig& config, const AgentSpec& first, const AgentSpec& second,
                        const CrowdScenario& scenario) {
  return CrowdSim(CrowdNavEnv(config.dynamics), {first.policy, second.policy}, {first.id, second.id},
                  scenario);
}

TrajectoryHeader make_header(const RunConfig& config, const std::string& kind, std::uint64_t seed,
                             const AgentSpec& first, const AgentSpec& second,
                             const CrowdScenario& scenario) {
  TrajectoryHeader h;
  h.config_hash = config_hash(config);
  h.kind = kind;
  h.seed = seed;
  h.agents = {first.id, second.id};
  h.policies = {first.policy, second.policy};
  h.scenario = scenario;
  h.dynamics = config.dynamics;
  h.reward = config.reward;
  return h;
}

std::string Manifest::to_json() const {
  Json j;
  j["config_hash"] = config_hash;
  Json jobs = Json::array();
  for (const auto& e : entries) {
    Json row;
    row["scenario"] = e.scenario;
    row["agents"] = Json::array({e.pair.first(), e.pair.second()});
    row["seed"] = e.seed;
    row["summary"] = e.summary_file;
    row["summary_reward"] = e.summary_reward;
    row["queue"] = e.queue_files;
    jobs.push_back(std::move(row));
  }
  j["jobs"] = std::move(jobs);
  return j.dump(2) + "\n";
}

SearchJob run_search_job(const RunConfig& config, const AgentPair& pair,
                         const CrowdScenario& scenario, std::uint64_t seed, const fs::path& out_dir) {
  const AgentSpec& a = config.agent(pair.first());
  const AgentSpec& b = config.agent(pair.second());
  CrowdSim sim = make_crowd_sim(config, a, b, scenario);
  SearchConfig search = config.search;
  search.seed = seed;

  SearchJob job{pair, scenario.id, seed, adaptive_scenario_search(sim, search, config.reward), {}};
  if (out_dir.empty() || job.result.trajectories.empty()) return job;

  const fs::path dir = job_dir(out_dir, scenario.id, pair);
  fs::create_directories(dir);
  const TrajectoryHeader header = make_header(config, "adaptive", seed, a, b, scenario);
  job.files.push_back(dir / "summary.jsonl");
  write_file(job.files.back(), header, select_summary(job.result.trajectories));
  for (std::size_t i = 0; i < job.result.trajectories.size(); ++i) {
    job.files.push_back(dir / numbered("queue", i));
    write_file(job.files.back(), header, job.result.trajectories[i]);
  }
  return job;
}

BaselineJob run_baseline_job(const RunConfig& config, const AgentPair& pair,
                             const CrowdScenario& scenario, std::uint64_t seed,
                             const fs::path& out_dir) {
  const AgentSpec& a = config.agent(pair.first());
  const AgentSpec& b = config.agent(pair.second());
  CrowdSim sim = make_crowd_sim(config, a, b, scenario);

  BaselineJob job{pair, scenario.id, seed,
                  n_first_baseline(sim, config.baseline_episodes, config.reward, seed), {}};
  if (out_dir.empty()) return job;

  const fs::path dir = job_dir(out_dir, scenario.id, pair);
  fs::create_directories(dir);
  const TrajectoryHeader header = make_header(config, "baseline", seed, a, b, scenario);
  for (std::size_t i = 0; i < job.trajectories.size(); ++i) {
    job.files.push_back(dir / numbered("baseline", i));
    write_file(job.files.back(), header, job.trajectories[i]);
  }
  return job;
}

namespace {

struct Slot {
  AgentPair pair;
  const CrowdScenario* scenario;
  std::uint64_t seed;
};

std::vector<Slot> plan_jobs(const RunConfig& config, const std::vector<AgentPair>& only) {
  config.validate();
  std::vector<AgentId> ids;
  for (const auto& a : config.agents) ids.push_back(a.id);
  const auto pairs = enumerate_pairs(ids);
  for (const auto& p : only) {
    config.agent(p.first());
    config.agent(p.second());
  }
  std::vector<Slot> slots;
  for (std::size_t s = 0; s < config.scenarios.size(); ++s) {
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      if (!only.empty() && std::find(only.begin(), only.end(), pairs[p]) == only.end()) continue;
      slots.push_back({pairs[p], &config.scenarios[s], derive_seed(config.search.seed, s, p)});
    }
  }
  return slots;
}

}  // namespace

Manifest run_all_pairs(const RunConfig& config, const std::vector<AgentPair>& only) {
  const auto slots = plan_jobs(config, only);

  const fs::path& root = config.output_dir;
  fs::create_directories(root);
  std::vector<std::optional<ManifestEntry>> done(slots.size());
  run_parallel(slots.size(), config.workers, [&](std::size_t i) {
    const Slot& slot = slots[i];
    SearchJob job = run_search_job(config, slot.pair, *slot.scenario, slot.seed, root);
    ManifestEntry e{slot.pair, slot.scenario->id, slot.seed, {}, 0.0, {}};
    if (!job.result.trajectories.empty()) {
      e.summary_reward = select_summary(job.result.trajectories).total_reward;
      e.summary_file = fs::relative(job.files.front(), root).generic_string();
      for (std::size_t f = 1; f < job.files.size(); ++f) {
        e.queue_files.push_back(fs::relative(job.files[f], root).generic_string());
      }
    }
    done[i] = std::move(e);
  });

  Manifest manifest{config_hash(config), {}};
  for (auto& e : done) manifest.entries.push_back(std::move(*e));
  std::ofstream out(root / "manifest.json", std::ios::binary);
  out << manifest.to_json();
  if (!out) throw Error("cannot write " + (root / "manifest.json").string());
  return manifest;
}

std::vector<BaselineJob> run_all_baselines(const RunConfig& config,
                                           const std::vector<AgentPair>& only) {
  const auto slots = plan_jobs(config, only);
  fs::create_directories(config.output_dir);
  std::vector<std::optional<BaselineJob>> done(slots.size());
  run_parallel(slots.size(), config.workers, [&](std::size_t i) {
    const Slot& slot = slots[i];
    done[i] = run_baseline_job(config, slot.pair, *slot.scenario, slot.seed, config.output_dir);
  });
  std::vector<BaselineJob> jobs;
  for (auto& j : done) jobs.push_back(std::move(*j));
  return jobs;
}

std::string BenchReport::text() const {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "bench: %zu episodes per agent per scenario\n", episodes);
  out += buf;
  std::snprintf(buf, sizeof buf, "%-12s %-8s", "agent", "policy");
  out += buf;
  for (const auto& s : scenarios) {
    std::snprintf(buf, sizeof buf, " %12s", s.c_str());
    out += buf;
  }
  out += "         mean\n";
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-12s %-8s", r.id.c_str(), r.policy.c_str());
    out += buf;
    for (double m : r.scenario_means) {
      std::snprintf(buf, sizeof buf, " %12.4f", m);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, " %12.4f\n", r.mean);
    out += buf;
  }
  out += "ranking:";
  for (const auto& id : ranking) out += " " + id;
  out += "\n";
  if (shipped_order_checked) {
    out += shipped_order_ok ? "shipped order lo < med < hi: ok\n"
                            : "shipped order lo < med < hi: VIOLATED\n";
  }
  return out;
}

BenchReport bench_agents(const RunConfig& config, const fs::path& persist_dir) {
  config.validate();
  if (config.bench_episodes == 0) throw ConfigError("bench.episodes must be positive");

  BenchReport report;
  report.episodes = config.bench_episodes;
  for (const auto& s : config.scenarios) report.scenarios.push_back(s.id);

  for (const auto& agent : config.agents) {
    BenchRow row{agent.id, agent.policy.name(), {}, 0.0};
    double all = 0.0;
    for (std::size_t s = 0; s < config.scenarios.size(); ++s) {
      const CrowdScenario& scenario = config.scenarios[s];
      CrowdSim sim = make_crowd_sim(config, agent, agent, scenario);
      fs::path dir;
      if (!persist_dir.empty()) {
        dir = persist_dir / path_safe(scenario.id) / path_safe(agent.id);
        fs::create_directories(dir);
      }
      double sum = 0.0;
      for (std::size_t e = 0; e < config.bench_episodes; ++e) {
        const std::uint64_t seed = derive_seed(config.bench_seed, s, e);
        const auto traj = n_first_baseline(sim, 1, config.reward, seed);
        sum += crowdnav::score_episode(traj.front(), 0, scenario);
        if (!dir.empty()) {
          write_file(dir / numbered("episode", e),
                     make_header(config, "bench", seed, agent, agent, scenario), traj.front());
        }
      }
      row.scenario_means.push_back(sum / static_cast<double>(config.bench_episodes));
      all += sum;
    }
    row.mean = all / static_cast<double>(config.bench_episodes * config.scenarios.size());
    report.rows.push_back(std::move(row));
  }

  std::vector<const BenchRow*> order;
  for (const auto& r : report.rows) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(), [](const BenchRow* a, const BenchRow* b) {
    if (a->mean != b->mean) return a->mean > b->mean;
    return a->id < b->id;
  });
  for (const auto* r : order) report.ranking.push_back(r->id);

  auto find = [&](const char* id) -> const BenchRow* {
    for (const auto& r : report.rows) {
      if (r.id == id) return &r;
    }
    return nullptr;
  };
  const BenchRow* lo = find("lo");
  const BenchRow* med = find("med");
  const BenchRow* hi = find("hi");
  if (lo && med && hi) {
    report.shipped_order_checked = true;
    report.shipped_order_ok =
        med->mean - lo->mean > kShippedOrderMinGap && hi->mean - med->mean > kShippedOrderMinGap;
  }
  return report;
}

}  // namespace contrast
