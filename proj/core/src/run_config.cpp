#include "contrast/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json_io.hpp"

namespace contrast {

using json_io::Json;
using json_io::expect_keys;
using json_io::get_or;

const char* to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Adaptive: return "adaptive";
    case RunMode::Baseline: return "baseline";
    case RunMode::Bench: return "bench";
    case RunMode::Render: return "render";
    case RunMode::Replay: return "replay";
  }
  return "adaptive";
}

RunMode run_mode_from_string(const std::string& name) {
  if (name == "adaptive") return RunMode::Adaptive;
  if (name == "baseline") return RunMode::Baseline;
  if (name == "bench") return RunMode::Bench;
  if (name == "render") return RunMode::Render;
  if (name == "replay") return RunMode::Replay;
  throw ConfigError("unknown mode: " + name);
}

void RunConfig::validate() const {
  const bool search_mode = mode == RunMode::Adaptive || mode == RunMode::Baseline;
  if (search_mode && scenarios.empty()) throw ConfigError("at least one scenario is required");
  if (search_mode && agents.size() < 2) throw ConfigError("at least two agents are required");
  if (mode == RunMode::Bench && (agents.size() < 2 || scenarios.empty())) {
    throw ConfigError("bench needs at least two agents and one scenario");
  }
  std::set<AgentId> ids;
  for (const auto& a : agents) {
    if (a.id.empty()) throw ConfigError("agent id is empty");
    if (!ids.insert(a.id).second) throw ConfigError("duplicate agent id: " + a.id);
  }
  std::set<std::string> scenario_ids;
  for (const auto& s : scenarios) {
    s.validate();
    if (!scenario_ids.insert(s.id).second) throw ConfigError("duplicate scenario id: " + s.id);
  }
  search.validate();
  reward.validate();
  if (dynamics.heading_offsets_deg.empty()) throw ConfigError("environment action set is empty");
  if (baseline_episodes < 1) throw ConfigError("baseline.episodes must be >= 1");
  if (bench_episodes < 1) throw ConfigError("bench.episodes must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
}

const AgentSpec& RunConfig::agent(const AgentId& id) const {
  for (const auto& a : agents) {
    if (a.id == id) return a;
  }
  throw ConfigError("unknown agent: " + id);
}

const crowdnav::CrowdScenario& RunConfig::scenario(std::string_view id) const {
  for (const auto& s : scenarios) {
    if (s.id == id) return s;
  }
  throw ConfigError("unknown scenario: " + std::string(id));
}

RunConfig default_run_config() {
  RunConfig c;
  for (const auto& name : crowdnav::builtin_scenario_names()) c.scenarios.push_back(crowdnav::builtin_scenario(name));
  for (const char* p : {"lo", "med", "hi"}) c.agents.push_back({p, crowdnav::PolicyHandle::builtin(p)});
  return c;
}

RunConfig parse_run_config(std::string_view json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  expect_keys(doc,
              {"mode", "output_dir", "workers", "scenarios", "agents", "horizon", "search", "reward",
               "environment", "baseline", "bench"},
              "config");

  RunConfig c;
  try {
    c.mode = run_mode_from_string(get_or<std::string>(doc, "mode", "adaptive"));
    c.output_dir = get_or<std::string>(doc, "output_dir", c.output_dir.string());
    c.workers = get_or<std::size_t>(doc, "workers", c.workers);

    if (doc.contains("scenarios")) {
      for (const auto& s : doc.at("scenarios")) {
        if (s.is_string()) {
          c.scenarios.push_back(crowdnav::builtin_scenario(s.get<std::string>()));
        } else {
          c.scenarios.push_back(json_io::scenario_from_json(s));
        }
      }
    } else {
      for (const auto& name : crowdnav::builtin_scenario_names()) c.scenarios.push_back(crowdnav::builtin_scenario(name));
    }

    if (doc.contains("agents")) {
      for (const auto& a : doc.at("agents")) {
        if (a.is_string()) {
          const auto name = a.get<std::string>();
          c.agents.push_back({name, crowdnav::PolicyHandle::builtin(name)});
        } else {
          expect_keys(a, {"id", "policy", "params"}, "agent");
          Json policy;
          if (a.at("policy").is_object()) {
            // Canonical form: the policy is spelled out in full.
            if (a.contains("params")) throw ConfigError("agent: params belong inside the policy object");
            policy = a.at("policy");
          } else {
            policy["name"] = a.at("policy");
            policy["kind"] = a.at("policy");
            if (a.contains("params")) policy["params"] = a.at("params");
          }
          c.agents.push_back({a.at("id").get<std::string>(), json_io::policy_from_json(policy)});
        }
      }
    } else {
      for (const char* p : {"lo", "med", "hi"}) c.agents.push_back({p, crowdnav::PolicyHandle::builtin(p)});
    }

    const auto horizon = get_or<std::size_t>(doc, "horizon", c.reward.horizon);
    c.reward = json_io::reward_from_json(doc.value("reward", Json::object()), horizon);

    const Json search = doc.value("search", Json::object());
    expect_keys(search,
                {"iterations", "queue_capacity", "simulations_per_decision", "exploration", "seed"},
                "search");
    c.search.iterations = get_or(search, "iterations", c.search.iterations);
    c.search.queue_capacity = get_or(search, "queue_capacity", c.search.queue_capacity);
    c.search.mcts.simulations_per_decision =
        get_or(search, "simulations_per_decision", c.search.mcts.simulations_per_decision);
    c.search.mcts.exploration = get_or(search, "exploration", c.search.mcts.exploration);
    c.search.seed = get_or(search, "seed", c.search.seed);

    c.dynamics = json_io::dynamics_from_json(doc.value("environment", Json::object()));

    const Json baseline = doc.value("baseline", Json::object());
    expect_keys(baseline, {"episodes"}, "baseline");
    c.baseline_episodes = get_or(baseline, "episodes", c.baseline_episodes);

    const Json bench = doc.value("bench", Json::object());
    expect_keys(bench, {"episodes", "seed"}, "bench");
    c.bench_episodes = get_or(bench, "episodes", c.bench_episodes);
    c.bench_seed = get_or(bench, "seed", c.bench_seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str());
}

void apply_overrides(RunConfig& config, const ConfigOverrides& overrides) {
  if (overrides.seed) {
    config.search.seed = *overrides.seed;
    config.bench_seed = *overrides.seed;
  }
  if (overrides.output_dir) config.output_dir = *overrides.output_dir;
  if (!overrides.scenarios.empty()) {
    std::vector<crowdnav::CrowdScenario> chosen;
    for (const auto& name : overrides.scenarios) {
      bool found = false;
      for (const auto& s : config.scenarios) {
        if (s.id == name) {
          chosen.push_back(s);
          found = true;
          break;
        }
      }
      if (!found) chosen.push_back(crowdnav::builtin_scenario(name));
    }
    config.scenarios = std::move(chosen);
  }
  config.validate();
}

std::string canonical_config_json(const RunConfig& c) {
  Json j;
  Json scenarios = Json::array();
  for (const auto& s : c.scenarios) scenarios.push_back(json_io::to_json(s));
  j["scenarios"] = scenarios;
  Json agents = Json::array();
  for (const auto& a : c.agents) {
    Json agent;
    agent["id"] = a.id;
    agent["policy"] = json_io::to_json(a.policy);
    agents.push_back(agent);
  }
  j["agents"] = agents;
  j["reward"] = json_io::to_json(c.reward);
  Json search;
  search["iterations"] = c.search.iterations;
  search["queue_capacity"] = c.search.queue_capacity;
  search["simulations_per_decision"] = c.search.mcts.simulations_per_decision;
  search["exploration"] = c.search.mcts.exploration;
  search["seed"] = c.search.seed;
  j["search"] = search;
  j["environment"] = json_io::to_json(c.dynamics);
  j["baseline"] = {{"episodes", c.baseline_episodes}};
  j["bench"] = {{"episodes", c.bench_episodes}, {"seed", c.bench_seed}};
  return j.dump();
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : canonical_config_json(config)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace contrast
