#include "contrast/trajectory_file.hpp"

#include <bit>
#include <fstream>
#include <sstream>

#include "contrast/errors.hpp"
#include "json_io.hpp"

namespace contrast {

using json_io::Json;
using crowdnav::CrowdNavEnv;
using crowdnav::CrowdSim;

namespace {

CrowdSim make_sim(const TrajectoryHeader& h) {
  return CrowdSim(CrowdNavEnv(h.dynamics), h.policies, h.agents, h.scenario);
}

CrowdFrame capture_crowd(const CrowdSim& sim) {
  CrowdFrame frame;
  for (std::size_t i = 0; i < 2; ++i) {
    for (const auto& h : sim.instance(i).humans) frame[i].push_back({h.position, h.velocity});
  }
  return frame;
}

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

template <class V>
bool same_bits(const V& a, const V& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_bits(a[i], b[i])) return false;
  }
  return true;
}

bool same_bits(const HumanSample& a, const HumanSample& b) {
  return same_bits(a.position.x, b.position.x) && same_bits(a.position.y, b.position.y) &&
         same_bits(a.velocity.x, b.velocity.x) && same_bits(a.velocity.y, b.velocity.y);
}

bool same_bits(const std::vector<HumanSample>& a, const std::vector<HumanSample>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_bits(a[i], b[i])) return false;
  }
  return true;
}

Json vector_json(std::span<const double> v) { return Json(std::vector<double>(v.begin(), v.end())); }

Json humans_json(const std::vector<HumanSample>& humans) {
  Json out = Json::array();
  for (const auto& h : humans) {
    out.push_back(Json::array({h.position.x, h.position.y, h.velocity.x, h.velocity.y}));
  }
  return out;
}

std::vector<double> numbers(const Json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string(what) + " is not an array");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) throw FormatError(std::string(what) + " has a non-numeric entry");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<HumanSample> humans_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("human states are not an array");
  std::vector<HumanSample> out;
  for (const auto& row : j) {
    const auto v = numbers(row, "human state");
    if (v.size() != 4) throw FormatError("human state needs 4 numbers");
    out.push_back({{v[0], v[1]}, {v[2], v[3]}});
  }
  return out;
}

Json header_json(const TrajectoryHeader& h) {
  Json j;
  j["format"] = kTrajectoryFormatName;
  j["version"] = h.version;
  j["config_hash"] = h.config_hash;
  j["kind"] = h.kind;
  j["seed"] = h.seed;
  j["agents"] = Json::array({h.agents[0], h.agents[1]});
  j["policies"] = Json::array({json_io::to_json(h.policies[0]), json_io::to_json(h.policies[1])});
  j["scenario"] = json_io::to_json(h.scenario);
  j["environment"] = json_io::to_json(h.dynamics);
  j["reward"] = json_io::to_json(h.reward);
  return j;
}

TrajectoryHeader header_from_json(const Json& j) {
  if (!j.is_object() || j.value("format", "") != kTrajectoryFormatName) {
    throw FormatError("not a trajectory file (bad format tag)");
  }
  TrajectoryHeader h;
  h.version = j.at("version").get<int>();
  if (h.version != kTrajectoryFormatVersion) {
    throw FormatError("unsupported trajectory format version " + std::to_string(h.version));
  }
  h.config_hash = j.at("config_hash").get<std::string>();
  h.kind = j.at("kind").get<std::string>();
  h.seed = j.at("seed").get<std::uint64_t>();
  const auto& agents = j.at("agents");
  const auto& policies = j.at("policies");
  if (agents.size() != 2 || policies.size() != 2) throw FormatError("header needs exactly two agents");
  try {
    for (std::size_t i = 0; i < 2; ++i) {
      h.agents[i] = agents[i].get<std::string>();
      h.policies[i] = json_io::policy_from_json(policies[i]);
    }
    h.scenario = json_io::scenario_from_json(j.at("scenario"));
    h.dynamics = json_io::dynamics_from_json(j.at("environment"));
    h.reward = json_io::reward_from_json(j.at("reward"), RewardConfig{}.horizon);
  } catch (const ConfigError& e) {
    throw FormatError(std::string("bad header: ") + e.what());
  }
  return h;
}

}  // namespace

TrajectoryFile make_trajectory_file(TrajectoryHeader header, Trajectory trajectory) {
  TrajectoryFile file;
  CrowdSim sim = make_sim(header);
  for (const auto& rec : trajectory.steps) {
    sim.step(rec.env_action);
    file.crowd.push_back(capture_crowd(sim));
  }
  if (!trajectory.steps.empty()) {
    const auto& last = trajectory.steps.back().agent_states;
    file.state_divergence = state_divergence(last[0], last[1]);
  }
  file.header = std::move(header);
  file.trajectory = std::move(trajectory);
  return file;
}

std::string serialize_trajectory_file(const TrajectoryFile& file) {
  const Trajectory& traj = file.trajectory;
  if (file.crowd.size() != traj.steps.size()) throw InvalidInput("crowd frames do not match the step count");
  std::ostringstream out;
  out << header_json(file.header).dump() << '\n';
  for (std::size_t k = 0; k < traj.steps.size(); ++k) {
    const StepRecord& s = traj.steps[k];
    Json rec;
    rec["t"] = s.t;
    rec["env_action"] = s.env_action.index;
    rec["reward"] = s.reward;
    rec["action_1"] = vector_json(s.agent_actions[0].values());
    rec["action_2"] = vector_json(s.agent_actions[1].values());
    rec["state_1"] = vector_json(s.agent_states[0].values());
    rec["state_2"] = vector_json(s.agent_states[1].values());
    rec["humans_1"] = humans_json(file.crowd[k][0]);
    rec["humans_2"] = humans_json(file.crowd[k][1]);
    out << rec.dump() << '\n';
  }
  Json footer;
  footer["terminal_1"] = to_string(traj.terminal_kinds[0]);
  footer["terminal_2"] = to_string(traj.terminal_kinds[1]);
  footer["terminal_reward"] = traj.terminal_reward;
  footer["total_reward"] = traj.total_reward;
  footer["state_divergence"] = file.state_divergence;
  footer["steps"] = traj.steps.size();
  out << footer.dump() << '\n';
  return out.str();
}

void write_trajectory_file(const std::filesystem::path& path, const TrajectoryFile& file) {
  const std::string text = serialize_trajectory_file(file);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write trajectory file: " + path.string());
  out << text;
  if (!out) throw Error("failed writing trajectory file: " + path.string());
}

TrajectoryFile parse_trajectory_file(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.size() < 2) throw FormatError("trajectory file needs a header and a footer");

  TrajectoryFile file;
  try {
    file.header = header_from_json(Json::parse(lines.front()));
    Trajectory& traj = file.trajectory;
    traj.seed = file.header.seed;
    traj.agents = file.header.agents;
    traj.init_state_id = file.header.scenario.id;

    for (std::size_t k = 1; k + 1 < lines.size(); ++k) {
      const Json rec = Json::parse(lines[k]);
      StepRecord s;
      s.t = rec.at("t").get<std::size_t>();
      s.env_action = EnvAction{rec.at("env_action").get<std::size_t>()};
      s.reward = rec.at("reward").get<double>();
      s.agent_actions = {ActionVector(numbers(rec.at("action_1"), "action_1")),
                         ActionVector(numbers(rec.at("action_2"), "action_2"))};
      s.agent_states = {StateVector(numbers(rec.at("state_1"), "state_1")),
                        StateVector(numbers(rec.at("state_2"), "state_2"))};
      file.crowd.push_back({humans_from_json(rec.at("humans_1")), humans_from_json(rec.at("humans_2"))});
      traj.steps.push_back(std::move(s));
    }

    const Json footer = Json::parse(lines.back());
    traj.terminal_kinds = {terminal_kind_from_string(footer.at("terminal_1").get<std::string>()),
                           terminal_kind_from_string(footer.at("terminal_2").get<std::string>())};
    traj.terminal_reward = footer.at("terminal_reward").get<double>();
    traj.total_reward = footer.at("total_reward").get<double>();
    file.state_divergence = footer.at("state_divergence").get<double>();
    if (footer.at("steps").get<std::size_t>() != traj.steps.size()) {
      throw FormatError("footer step count does not match the records");
    }
    if (!traj.reward_consistent()) throw FormatError("footer total_reward does not equal the re-summed rewards");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("corrupt trajectory record: ") + e.what());
  } catch (const InvalidInput& e) {
    throw FormatError(std::string("corrupt trajectory record: ") + e.what());
  }
  return file;
}

TrajectoryFile read_trajectory_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open trajectory file: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_trajectory_file(text.str());
}

ReplayReport replay(const TrajectoryFile& file) {
  const Trajectory& traj = file.trajectory;
  const RewardConfig& reward = file.header.reward;
  CrowdSim sim = make_sim(file.header);

  auto fail = [](std::size_t step, std::string why) {
    return ReplayReport{false, step, std::move(why)};
  };

  for (std::size_t k = 0; k < traj.steps.size(); ++k) {
    const StepRecord& rec = traj.steps[k];
    if (sim.is_terminal() || sim.step_count() >= reward.horizon) {
      return fail(k, "record present after the episode closed");
    }
    if (rec.t != k) return fail(k, "step index out of sequence");
    if (rec.env_action.index >= sim.num_env_actions()) return fail(k, "environment action out of range");
    const StepOutcome out = sim.step(rec.env_action);
    if (!same_bits(step_reward(out.actions), rec.reward)) return fail(k, "step reward differs");
    for (std::size_t i = 0; i < 2; ++i) {
      if (!same_bits(out.actions[i].values(), rec.agent_actions[i].values())) {
        return fail(k, "agent " + std::to_string(i + 1) + " action differs");
      }
      if (!same_bits(out.states[i].values(), rec.agent_states[i].values())) {
        return fail(k, "agent " + std::to_string(i + 1) + " state differs");
      }
    }
    const CrowdFrame crowd = capture_crowd(sim);
    for (std::size_t i = 0; i < 2; ++i) {
      if (!same_bits(crowd[i], file.crowd[k][i])) {
        return fail(k, "crowd state of instance " + std::to_string(i + 1) + " differs");
      }
    }
  }

  const std::size_t end = traj.steps.size();
  if (!sim.is_terminal() && sim.step_count() < reward.horizon) return fail(end, "episode did not close");
  if (sim.terminal_kinds() != traj.terminal_kinds) return fail(end, "terminal kinds differ");
  const double closing = closing_reward(sim.reward_state(), sim.step_count(), reward);
  if (!same_bits(closing, traj.terminal_reward)) return fail(end, "terminal reward differs");
  if (!same_bits(trajectory_total_reward(traj.steps, closing), traj.total_reward)) {
    return fail(end, "total reward differs");
  }
  const auto states = sim.agent_states();
  if (!same_bits(state_divergence(states[0], states[1]), file.state_divergence)) {
    return fail(end, "final state divergence differs");
  }
  return ReplayReport{true, std::nullopt, "all " + std::to_string(end) + " records match"};
}

ReplayReport replay_file(const std::filesystem::path& path) { return replay(read_trajectory_file(path)); }

}  // namespace contrast
