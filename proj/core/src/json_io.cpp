#include "json_io.hpp"

#include <algorithm>

namespace contrast::json_io {

using crowdnav::Vec2;

void expect_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                 const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

Json to_json(Vec2 v) { return Json::array({v.x, v.y}); }

Vec2 vec2_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError("expected a 2-element numeric array");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

namespace {

Json human_to_json(const crowdnav::HumanState& h) {
  Json j;
  j["position"] = to_json(h.position);
  j["velocity"] = to_json(h.velocity);
  j["goal"] = to_json(h.goal);
  j["radius"] = h.radius;
  j["preferred_speed"] = h.preferred_speed;
  return j;
}

crowdnav::HumanState human_from_json(const Json& j) {
  expect_keys(j, {"position", "velocity", "goal", "radius", "preferred_speed"}, "human");
  crowdnav::HumanState h;
  h.position = vec2_from_json(j.at("position"));
  if (j.contains("velocity")) h.velocity = vec2_from_json(j.at("velocity"));
  h.goal = vec2_from_json(j.at("goal"));
  h.radius = get_or(j, "radius", h.radius);
  h.preferred_speed = get_or(j, "preferred_speed", h.preferred_speed);
  return h;
}

}  // namespace

Json to_json(const crowdnav::CrowdScenario& s) {
  Json j;
  j["id"] = s.id;
  j["arena"] = Json::array({s.arena.min_x, s.arena.min_y, s.arena.max_x, s.arena.max_y});
  j["dt"] = s.dt;
  j["goal_radius"] = s.goal_radius;
  Json robot;
  robot["position"] = to_json(s.robot.position);
  robot["velocity"] = to_json(s.robot.velocity);
  robot["goal"] = to_json(s.robot.goal);
  robot["radius"] = s.robot.radius;
  robot["max_speed"] = s.robot.max_speed;
  j["robot"] = robot;
  Json humans = Json::array();
  for (const auto& h : s.humans) humans.push_back(human_to_json(h));
  j["humans"] = humans;
  return j;
}

crowdnav::CrowdScenario scenario_from_json(const Json& j) {
  try {
    expect_keys(j, {"id", "arena", "dt", "goal_radius", "robot", "humans"}, "scenario");
    crowdnav::CrowdScenario s;
    s.id = j.at("id").get<std::string>();
    if (j.contains("arena")) {
      const auto& a = j.at("arena");
      if (!a.is_array() || a.size() != 4) throw ConfigError("scenario.arena must be [min_x, min_y, max_x, max_y]");
      s.arena = {a[0].get<double>(), a[1].get<double>(), a[2].get<double>(), a[3].get<double>()};
    }
    s.dt = get_or(j, "dt", s.dt);
    s.goal_radius = get_or(j, "goal_radius", s.goal_radius);
    const auto& r = j.at("robot");
    expect_keys(r, {"position", "velocity", "goal", "radius", "max_speed"}, "scenario.robot");
    s.robot.position = vec2_from_json(r.at("position"));
    if (r.contains("velocity")) s.robot.velocity = vec2_from_json(r.at("velocity"));
    s.robot.goal = vec2_from_json(r.at("goal"));
    s.robot.radius = get_or(r, "radius", s.robot.radius);
    s.robot.max_speed = get_or(r, "max_speed", s.robot.max_speed);
    for (const auto& h : j.at("humans")) s.humans.push_back(human_from_json(h));
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

Json to_json(const crowdnav::PolicyHandle& p) {
  const auto& prm = p.params();
  Json j;
  j["name"] = p.name();
  j["kind"] = p.kind() == crowdnav::PolicyKind::Lo ? "lo" : p.kind() == crowdnav::PolicyKind::Med ? "med" : "hi";
  Json params;
  params["sensing_range"] = prm.sensing_range;
  params["repulsion_gain"] = prm.repulsion_gain;
  params["repulsion_cutoff"] = prm.repulsion_cutoff;
  params["tangential_ratio"] = prm.tangential_ratio;
  params["ttc_horizon"] = prm.ttc_horizon;
  params["ttc_gain"] = prm.ttc_gain;
  params["ttc_margin"] = prm.ttc_margin;
  j["params"] = params;
  return j;
}

crowdnav::PolicyHandle policy_from_json(const Json& j) {
  try {
    expect_keys(j, {"name", "kind", "params"}, "policy");
    const auto kind_name = j.at("kind").get<std::string>();
    const crowdnav::PolicyHandle base = crowdnav::PolicyHandle::builtin(kind_name);
    auto prm = base.params();
    if (j.contains("params")) {
      const auto& p = j.at("params");
      expect_keys(p, {"sensing_range", "repulsion_gain", "repulsion_cutoff", "tangential_ratio",
                      "ttc_horizon", "ttc_gain", "ttc_margin"},
                  "policy.params");
      prm.sensing_range = get_or(p, "sensing_range", prm.sensing_range);
      prm.repulsion_gain = get_or(p, "repulsion_gain", prm.repulsion_gain);
      prm.repulsion_cutoff = get_or(p, "repulsion_cutoff", prm.repulsion_cutoff);
      prm.tangential_ratio = get_or(p, "tangential_ratio", prm.tangential_ratio);
      prm.ttc_horizon = get_or(p, "ttc_horizon", prm.ttc_horizon);
      prm.ttc_gain = get_or(p, "ttc_gain", prm.ttc_gain);
      prm.ttc_margin = get_or(p, "ttc_margin", prm.ttc_margin);
    }
    return crowdnav::PolicyHandle(get_or<std::string>(j, "name", kind_name), base.kind(), prm);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("policy: ") + e.what());
  }
}

Json to_json(const crowdnav::CrowdDynamics& d) {
  Json j;
  j["heading_offsets_deg"] = d.heading_offsets_deg;
  j["relaxation_time"] = d.relaxation_time;
  j["human_repulsion_strength"] = d.human_repulsion_strength;
  j["human_repulsion_range"] = d.human_repulsion_range;
  j["robot_repulsion_strength"] = d.robot_repulsion_strength;
  j["robot_repulsion_range"] = d.robot_repulsion_range;
  j["max_speed_factor"] = d.max_speed_factor;
  return j;
}

crowdnav::CrowdDynamics dynamics_from_json(const Json& j) {
  expect_keys(j, {"heading_offsets_deg", "relaxation_time", "human_repulsion_strength",
                  "human_repulsion_range", "robot_repulsion_strength", "robot_repulsion_range",
                  "max_speed_factor"},
              "environment");
  crowdnav::CrowdDynamics d;
  d.heading_offsets_deg = get_or(j, "heading_offsets_deg", d.heading_offsets_deg);
  d.relaxation_time = get_or(j, "relaxation_time", d.relaxation_time);
  d.human_repulsion_strength = get_or(j, "human_repulsion_strength", d.human_repulsion_strength);
  d.human_repulsion_range = get_or(j, "human_repulsion_range", d.human_repulsion_range);
  d.robot_repulsion_strength = get_or(j, "robot_repulsion_strength", d.robot_repulsion_strength);
  d.robot_repulsion_range = get_or(j, "robot_repulsion_range", d.robot_repulsion_range);
  d.max_speed_factor = get_or(j, "max_speed_factor", d.max_speed_factor);
  if (d.heading_offsets_deg.empty()) throw ConfigError("environment.heading_offsets_deg is empty");
  if (!(d.relaxation_time > 0.0)) throw ConfigError("environment.relaxation_time must be > 0");
  return d;
}

Json to_json(const RewardConfig& r) {
  Json j;
  j["alpha"] = r.alpha;
  j["beta"] = r.beta;
  j["horizon"] = r.horizon;
  j["heuristic"] = to_string(r.heuristic);
  return j;
}

RewardConfig reward_from_json(const Json& j, std::size_t default_horizon) {
  expect_keys(j, {"alpha", "beta", "horizon", "heuristic"}, "reward");
  RewardConfig r;
  r.horizon = default_horizon;
  r.alpha = get_or(j, "alpha", r.alpha);
  r.beta = get_or(j, "beta", r.beta);
  r.horizon = get_or(j, "horizon", r.horizon);
  r.heuristic = heuristic_from_string(get_or<std::string>(j, "heuristic", to_string(r.heuristic)));
  r.validate();
  return r;
}

}  // namespace contrast::json_io
