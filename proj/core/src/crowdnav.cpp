#include "contrast/crowdnav.hpp"

#include <algorithm>
#include <numbers>

#include "contrast/errors.hpp"

namespace contrast::crowdnav {
namespace {

constexpr double kTiny = 1e-12;

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

// Result norm is guaranteed <= max_norm, rounding included.
Vec2 clip_norm(Vec2 v, double max_norm) {
  const double n = v.norm();
  if (!(n > max_norm) || n <= 0.0) return v;
  double scale = max_norm / n;
  Vec2 out = v * scale;
  while (out.norm() > max_norm) {
    scale = std::nextafter(scale, 0.0);
    out = v * scale;
  }
  return out;
}

// Clamps a disc of `radius` into the arena and zeroes the velocity component
// that pushed it out.
void clamp_to_arena(Vec2& position, Vec2& velocity, double radius, const Arena& arena) {
  const double lo_x = arena.min_x + radius;
  const double hi_x = arena.max_x - radius;
  const double lo_y = arena.min_y + radius;
  const double hi_y = arena.max_y - radius;
  if (position.x < lo_x) {
    position.x = lo_x;
    velocity.x = std::max(velocity.x, 0.0);
  } else if (position.x > hi_x) {
    position.x = hi_x;
    velocity.x = std::min(velocity.x, 0.0);
  }
  if (position.y < lo_y) {
    position.y = lo_y;
    velocity.y = std::max(velocity.y, 0.0);
  } else if (position.y > hi_y) {
    position.y = hi_y;
    velocity.y = std::min(velocity.y, 0.0);
  }
}

Vec2 social_repulsion(Vec2 self, double self_radius, Vec2 other, double other_radius,
                      double strength, double range) {
  const Vec2 away = self - other;
  const double dist = away.norm();
  const double reach = self_radius + other_radius;
  if (dist > reach + 12.0 * range) return {};
  // Coincident centres push along +x; deterministic, and never hit in practice.
  const Vec2 n = dist > kTiny ? away / dist : Vec2{1.0, 0.0};
  return n * (strength * std::exp((reach - dist) / range));
}

HumanState make_human(double angle_deg, double radius_m, double goal_twist_deg, double speed) {
  HumanState h;
  const double a = deg_to_rad(angle_deg);
  const double g = a + std::numbers::pi + deg_to_rad(goal_twist_deg);
  h.position = {radius_m * std::cos(a), radius_m * std::sin(a)};
  h.goal = {radius_m * std::cos(g), radius_m * std::sin(g)};
  h.radius = 0.3;
  h.preferred_speed = speed;
  return h;
}

// Circle-crossing crowd: humans start on a ring and walk to a point near the
// opposite side, so every path passes close to the arena centre where the
// robot's diagonal crosses.
std::vector<HumanState> ring_crowd(double phase_deg, double twist_deg) {
  static constexpr double kSpeeds[kHumanCount] = {0.8, 0.6, 0.9, 0.7, 1.0,
                                                  0.65, 0.85, 0.75, 0.95, 0.7};
  static constexpr double kRadii[kHumanCount] = {4.0, 4.6, 3.6, 4.3, 4.8,
                                                 3.8, 4.4, 4.1, 3.5, 4.7};
  std::vector<HumanState> humans;
  humans.reserve(kHumanCount);
  for (std::size_t i = 0; i < kHumanCount; ++i) {
    humans.push_back(make_human(phase_deg + 36.0 * static_cast<double>(i), kRadii[i], twist_deg,
                                kSpeeds[i]));
  }
  return humans;
}

}  // namespace

Vec2 unit_or_zero(Vec2 v) {
  const double n = v.norm();
  return n > kTiny ? v / n : Vec2{};
}

void CrowdScenario::validate() const {
  auto fail = [this](const std::string& what) {
    throw ConfigError("scenario '" + id + "': " + what);
  };
  if (id.empty()) throw ConfigError("scenario id is empty");
  if (!(arena.max_x > arena.min_x) || !(arena.max_y > arena.min_y)) fail("degenerate arena");
  if (humans.size() != kHumanCount) fail("expected exactly 10 humans");
  if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be positive");
  if (!(goal_radius > 0.0) || !std::isfinite(goal_radius)) fail("goal radius must be positive");
  if (!(robot.radius > 0.0) || !(robot.max_speed > 0.0)) fail("robot radius and max speed must be positive");
  if (!finite(robot.position) || !finite(robot.goal) || !finite(robot.velocity)) fail("robot has non-finite values");
  if (robot.velocity.norm() > robot.max_speed) fail("robot initial speed exceeds max speed");
  if ((robot.position - robot.goal).norm() <= goal_radius) fail("robot starts inside the goal radius");

  auto inside = [this](Vec2 p, double r) {
    return p.x - r >= arena.min_x && p.x + r <= arena.max_x && p.y - r >= arena.min_y &&
           p.y + r <= arena.max_y;
  };
  if (!inside(robot.position, robot.radius)) fail("robot starts outside the arena");
  for (std::size_t i = 0; i < humans.size(); ++i) {
    const auto& h = humans[i];
    const std::string tag = "human " + std::to_string(i) + ": ";
    if (!(h.radius > 0.0) || !(h.preferred_speed > 0.0)) fail(tag + "radius and preferred speed must be positive");
    if (!finite(h.position) || !finite(h.goal) || !finite(h.velocity)) fail(tag + "non-finite values");
    if (!inside(h.position, h.radius)) fail(tag + "starts outside the arena");
    if ((h.position - robot.position).norm() <= h.radius + robot.radius) fail(tag + "overlaps the robot");
    for (std::size_t j = i + 1; j < humans.size(); ++j) {
      if ((h.position - humans[j].position).norm() <= h.radius + humans[j].radius) {
        fail(tag + "overlaps human " + std::to_string(j));
      }
    }
  }
}

CrowdScenario builtin_scenario(std::string_view name) {
  CrowdScenario s;
  s.id = std::string(name);
  s.robot.radius = 0.3;
  s.robot.max_speed = 1.0;
  if (name == "corner-NE") {
    s.robot.position = {-5.0, -5.0};
    s.robot.goal = {5.0, 5.0};
    s.humans = ring_crowd(10.0, 18.0);
  } else if (name == "corner-SE") {
    s.robot.position = {-5.0, 5.0};
    s.robot.goal = {5.0, -5.0};
    s.humans = ring_crowd(-8.0, -16.0);
  } else {
    throw ConfigError("unknown built-in scenario: " + std::string(name));
  }
  return s;
}

std::vector<std::string> builtin_scenario_names() { return {"corner-NE", "corner-SE"}; }

std::vector<EnvActionDescriptor> env_action_set(const CrowdDynamics& dynamics) {
  std::vector<EnvActionDescriptor> out;
  out.reserve(dynamics.heading_offsets_deg.size());
  for (std::size_t i = 0; i < dynamics.heading_offsets_deg.size(); ++i) {
    out.push_back({EnvAction{i}, dynamics.heading_offsets_deg[i]});
  }
  return out;
}

Vec2 preferred_velocity(const HumanState& human, double heading_offset_rad, double dt) {
  const Vec2 to_goal = human.goal - human.position;
  const double dist = to_goal.norm();
  if (dist <= kTiny) return {};
  const double speed = std::min(human.preferred_speed, dist / dt);
  return (to_goal / dist).rotated(heading_offset_rad) * speed;
}

std::vector<HumanState> step_humans(std::span<const HumanState> humans, const RobotState& robot,
                                    EnvAction action, const CrowdDynamics& dynamics,
                                    const Arena& arena, double dt) {
  if (action.index >= dynamics.heading_offsets_deg.size()) {
    throw InvalidInput("environment action " + std::to_string(action.index) + " out of range");
  }
  const double offset = deg_to_rad(dynamics.heading_offsets_deg[action.index]);
  std::vector<HumanState> next(humans.begin(), humans.end());
  for (std::size_t i = 0; i < humans.size(); ++i) {
    const HumanState& h = humans[i];
    Vec2 accel = (preferred_velocity(h, offset, dt) - h.velocity) / dynamics.relaxation_time;
    for (std::size_t j = 0; j < humans.size(); ++j) {
      if (j == i) continue;
      accel += social_repulsion(h.position, h.radius, humans[j].position, humans[j].radius,
                                dynamics.human_repulsion_strength, dynamics.human_repulsion_range);
    }
    accel += social_repulsion(h.position, h.radius, robot.position, robot.radius,
                              dynamics.robot_repulsion_strength, dynamics.robot_repulsion_range);
    Vec2 v = clip_norm(h.velocity + accel * dt, dynamics.max_speed_factor * h.preferred_speed);
    Vec2 p = h.position + v * dt;
    clamp_to_arena(p, v, h.radius, arena);
    next[i].position = p;
    next[i].velocity = v;
  }
  return next;
}

TerminalKind check_terminal(const RobotState& robot, std::span<const HumanState> humans,
                            double goal_radius) {
  if ((robot.position - robot.goal).norm() <= goal_radius) return TerminalKind::GoalReached;
  for (const auto& h : humans) {
    if ((robot.position - h.position).norm() <= robot.radius + h.radius) return TerminalKind::Collision;
  }
  return TerminalKind::Running;
}

PolicyHandle::PolicyHandle(std::string name, PolicyKind kind, Params params)
    : name_(std::move(name)), kind_(kind), params_(params) {}

PolicyHandle PolicyHandle::builtin(std::string_view name) {
  if (name == "lo") return PolicyHandle("lo", PolicyKind::Lo, Params{});
  if (name == "med") {
    Params p;
    p.repulsion_gain = 0.1;
    p.repulsion_cutoff = 0.6;
    return PolicyHandle("med", PolicyKind::Med, p);
  }
  if (name == "hi") {
    Params p;
    p.repulsion_gain = 0.35;
    p.repulsion_cutoff = 0.6;
    p.ttc_gain = 1.2;
    p.ttc_horizon = 2.5;
    return PolicyHandle("hi", PolicyKind::Hi, p);
  }
  throw ConfigError("unknown policy: " + std::string(name));
}

ActionVector PolicyHandle::act(const Observation& obs) const {
  const RobotState& robot = obs.robot;
  const Vec2 desired = unit_or_zero(robot.goal - robot.position) * robot.max_speed;
  Vec2 command = desired;

  if (kind_ == PolicyKind::Med || kind_ == PolicyKind::Hi) {
    for (const auto& h : obs.humans) {
      const Vec2 away = robot.position - h.position;
      const double dist = away.norm();
      if (dist > params_.sensing_range || dist <= kTiny) continue;
      const double gap = dist - (robot.radius + h.radius);
      if (gap >= params_.repulsion_cutoff) continue;
      const Vec2 n = away / dist;
      const double w =
          params_.repulsion_gain * (1.0 / std::max(gap, 0.05) - 1.0 / params_.repulsion_cutoff);
      command += (n + n.right() * params_.tangential_ratio) * w;
    }
  }
  if (kind_ == PolicyKind::Hi) {
    for (const auto& h : obs.humans) {
      const Vec2 rel = h.position - robot.position;
      const double dist = rel.norm();
      if (dist > params_.sensing_range) continue;
      const Vec2 rel_v = h.velocity - desired;
      const double reach = robot.radius + h.radius + params_.ttc_margin;
      const double c = rel.dot(rel) - reach * reach;
      double ttc = -1.0;
      if (c < 0.0) {
        ttc = 0.0;
      } else {
        const double a = rel_v.dot(rel_v);
        const double b = rel.dot(rel_v);
        const double disc = b * b - a * c;
        if (a > kTiny && b < 0.0 && disc > 0.0) ttc = (-b - std::sqrt(disc)) / a;
      }
      if (ttc < 0.0 || ttc >= params_.ttc_horizon) continue;
      Vec2 n = unit_or_zero(-(rel + rel_v * ttc));
      if (n == Vec2{}) n = unit_or_zero(-rel);
      const double urgency = (params_.ttc_horizon - ttc) / (params_.ttc_horizon * (ttc + 0.25));
      command += (n + n.right() * params_.tangential_ratio) * (params_.ttc_gain * urgency);
    }
  }

  command = clip_norm(command, robot.max_speed);
  return ActionVector{command.x, command.y};
}

double score_episode(Vec2 start, Vec2 final_position, Vec2 goal, std::size_t steps,
                     TerminalKind outcome, const ScoreWeights& weights) {
  double score = weights.per_step * static_cast<double>(steps);
  score += weights.progress * ((start - goal).norm() - (final_position - goal).norm());
  if (outcome == TerminalKind::GoalReached) score += weights.success;
  if (outcome == TerminalKind::Collision) score += weights.collision;
  return score;
}

double score_episode(const Trajectory& trajectory, std::size_t instance,
                     const CrowdScenario& scenario, const ScoreWeights& weights) {
  if (instance > 1) throw InvalidInput("instance index must be 0 or 1");
  const Vec2 start = scenario.robot.position;
  Vec2 final_position = start;
  if (!trajectory.steps.empty()) {
    const auto& s = trajectory.steps.back().agent_states[instance];
    if (s.size() != 2) throw InvalidInput("crowd-navigation states are 2-D positions");
    final_position = {s[0], s[1]};
  }
  return score_episode(start, final_position, scenario.robot.goal, trajectory.steps.size(),
                       trajectory.terminal_kinds[instance], weights);
}

CrowdNavEnv::CrowdNavEnv(CrowdDynamics dynamics) : dynamics_(std::move(dynamics)) {
  if (dynamics_.heading_offsets_deg.empty()) throw ConfigError("environment action set is empty");
  if (!(dynamics_.relaxation_time > 0.0)) throw ConfigError("relaxation time must be positive");
}

CrowdInstance CrowdNavEnv::make_instance(const CrowdScenario& scenario) const {
  scenario.validate();
  return CrowdInstance{scenario.robot, scenario.humans, scenario.arena, scenario.goal_radius,
                       scenario.dt};
}

void CrowdNavEnv::apply_env_action(CrowdInstance& inst, EnvAction action) const {
  inst.humans = step_humans(inst.humans, inst.robot, action, dynamics_, inst.arena, inst.dt);
}

ActionVector CrowdNavEnv::act(const PolicyHandle& policy, const CrowdInstance& inst) const {
  return policy.act(Observation{inst.robot, inst.humans});
}

void CrowdNavEnv::apply_agent_action(CrowdInstance& inst, const ActionVector& action) const {
  if (action.size() != 2) throw InvalidInput("crowd-navigation actions are 2-D velocities");
  Vec2 v = clip_norm({action[0], action[1]}, inst.robot.max_speed);
  Vec2 p = inst.robot.position + v * inst.dt;
  clamp_to_arena(p, v, inst.robot.radius, inst.arena);
  inst.robot.position = p;
  inst.robot.velocity = v;
}

TerminalKind CrowdNavEnv::terminal_kind(const CrowdInstance& inst) const {
  return check_terminal(inst.robot, inst.humans, inst.goal_radius);
}

StateVector CrowdNavEnv::agent_state(const CrowdInstance& inst) const {
  return StateVector{inst.robot.position.x, inst.robot.position.y};
}

}  // namespace contrast::crowdnav
