#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "contrast/coupled_sim.hpp"
#include "contrast/types.hpp"

namespace contrast::crowdnav {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  friend Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  friend bool operator==(Vec2, Vec2) = default;

  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  Vec2 rotated(double radians) const {
    const double c = std::cos(radians);
    const double s = std::sin(radians);
    return {c * x - s * y, s * x + c * y};
  }
  // Clockwise perpendicular.
  Vec2 right() const { return {y, -x}; }
};

/// Unit vector, or zero for a (near) zero input.
Vec2 unit_or_zero(Vec2 v);

struct HumanState {
  Vec2 position;
  Vec2 velocity;
  Vec2 goal;
  double radius = 0.3;
  double preferred_speed = 1.0;
};

struct RobotState {
  Vec2 position;
  Vec2 velocity;
  Vec2 goal;
  double radius = 0.3;
  double max_speed = 1.0;
};

struct Arena {
  double min_x = -6.0;
  double min_y = -6.0;
  double max_x = 6.0;
  double max_y = 6.0;
};

inline constexpr std::size_t kHumanCount = 10;

struct CrowdScenario {
  std::string id;
  Arena arena;
  std::vector<HumanState> humans;
  RobotState robot;
  double goal_radius = 0.3;
  double dt = 0.25;

  /// Throws ConfigError: wrong human count, overlaps, robot starting inside
  /// the goal, non-positive radii or speeds, bodies outside the arena.
  void validate() const;
};

/// "corner-NE" (bottom-left to top-right) and "corner-SE" (top-left to bottom-right).
CrowdScenario builtin_scenario(std::string_view name);
std::vector<std::string> builtin_scenario_names();

/// Crowd motion model and the environment-action set that perturbs it.
struct CrowdDynamics {
  /// Heading rotation, in degrees, applied to every human's goal bearing by
  /// each environment action.
  std::vector<double> heading_offsets_deg{-30.0, -15.0, 0.0, 15.0, 30.0};
  double relaxation_time = 0.5;          // s
  double human_repulsion_strength = 2.0;  // m/s^2
  double human_repulsion_range = 0.3;     // m
  double robot_repulsion_strength = 0.6;  // m/s^2
  double robot_repulsion_range = 0.2;     // m
  double max_speed_factor = 1.5;          // cap relative to preferred speed
};

struct EnvActionDescriptor {
  EnvAction action;
  double heading_offset_deg = 0.0;
};

std::vector<EnvActionDescriptor> env_action_set(const CrowdDynamics& dynamics = {});

/// Goal-directed velocity with the heading rotated by `heading_offset_rad`.
/// Zero when the human stands on its goal; slows to arrive within one step.
Vec2 preferred_velocity(const HumanState& human, double heading_offset_rad, double dt);

/// One crowd update under environment action `action`: preferred velocities,
/// social-force repulsion from other humans and from `robot`, integration by
/// `dt`, clamping to the arena.
std::vector<HumanState> step_humans(std::span<const HumanState> humans, const RobotState& robot,
                                    EnvAction action, const CrowdDynamics& dynamics,
                                    const Arena& arena, double dt);

/// Goal reached takes precedence over a simultaneous collision.
TerminalKind check_terminal(const RobotState& robot, std::span<const HumanState> humans,
                            double goal_radius);

enum class PolicyKind { Lo, Med, Hi };

struct Observation {
  const RobotState& robot;
  std::span<const HumanState> humans;
};

/// Parametric robot controllers of graded quality.
///
///   lo  - heads straight for the goal, ignores humans
///   med - goal attraction plus weak, late distance-based repulsion
///   hi  - goal attraction plus time-to-collision weighted predictive
///         repulsion, with a stronger close-range distance term
class PolicyHandle {
 public:
  struct Params {
    double sensing_range = 3.0;     // m, centre distance
    double repulsion_gain = 0.1;    // distance repulsion (med, hi)
    double repulsion_cutoff = 0.6;  // m, surface gap where distance repulsion vanishes
    double tangential_ratio = 0.6;  // sidestep share of each repulsion
    double ttc_horizon = 2.5;       // s (hi)
    double ttc_gain = 1.2;          // (hi)
    double ttc_margin = 0.15;       // m added to the combined radius (hi)
  };

  PolicyHandle() = default;
  PolicyHandle(std::string name, PolicyKind kind, Params params);

  /// lo, med or hi with the shipped parameters; ConfigError otherwise.
  static PolicyHandle builtin(std::string_view name);

  const std::string& name() const { return name_; }
  PolicyKind kind() const { return kind_; }
  const Params& params() const { return params_; }

  /// Velocity command (m = 2), magnitude at most robot.max_speed.
  ActionVector act(const Observation& obs) const;

 private:
  std::string name_ = "lo";
  PolicyKind kind_ = PolicyKind::Lo;
  Params params_;
};

struct ScoreWeights {
  double success = 10.0;
  double collision = -10.0;
  double per_step = -0.01;
  double progress = 0.1;  // per metre of distance gained toward the goal
};

double score_episode(Vec2 start, Vec2 final_position, Vec2 goal, std::size_t steps,
                     TerminalKind outcome, const ScoreWeights& weights = {});

/// Scores one instance of a recorded crowd-navigation trajectory.
double score_episode(const Trajectory& trajectory, std::size_t instance,
                     const CrowdScenario& scenario, const ScoreWeights& weights = {});

/// One simulation instance: the robot, its crowd, and the scenario constants.
struct CrowdInstance {
  RobotState robot;
  std::vector<HumanState> humans;
  Arena arena;
  double goal_radius = 0.3;
  double dt = 0.25;
};

class CrowdNavEnv {
 public:
  using InitialState = CrowdScenario;
  using Instance = CrowdInstance;
  using Policy = PolicyHandle;

  CrowdNavEnv() = default;
  explicit CrowdNavEnv(CrowdDynamics dynamics);

  const CrowdDynamics& dynamics() const { return dynamics_; }

  std::size_t num_env_actions() const { return dynamics_.heading_offsets_deg.size(); }
  std::size_t action_dim() const { return 2; }
  CrowdInstance make_instance(const CrowdScenario& scenario) const;
  std::string initial_state_id(const CrowdScenario& scenario) const { return scenario.id; }
  void apply_env_action(CrowdInstance& inst, EnvAction action) const;
  ActionVector act(const PolicyHandle& policy, const CrowdInstance& inst) const;
  void apply_agent_action(CrowdInstance& inst, const ActionVector& action) const;
  TerminalKind terminal_kind(const CrowdInstance& inst) const;
  StateVector agent_state(const CrowdInstance& inst) const;

 private:
  CrowdDynamics dynamics_;
};

using CrowdSim = CoupledSim<CrowdNavEnv>;

}  // namespace contrast::crowdnav
