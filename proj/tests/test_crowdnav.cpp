#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "contrast/crowdnav.hpp"
#include "contrast/errors.hpp"

using namespace contrast;
using namespace contrast::crowdnav;

namespace {

HumanState human_at(Vec2 p, Vec2 goal = {0.0, 0.0}) {
  HumanState h;
  h.position = p;
  h.goal = goal;
  return h;
}

RobotState robot_at(Vec2 p, Vec2 goal) {
  RobotState r;
  r.position = p;
  r.goal = goal;
  return r;
}

}  // namespace

TEST(Scenario, BuiltinsAreValidCornerCrossings) {
  const auto ne = builtin_scenario("corner-NE");
  const auto se = builtin_scenario("corner-SE");
  EXPECT_NO_THROW(ne.validate());
  EXPECT_NO_THROW(se.validate());
  EXPECT_EQ(ne.robot.position, (Vec2{-5.0, -5.0}));
  EXPECT_EQ(ne.robot.goal, (Vec2{5.0, 5.0}));
  EXPECT_EQ(se.robot.position, (Vec2{-5.0, 5.0}));
  EXPECT_EQ(se.robot.goal, (Vec2{5.0, -5.0}));
  EXPECT_EQ(ne.humans.size(), kHumanCount);
  EXPECT_EQ(builtin_scenario_names(), (std::vector<std::string>{"corner-NE", "corner-SE"}));
  EXPECT_THROW(builtin_scenario("corner-SW"), ConfigError);
}

TEST(Scenario, ValidationCatchesBadLayouts) {
  auto s = builtin_scenario("corner-NE");
  s.humans.pop_back();
  EXPECT_THROW(s.validate(), ConfigError);

  s = builtin_scenario("corner-NE");
  s.humans[1].position = s.humans[0].position;
  EXPECT_THROW(s.validate(), ConfigError);

  s = builtin_scenario("corner-NE");
  s.robot.goal = s.robot.position;
  EXPECT_THROW(s.validate(), ConfigError);

  s = builtin_scenario("corner-NE");
  s.humans[0].position = {7.0, 0.0};
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(Dynamics, ActionSetIsFiveHeadingOffsets) {
  const auto set = env_action_set();
  ASSERT_EQ(set.size(), 5u);
  const double expected[] = {-30.0, -15.0, 0.0, 15.0, 30.0};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(set[i].action, EnvAction{i});
    EXPECT_EQ(set[i].heading_offset_deg, expected[i]);
  }
}

TEST(Dynamics, PreferredVelocity) {
  HumanState h = human_at({0.0, 0.0}, {4.0, 0.0});
  h.preferred_speed = 0.8;
  const Vec2 v = preferred_velocity(h, 0.0, 0.25);
  EXPECT_DOUBLE_EQ(v.x, 0.8);
  EXPECT_DOUBLE_EQ(v.y, 0.0);

  const Vec2 turned = preferred_velocity(h, std::numbers::pi / 2.0, 0.25);
  EXPECT_NEAR(turned.x, 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(turned.y, 0.8);

  h.goal = {0.1, 0.0};  // arrives within one step
  EXPECT_DOUBLE_EQ(preferred_velocity(h, 0.0, 0.25).x, 0.4);
  h.goal = h.position;
  EXPECT_EQ(preferred_velocity(h, 0.0, 0.25), Vec2{});
}

TEST(Dynamics, StepHumansIsDeterministicAndBounded) {
  const auto s = builtin_scenario("corner-SE");
  std::vector<HumanState> a = s.humans, b = s.humans;
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const EnvAction act{static_cast<std::size_t>(rng() % 5)};
    a = step_humans(a, s.robot, act, {}, s.arena, s.dt);
    b = step_humans(b, s.robot, act, {}, s.arena, s.dt);
    for (const auto& h : a) {
      EXPECT_GE(h.position.x - h.radius, s.arena.min_x);
      EXPECT_LE(h.position.x + h.radius, s.arena.max_x);
      EXPECT_GE(h.position.y - h.radius, s.arena.min_y);
      EXPECT_LE(h.position.y + h.radius, s.arena.max_y);
      EXPECT_LE(h.velocity.norm(), 1.5 * h.preferred_speed + 1e-12);
    }
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(std::bit_cast<std::uint64_t>(a[i].position.x), std::bit_cast<std::uint64_t>(b[i].position.x));
  }
  EXPECT_THROW(step_humans(a, s.robot, EnvAction{5}, {}, s.arena, s.dt), InvalidInput);
}

TEST(Dynamics, ActionsChangeTheCrowd) {
  const auto s = builtin_scenario("corner-NE");
  const auto left = step_humans(s.humans, s.robot, EnvAction{0}, {}, s.arena, s.dt);
  const auto right = step_humans(s.humans, s.robot, EnvAction{4}, {}, s.arena, s.dt);
  EXPECT_NE(left[0].position, right[0].position);
}

TEST(Terminal, GoalBeatsCollisionAndContactCounts) {
  const RobotState r = robot_at({0.0, 0.0}, {0.2, 0.0});
  const std::vector<HumanState> touching{human_at({0.6, 0.0})};
  EXPECT_EQ(check_terminal(r, touching, 0.3), TerminalKind::GoalReached);

  const RobotState away = robot_at({0.0, 0.0}, {3.0, 0.0});
  EXPECT_EQ(check_terminal(away, touching, 0.3), TerminalKind::Collision);  // gap exactly 0
  const std::vector<HumanState> clear{human_at({0.61, 0.0})};
  EXPECT_EQ(check_terminal(away, clear, 0.3), TerminalKind::Running);
}

TEST(Policy, LoIgnoresHumans) {
  const auto lo = PolicyHandle::builtin("lo");
  const RobotState r = robot_at({0.0, 0.0}, {3.0, 4.0});
  const std::vector<HumanState> crowd{human_at({0.7, 0.9}), human_at({-0.5, 0.5})};
  const auto a = lo.act({r, crowd});
  const auto b = lo.act({r, {}});
  EXPECT_EQ(a, b);
  EXPECT_DOUBLE_EQ(a[0], 0.6);
  EXPECT_DOUBLE_EQ(a[1], 0.8);
}

TEST(Policy, MedAndHiSteerAwayFromABlockingHuman) {
  const RobotState r = robot_at({0.0, 0.0}, {5.0, 0.0});
  HumanState h = human_at({0.9, 0.0}, {-5.0, 0.0});
  h.velocity = {-1.0, 0.0};
  const std::vector<HumanState> crowd{h};
  for (const char* name : {"med", "hi"}) {
    const auto a = PolicyHandle::builtin(name).act({r, crowd});
    EXPECT_LT(a[0], 1.0) << name;
    EXPECT_NE(a[1], 0.0) << name;
  }
  // hi reacts to the approaching human before med's distance term engages.
  HumanState far = human_at({2.5, 0.0}, {-5.0, 0.0});
  far.velocity = {-1.0, 0.0};
  const std::vector<HumanState> approaching{far};
  EXPECT_EQ(PolicyHandle::builtin("med").act({r, approaching})[1], 0.0);
  EXPECT_NE(PolicyHandle::builtin("hi").act({r, approaching})[1], 0.0);
}

TEST(Policy, OutputNeverExceedsMaxSpeed) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const char* name : {"lo", "med", "hi"}) {
    const auto p = PolicyHandle::builtin(name);
    for (int trial = 0; trial < 2000; ++trial) {
      RobotState r = robot_at({u(rng), u(rng)}, {u(rng), u(rng)});
      std::vector<HumanState> crowd;
      for (int i = 0; i < 10; ++i) {
        HumanState h = human_at({r.position.x + u(rng) / 3.0, r.position.y + u(rng) / 3.0});
        h.velocity = {u(rng) / 2.0, u(rng) / 2.0};
        crowd.push_back(h);
      }
      const auto a = p.act({r, crowd});
      EXPECT_LE(std::hypot(a[0], a[1]), r.max_speed) << name;
    }
  }
  EXPECT_THROW(PolicyHandle::builtin("expert"), ConfigError);
}

TEST(Score, HandValues) {
  // 10 m to go, finishes 4 m out after 40 steps without terminating.
  EXPECT_DOUBLE_EQ(score_episode({0, 0}, {6, 0}, {10, 0}, 40, TerminalKind::Running), -0.4 + 0.6);
  EXPECT_DOUBLE_EQ(score_episode({0, 0}, {10, 0}, {10, 0}, 50, TerminalKind::GoalReached), 10.0 - 0.5 + 1.0);
  EXPECT_DOUBLE_EQ(score_episode({0, 0}, {1, 0}, {10, 0}, 5, TerminalKind::Collision), -10.0 - 0.05 + 0.1);
}

TEST(CrowdSim, IdenticalPoliciesStayIdentical) {
  const auto s = builtin_scenario("corner-NE");
  const auto hi = PolicyHandle::builtin("hi");
  CrowdSim sim(CrowdNavEnv{}, {hi, hi}, {"x", "y"}, s);
  std::mt19937_64 rng(1);
  while (!sim.is_terminal() && sim.step_count() < 100) {
    const auto out = sim.step(EnvAction{static_cast<std::size_t>(rng() % 5)});
    ASSERT_EQ(out.actions[0], out.actions[1]);
    ASSERT_EQ(out.states[0], out.states[1]);
  }
  EXPECT_EQ(sim.terminal_kinds()[0], sim.terminal_kinds()[1]);
}

TEST(CrowdSim, AgentStateIsRobotPosition) {
  const auto s = builtin_scenario("corner-SE");
  CrowdSim sim(CrowdNavEnv{}, {PolicyHandle::builtin("lo"), PolicyHandle::builtin("hi")}, {"lo", "hi"}, s);
  sim.step(EnvAction{2});
  const auto st = sim.agent_states()[0];
  ASSERT_EQ(st.size(), 2u);
  EXPECT_EQ(st[0], sim.instance(0).robot.position.x);
  EXPECT_EQ(st[1], sim.instance(0).robot.position.y);
  EXPECT_NEAR(std::hypot(st[0] + 5.0, st[1] - 5.0), 0.25, 1e-12);  // full speed for one step
}
