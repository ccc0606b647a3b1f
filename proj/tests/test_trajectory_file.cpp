#include <gtest/gtest.h>

#include <bit>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "contrast/errors.hpp"
#include "contrast/orchestrate.hpp"
#include "contrast/trajectory_file.hpp"

using namespace contrast;
namespace fs = std::filesystem;

namespace {

struct Fixture {
  RunConfig config = default_run_config();
  Trajectory trajectory;
  TrajectoryHeader header;

  explicit Fixture(std::uint64_t seed = 17, const char* a = "hi", const char* b = "lo") {
    const auto& sa = config.agent(a);
    const auto& sb = config.agent(b);
    auto sim = make_crowd_sim(config, sa, sb, config.scenarios[1]);
    trajectory = n_first_baseline(sim, 1, config.reward, seed).front();
    header = make_header(config, "baseline", seed, sa, sb, config.scenarios[1]);
  }
};

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "contrast_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

}  // namespace

TEST(TrajectoryFile, RoundTripIsBitExact) {
  Fixture f;
  const auto file = make_trajectory_file(f.header, f.trajectory);
  const auto back = parse_trajectory_file(serialize_trajectory_file(file));
  ASSERT_EQ(back.trajectory.steps.size(), f.trajectory.steps.size());
  EXPECT_TRUE(same_bits(back.trajectory.total_reward, f.trajectory.total_reward));
  EXPECT_TRUE(same_bits(back.trajectory.terminal_reward, f.trajectory.terminal_reward));
  EXPECT_TRUE(same_bits(back.state_divergence, file.state_divergence));
  for (std::size_t t = 0; t < f.trajectory.steps.size(); ++t) {
    const auto& a = back.trajectory.steps[t];
    const auto& b = f.trajectory.steps[t];
    EXPECT_EQ(a.env_action, b.env_action);
    EXPECT_TRUE(same_bits(a.reward, b.reward));
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_TRUE(same_bits(a.agent_actions[i][k], b.agent_actions[i][k]));
        EXPECT_TRUE(same_bits(a.agent_states[i][k], b.agent_states[i][k]));
      }
    }
    EXPECT_EQ(back.crowd[t], file.crowd[t]);
  }
  EXPECT_EQ(back.trajectory.terminal_kinds, f.trajectory.terminal_kinds);
  EXPECT_EQ(back.header.agents, f.header.agents);
  EXPECT_EQ(back.header.config_hash, f.header.config_hash);
  EXPECT_EQ(serialize_trajectory_file(back), serialize_trajectory_file(file));
}

TEST(TrajectoryFile, AwkwardDoublesSurvive) {
  Fixture f;
  auto t = f.trajectory;
  t.steps.resize(1);
  const double odd[] = {0.1, 1.0 / 3.0, 5e-324, 1.7976931348623157e308, -0.0, 2.2250738585072014e-308};
  for (double d : odd) {
    t.steps[0].reward = d;
    t.terminal_reward = 0.0;
    t.total_reward = trajectory_total_reward(t.steps, 0.0);
    TrajectoryFile file{f.header, t, {CrowdFrame{}}, 0.0};
    const auto back = parse_trajectory_file(serialize_trajectory_file(file));
    EXPECT_TRUE(same_bits(back.trajectory.steps[0].reward, d)) << d;
  }
}

TEST(TrajectoryFile, RecordLayout) {
  Fixture f;
  const auto text = serialize_trajectory_file(make_trajectory_file(f.header, f.trajectory));
  const auto lines = lines_of(text);
  ASSERT_EQ(lines.size(), f.trajectory.steps.size() + 2);
  const auto header = nlohmann::ordered_json::parse(lines.front());
  EXPECT_EQ(header.at("format"), kTrajectoryFormatName);
  EXPECT_EQ(header.at("version"), kTrajectoryFormatVersion);
  const auto step = nlohmann::ordered_json::parse(lines[1]);
  std::vector<std::string> keys;
  for (const auto& [k, v] : step.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"t", "env_action", "reward", "action_1", "action_2", "state_1",
                                            "state_2", "humans_1", "humans_2"}));
  const auto footer = nlohmann::ordered_json::parse(lines.back());
  EXPECT_TRUE(footer.contains("terminal_1"));
  EXPECT_TRUE(footer.contains("total_reward"));
}

TEST(Replay, FreshFilePasses) {
  Fixture f;
  const auto path = scratch("fresh.jsonl");
  write_trajectory_file(path, make_trajectory_file(f.header, f.trajectory));
  const auto report = replay_file(path);
  EXPECT_TRUE(report.pass) << report.detail;
  EXPECT_FALSE(report.first_divergent_step);
}

TEST(Replay, FlippedActionFailsAtThatStep) {
  Fixture f(23, "hi", "med");
  ASSERT_GT(f.trajectory.steps.size(), 6u);
  auto lines = lines_of(serialize_trajectory_file(make_trajectory_file(f.header, f.trajectory)));
  const std::size_t k = 5;
  auto rec = nlohmann::ordered_json::parse(lines[k + 1]);
  const std::size_t old = rec.at("env_action").get<std::size_t>();
  rec["env_action"] = (old + 2) % 5;
  lines[k + 1] = rec.dump();
  const auto report = replay(parse_trajectory_file(join(lines)));
  EXPECT_FALSE(report.pass);
  ASSERT_TRUE(report.first_divergent_step);
  EXPECT_EQ(*report.first_divergent_step, k);
}

TEST(Replay, TamperedStateFails) {
  Fixture f;
  auto file = make_trajectory_file(f.header, f.trajectory);
  auto lines = lines_of(serialize_trajectory_file(file));
  auto rec = nlohmann::ordered_json::parse(lines[3]);
  rec["state_1"][0] = rec["state_1"][0].get<double>() + 1e-12;
  lines[3] = rec.dump();
  const auto report = replay(parse_trajectory_file(join(lines)));
  EXPECT_FALSE(report.pass);
  EXPECT_EQ(report.first_divergent_step, std::optional<std::size_t>(2));
}

TEST(Replay, CorruptFilesAreFormatErrors) {
  Fixture f;
  auto lines = lines_of(serialize_trajectory_file(make_trajectory_file(f.header, f.trajectory)));

  auto bad_version = lines;
  auto h = nlohmann::ordered_json::parse(bad_version[0]);
  h["version"] = kTrajectoryFormatVersion + 1;
  bad_version[0] = h.dump();
  EXPECT_THROW(parse_trajectory_file(join(bad_version)), FormatError);

  auto truncated = lines;
  truncated.pop_back();
  EXPECT_THROW(parse_trajectory_file(join(truncated)), FormatError);

  auto garbage = lines;
  garbage[2] = "{\"t\": 1, \"env_action\": ";
  EXPECT_THROW(parse_trajectory_file(join(garbage)), FormatError);

  auto wrong_total = lines;
  auto foot = nlohmann::ordered_json::parse(wrong_total.back());
  foot["total_reward"] = foot["total_reward"].get<double>() + 1.0;
  wrong_total.back() = foot.dump();
  EXPECT_THROW(parse_trajectory_file(join(wrong_total)), FormatError);

  EXPECT_THROW(read_trajectory_file(scratch("missing.jsonl")), FormatError);
  EXPECT_THROW(parse_trajectory_file(""), FormatError);
}
