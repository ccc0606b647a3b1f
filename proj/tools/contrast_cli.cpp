#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "contrast/errors.hpp"
#include "contrast/orchestrate.hpp"
#include "contrast/render.hpp"
#include "contrast/run_config.hpp"
#include "contrast/trajectory_file.hpp"

namespace fs = std::filesystem;
using namespace contrast;

namespace {

enum Exit { kOk = 0, kConfig = 1, kVerify = 2, kFault = 3 };

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<std::string> scenarios;
  std::vector<std::string> pairs;
  std::optional<std::size_t> workers;
};

void add_common(CLI::App& cmd, CommonOptions& o) {
  cmd.add_option("-c,--config", o.config_path, "JSON config file (defaults built in)")
      ->check(CLI::ExistingFile);
  cmd.add_option("--seed", o.seed, "base seed for searches and benchmark episodes");
  cmd.add_option("-o,--out", o.out, "output directory");
  cmd.add_option("--scenario", o.scenarios, "restrict to these scenarios (repeatable)");
}

RunConfig resolve(const CommonOptions& o) {
  RunConfig config = o.config_path.empty() ? default_run_config() : load_run_config(o.config_path);
  ConfigOverrides ov;
  ov.seed = o.seed;
  if (o.out) ov.output_dir = fs::path(*o.out);
  ov.scenarios = o.scenarios;
  apply_overrides(config, ov);
  if (o.workers) {
    if (*o.workers == 0) throw ConfigError("--workers must be positive");
    config.workers = *o.workers;
  }
  return config;
}

std::vector<AgentPair> parse_pairs(const std::vector<std::string>& specs) {
  std::vector<AgentPair> out;
  for (const auto& s : specs) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw ConfigError("--pair expects a,b: " + s);
    try {
      out.emplace_back(s.substr(0, comma), s.substr(comma + 1));
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("--pair: ") + e.what());
    }
  }
  return out;
}

int cmd_search(const CommonOptions& o) {
  const RunConfig config = resolve(o);
  const Manifest m = run_all_pairs(config, parse_pairs(o.pairs));
  for (const auto& e : m.entries) {
    std::printf("%-12s %s vs %s  reward %.6f  %s\n", e.scenario.c_str(), e.pair.first().c_str(),
                e.pair.second().c_str(), e.summary_reward, e.summary_file.c_str());
  }
  std::printf("manifest: %s (%zu summaries)\n", (config.output_dir / "manifest.json").c_str(),
              m.entries.size());
  return kOk;
}

int cmd_baseline(const CommonOptions& o) {
  const RunConfig config = resolve(o);
  const auto jobs = run_all_baselines(config, parse_pairs(o.pairs));
  for (const auto& job : jobs) {
    const Trajectory& best = select_summary(job.trajectories);
    std::printf("%-12s %s vs %s  best of %zu: %.6f\n", job.scenario.c_str(), job.pair.first().c_str(),
                job.pair.second().c_str(), job.trajectories.size(), best.total_reward);
  }
  return kOk;
}

int cmd_pairs(const CommonOptions& o) {
  const RunConfig config = resolve(o);
  std::vector<AgentId> ids;
  for (const auto& a : config.agents) ids.push_back(a.id);
  const auto pairs = enumerate_pairs(ids);
  for (const auto& p : pairs) std::printf("%s,%s\n", p.first().c_str(), p.second().c_str());
  std::printf("%zu pairs x %zu scenarios = %zu jobs\n", pairs.size(), config.scenarios.size(),
              pairs.size() * config.scenarios.size());
  return kOk;
}

int cmd_bench(const CommonOptions& o, bool persist) {
  const RunConfig config = resolve(o);
  const BenchReport report = bench_agents(config, persist ? config.output_dir / "bench" : fs::path{});
  std::fputs(report.text().c_str(), stdout);
  return report.shipped_order_ok ? kOk : kVerify;
}

int cmd_render(const std::string& path, std::optional<std::string> out, bool side_by_side) {
  const TrajectoryFile file = read_trajectory_file(path);
  const fs::path dir = out ? fs::path(*out) : fs::path(path).replace_extension("").concat("_frames");
  RenderOptions opts;
  opts.side_by_side = side_by_side;
  const RenderResult r = render_trajectory(file, dir, opts);
  std::printf("%zu frames, index %s\n", r.frames.size(), r.index.c_str());
  return kOk;
}

std::vector<fs::path> collect(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::recursive_directory_iterator(in)) {
        if (e.is_regular_file() && e.path().extension() == ".jsonl") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.emplace_back(in);
    }
  }
  return files;
}

int cmd_replay(const std::vector<std::string>& inputs, bool quiet) {
  const auto files = collect(inputs);
  std::size_t failed = 0;
  for (const auto& f : files) {
    ReplayReport r;
    try {
      r = replay_file(f);
    } catch (const FormatError& e) {
      r.detail = std::string("format error: ") + e.what();
    }
    if (!r.pass) {
      ++failed;
      if (r.first_divergent_step) {
        std::printf("FAIL %s: step %zu: %s\n", f.c_str(), *r.first_divergent_step, r.detail.c_str());
      } else {
        std::printf("FAIL %s: %s\n", f.c_str(), r.detail.c_str());
      }
    } else if (!quiet) {
      std::printf("PASS %s\n", f.c_str());
    }
  }
  std::printf("replayed %zu files, %zu failed\n", files.size(), failed);
  if (files.empty()) return kVerify;
  return failed == 0 ? kOk : kVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contrastive behaviour summaries via adaptive scenario search"};
  app.require_subcommand(1);

  CommonOptions search_o, baseline_o, bench_o, pairs_o;

  auto* search = app.add_subcommand("search", "adaptive search for every agent pair and scenario");
  add_common(*search, search_o);
  search->add_option("--pair", search_o.pairs, "only this pair, as a,b (repeatable)");
  search->add_option("--workers", search_o.workers, "parallel jobs");

  auto* baseline = app.add_subcommand("baseline", "N-first baseline for every pair and scenario");
  add_common(*baseline, baseline_o);
  baseline->add_option("--pair", baseline_o.pairs, "only this pair, as a,b (repeatable)");
  baseline->add_option("--workers", baseline_o.workers, "parallel jobs");

  bool persist = false;
  auto* bench = app.add_subcommand("bench", "score each agent and rank them");
  add_common(*bench, bench_o);
  bench->add_flag("--persist", persist, "write every episode under <out>/bench");

  auto* pairs = app.add_subcommand("pairs", "list the agent pairs a search would run");
  add_common(*pairs, pairs_o);

  std::string render_path;
  std::optional<std::string> render_out;
  bool side_by_side = false;
  auto* render = app.add_subcommand("render", "write SVG frames and an HTML index for a trajectory");
  render->add_option("file", render_path, "trajectory file")->required();
  render->add_option("-o,--out", render_out, "frame directory (default <file>_frames)");
  render->add_flag("--side-by-side", side_by_side, "draw the two instances in separate panels");

  std::vector<std::string> replay_inputs;
  bool quiet = false;
  auto* replay_cmd = app.add_subcommand("replay", "re-simulate trajectory files and compare bit for bit");
  replay_cmd->add_option("files", replay_inputs, "trajectory files or directories")->required();
  replay_cmd->add_flag("-q,--quiet", quiet, "only print failures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*search) return cmd_search(search_o);
    if (*baseline) return cmd_baseline(baseline_o);
    if (*bench) return cmd_bench(bench_o, persist);
    if (*pairs) return cmd_pairs(pairs_o);
    if (*render) return cmd_render(render_path, render_out, side_by_side);
    if (*replay_cmd) return cmd_replay(replay_inputs, quiet);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kVerify;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFault;
  }
  return kFault;
}
