#include "contrast/render.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "contrast/errors.hpp"

namespace contrast {
namespace {

using crowdnav::Vec2;

constexpr const char* kRobotColour[2] = {"#1f77b4", "#d62728"};
constexpr const char* kCrowdColour[2] = {"#4a90d9", "#e8743b"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

struct Canvas {
  const crowdnav::Arena& arena;
  RenderOptions opt;
  double panel_offset_px = 0.0;

  double px(double x) const { return panel_offset_px + opt.margin_px + (x - arena.min_x) * opt.pixels_per_metre; }
  double py(double y) const { return opt.margin_px + (arena.max_y - y) * opt.pixels_per_metre; }
  double len(double metres) const { return metres * opt.pixels_per_metre; }
  double panel_width() const { return (arena.max_x - arena.min_x) * opt.pixels_per_metre + 2 * opt.margin_px; }
  double panel_height() const { return (arena.max_y - arena.min_y) * opt.pixels_per_metre + 2 * opt.margin_px; }
};

struct FrameState {
  PerInstance<Vec2> robots;
  PerInstance<std::vector<Vec2>> humans;
  PerInstance<std::vector<Vec2>> trails;
};

void draw_panel(std::ostringstream& svg, const Canvas& c, const TrajectoryFile& file,
                const FrameState& st, const std::vector<std::size_t>& instances) {
  const auto& sc = file.header.scenario;
  svg << "<rect x=\"" << fmt(c.px(sc.arena.min_x)) << "\" y=\"" << fmt(c.py(sc.arena.max_y))
      << "\" width=\"" << fmt(c.len(sc.arena.max_x - sc.arena.min_x)) << "\" height=\""
      << fmt(c.len(sc.arena.max_y - sc.arena.min_y)) << "\" fill=\"#fafafa\" stroke=\"#333\"/>\n";
  svg << "<circle class=\"goal\" cx=\"" << fmt(c.px(sc.robot.goal.x)) << "\" cy=\"" << fmt(c.py(sc.robot.goal.y))
      << "\" r=\"" << fmt(c.len(sc.goal_radius)) << "\" fill=\"#2ca02c\" fill-opacity=\"0.3\" stroke=\"#2ca02c\"/>\n";
  for (std::size_t i : instances) {
    for (const Vec2& h : st.humans[i]) {
      svg << "<circle class=\"human-" << i + 1 << "\" cx=\"" << fmt(c.px(h.x)) << "\" cy=\"" << fmt(c.py(h.y))
          << "\" r=\"" << fmt(c.len(sc.humans.front().radius)) << "\" fill=\"" << kCrowdColour[i]
          << "\" fill-opacity=\"0.35\"/>\n";
    }
  }
  for (std::size_t i : instances) {
    svg << "<polyline class=\"trail-" << i + 1 << "\" fill=\"none\" stroke=\"" << kRobotColour[i]
        << "\" stroke-width=\"2\" points=\"";
    for (const Vec2& p : st.trails[i]) svg << fmt(c.px(p.x)) << ',' << fmt(c.py(p.y)) << ' ';
    svg << "\"/>\n";
  }
  for (std::size_t i : instances) {
    svg << "<circle id=\"robot-" << i + 1 << "\" cx=\"" << fmt(c.px(st.robots[i].x)) << "\" cy=\""
        << fmt(c.py(st.robots[i].y)) << "\" r=\"" << fmt(c.len(sc.robot.radius)) << "\" fill=\""
        << kRobotColour[i] << "\" stroke=\"#000\"/>\n";
  }
}

std::string frame_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%05zu.svg", k);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

RenderResult render_trajectory(const TrajectoryFile& file, const std::filesystem::path& out_dir,
                               const RenderOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory " + out_dir.string() + ": " + ec.message());

  const auto& sc = file.header.scenario;
  const Trajectory& traj = file.trajectory;
  const std::size_t frames = traj.steps.size() + 1;

  FrameState st;
  for (std::size_t i = 0; i < 2; ++i) {
    st.robots[i] = sc.robot.position;
    st.trails[i] = {sc.robot.position};
    for (const auto& h : sc.humans) st.humans[i].push_back(h.position);
  }

  Canvas base{sc.arena, options};
  const double panel_w = base.panel_width();
  const double width = options.side_by_side ? 2 * panel_w : panel_w;
  const double height = base.panel_height() + 30.0;

  RenderResult result;
  for (std::size_t k = 0; k < frames; ++k) {
    if (k > 0) {
      const StepRecord& rec = traj.steps[k - 1];
      for (std::size_t i = 0; i < 2; ++i) {
        st.robots[i] = {rec.agent_states[i][0], rec.agent_states[i][1]};
        st.trails[i].push_back(st.robots[i]);
        st.humans[i].clear();
        for (const auto& h : file.crowd[k - 1][i]) st.humans[i].push_back(h.position);
      }
    }

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
        << "\" data-pixels-per-metre=\"" << fmt(options.pixels_per_metre) << "\">\n";
    if (options.side_by_side) {
      for (std::size_t i = 0; i < 2; ++i) {
        Canvas panel = base;
        panel.panel_offset_px = static_cast<double>(i) * panel_w;
        draw_panel(svg, panel, file, st, {i});
      }
    } else {
      draw_panel(svg, base, file, st, {0, 1});
    }
    svg << "<text x=\"" << fmt(options.margin_px) << "\" y=\"" << fmt(height - 8.0)
        << "\" font-family=\"monospace\" font-size=\"14\">" << sc.id << "  " << traj.agents[0] << " (blue) vs "
        << traj.agents[1] << " (red)  step " << k << '/' << traj.steps.size() << "</text>\n";
    svg << "</svg>\n";

    const auto path = out_dir / frame_name(k);
    write_text(path, svg.str());
    result.frames.push_back(path);
  }

  std::ostringstream html;
  html << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>" << sc.id << ": " << traj.agents[0]
       << " vs " << traj.agents[1] << "</title></head>\n<body>\n<img id=\"frame\" src=\"" << frame_name(0)
       << "\">\n<p id=\"label\"></p>\n<ol id=\"frames\">\n";
  for (std::size_t k = 0; k < frames; ++k) html << "<li><a href=\"" << frame_name(k) << "\">" << frame_name(k) << "</a></li>\n";
  html << "</ol>\n<script>\nconst frames = [...document.querySelectorAll('#frames a')].map(a => a.getAttribute('href'));\n"
          "let i = 0;\nsetInterval(() => { i = (i + 1) % frames.length; document.getElementById('frame').src = frames[i];\n"
          "  document.getElementById('label').textContent = frames[i]; }, "
       << static_cast<int>(sc.dt * 1000.0) << ");\n</script>\n</body></html>\n";
  result.index = out_dir / "index.html";
  write_text(result.index, html.str());
  return result;
}

}  // namespace contrast
