#pragma once

#include <filesystem>
#include <vector>

#include "contrast/trajectory_file.hpp"

namespace contrast {

struct RenderOptions {
  bool side_by_side = false;  // default draws both instances overlaid
  double pixels_per_metre = 50.0;
  double margin_px = 20.0;
};

struct RenderResult {
  std::vector<std::filesystem::path> frames;  // frame_00000.svg is the initial state
  std::filesystem::path index;                // index.html sequencing the frames
};

/// Writes one SVG per state (steps + 1 frames) and an HTML index. Only reads
/// `file`; throws Error if the output directory cannot be written.
RenderResult render_trajectory(const TrajectoryFile& file, const std::filesystem::path& out_dir,
                               const RenderOptions& options = {});

}  // namespace contrast
