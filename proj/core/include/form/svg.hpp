#pragma once

#include <string>
#include <vector>

#include "form/relativity.hpp"

namespace form {

/// Source points are drawn blue, target or generated points pink.
struct ScatterFigure {
  std::string title;
  std::vector<VecD> sources;
  std::vector<VecD> targets;
  std::vector<std::vector<VecD>> trajectories;
  std::string source_label = "source";
  std::string target_label = "target";
};

/// Standalone SVG document. One <circle> per point, one <polyline> per trajectory.
std::string render_svg(const ScatterFigure& fig, int width = 640, int height = 640);

}  // namespace form
