#pragma once

#include <span>
#include <string>

#include "delone/voronoi.hpp"

namespace delone {

struct SvgViewport {
  Vec center{};
  double half_width = 10.0;
  int pixels = 800;
};

/// Static figure of 2-D cells (outlines) and sites (dots).
std::string cells_svg(std::span<const Polytope> cells, std::span<const Vec> points, const SvgViewport& view);

}  // namespace delone
