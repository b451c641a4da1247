#include "delone/svg.hpp"

#include <sstream>

#include "delone/error.hpp"
#include "delone/io.hpp"

namespace delone {

std::string cells_svg(std::span<const Polytope> cells, std::span<const Vec> points, const SvgViewport& view) {
  if (!(view.half_width > 0.0) || view.pixels <= 0) throw Error(ErrorCode::InvalidArgument, "bad SVG viewport");
  const double scale = view.pixels / (2.0 * view.half_width);
  // SVG y grows downwards.
  auto px = [&](Vec p) {
    return format_double((p.x - view.center.x + view.half_width) * scale) + "," +
           format_double((view.center.y + view.half_width - p.y) * scale);
  };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << view.pixels << "\" height=\"" << view.pixels
     << "\" viewBox=\"0 0 " << view.pixels << ' ' << view.pixels << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<g fill=\"none\" stroke=\"#335\" stroke-width=\"1\">\n";
  for (const Polytope& c : cells) {
    if (c.dim != 2 || c.vertices.size() < 3) continue;
    os << "<polygon points=\"";
    for (std::size_t k = 0; k < c.vertices.size(); ++k) os << (k ? " " : "") << px(c.vertices[k]);
    os << "\"/>\n";
  }
  os << "</g>\n<g fill=\"#c33\">\n";
  const double r = std::max(1.5, 0.04 * scale);
  for (const Vec& p : points) {
    const auto xy = px(p);
    const auto comma = xy.find(',');
    os << "<circle cx=\"" << xy.substr(0, comma) << "\" cy=\"" << xy.substr(comma + 1) << "\" r=\""
       << format_double(r) << "\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace delone
