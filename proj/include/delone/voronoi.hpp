#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "delone/atlas.hpp"
#include "delone/geometry.hpp"
#include "delone/kernels.hpp"
#include "delone/patch.hpp"
#include "delone/point_set.hpp"

namespace delone {

/// Bounded convex cell {y : <n_i, y> <= c_i}. Vertices: the two interval
/// endpoints for d = 1, a counter-clockwise ring for d = 2.
struct Polytope {
  int dim = 2;
  Vec site{};
  std::vector<HalfSpace> halfspaces;
  std::vector<Vec> vertices;

  double diameter() const { return cloud_diameter(vertices); }
  /// Length for d = 1, area for d = 2.
  double measure() const;
  bool contains(Vec y, double tol = kEta) const;
  /// Radius of the largest ball about the site inside the cell.
  double inradius_at_site() const;
  /// Largest distance from the site to a vertex.
  double circumradius_at_site() const;
};

/// Cell of `site` against the given neighbors (any order). Clips a square of
/// side 4·cutoff centered at the site. Throws UnboundedCell when the result
/// still touches that square.
Polytope cell_from_neighbors(Vec site, std::span<const Vec> neighbors, double cutoff, int dim);

/// Cell of point `index` of X using X ∩ B_cutoff(x). Throws InsufficientWindow, UnboundedCell.
Polytope voronoi_cell(const WindowedDeloneSet& X, std::size_t index, double cutoff);
/// Same, for a point given by coordinates (must be a point of X).
Polytope voronoi_cell(const WindowedDeloneSet& X, Vec x, double cutoff);

/// Cells of the given points, serial or OpenMP.
inline std::vector<Polytope> voronoi_cells(const WindowedDeloneSet& X, std::span<const std::size_t> indices,
                                           double cutoff, bool par) {
  return par ? parallel::voronoi_cells(X, indices, cutoff) : serial::voronoi_cells(X, indices, cutoff);
}

/// Vertex lists equal within tol (as cyclic rings / endpoint pairs).
bool same_vertices(const Polytope& a, const Polytope& b, double tol = kEta);

/// a ∩ b (d = 2 by Sutherland–Hodgman, d = 1 by interval overlap).
Polytope intersect(const Polytope& a, const Polytope& b);

/// Axis-aligned box [lo, hi] as a polytope.
Polytope box_polytope(Vec lo, Vec hi, int dim);

/// Voronoi cells V_{P,v} of the Delone set X_P + x.
struct PatchCells {
  ReturnVectorSet returns;
  double sites_covering_radius = 0.0;  // estimate for X_P + x
  double cutoff = 0.0;                  // 4 · sites_covering_radius
  std::vector<std::size_t> site_index;  // indices into returns.sites with a computed cell
  std::vector<Polytope> cells;
  /// Points of X in each cell (closed, tolerance kEta), absolute coordinates, fuzzy-sorted.
  std::vector<std::vector<Vec>> clouds;
};

/// Cells of every site whose cutoff-neighborhood lies inside the sites' window.
/// Throws InsufficientWindow, NoOccurrenceNearOrigin.
PatchCells voronoi_cells_of_patch(const WindowedDeloneSet& X, const Atlas& atlas, std::size_t class_id);

struct CellClassSummary {
  ClassIndex classes{Equivalence::Translation};
  std::vector<std::size_t> class_of_cell;      // per entry of PatchCells::cells
  std::vector<std::size_t> representative;     // first cell index of each class
};

/// Classes of the clouds X ∩ V_{P,v} up to translation.
CellClassSummary cell_patch_classes(const WindowedDeloneSet& X, const PatchCells& cells);

struct CellReturnResult {
  std::size_t cell = 0;                    // entry of PatchCells::cells
  double L = 1.0;
  int n = 1;
  double patch_radius = 0.0;               // L^n · R
  std::vector<Vec> return_vectors;         // qualifying w, nearest first
  ClassIndex classes{Equivalence::Centered};  // P_w = (X − site − w) ∩ B_{L^n R}(0)
  std::size_t candidates_checked = 0;
  bool central_ball_agrees = true;         // P_w ∩ B_{R/22} identical for all w
  std::string search_space = "w = y - site, y in X, |y| + L^n R <= W";
};

/// Return vectors w of V_{P,v} ∩ X ((X − w) ∩ V = X ∩ V) searched over X − site,
/// and the classes of the patches P_w. Throws InsufficientWindow, NoReturnVectorsFound.
CellReturnResult cell_return_patches(const WindowedDeloneSet& X, const PatchCells& cells, std::size_t cell,
                                     int n, double L);

/// Tiling check: cells of all sites near the box [−a, a]^d, clipped to the box.
struct TilingReport {
  double box_half_side = 0.0;
  double box_measure = 0.0;
  double cell_measure_sum = 0.0;
  double relative_error = 0.0;
  double max_pair_overlap = 0.0;
  std::size_t cells = 0;
};

/// Uses cutoff 4·R_hat; requires the window to cover the box plus the cutoff.
TilingReport tiling_check(const WindowedDeloneSet& X, double R_hat, bool parallel = true);

}  // namespace delone
