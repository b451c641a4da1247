#pragma once

// Data-parallel loops shared by the analyses. Every kernel exists twice:
// serial:: is the reference, parallel:: the OpenMP version. Results are
// identical (element-wise work, exact max/min reductions).

#include <cstddef>
#include <span>
#include <vector>

#include "delone/patch.hpp"
#include "delone/point_set.hpp"

namespace delone {

struct Polytope;

namespace serial {

/// Open-ball patches X ∩ B_R(c) for each center; no window check.
std::vector<Patch> extract_patches(const WindowedDeloneSet& X, std::span<const Vec> centers, double R);
/// Max over grid points k·h in the closed ball B_rho(0) of the distance to the nearest site.
double grid_cover(const PointIndex& sites, double rho, double h);
/// Cells of the given points of X with neighbors in B_cutoff.
std::vector<Polytope> voronoi_cells(const WindowedDeloneSet& X, std::span<const std::size_t> indices,
                                    double cutoff);
/// Smallest distance between two distinct points of the index.
double min_separation(const PointIndex& pts);

}  // namespace serial

namespace parallel {

std::vector<Patch> extract_patches(const WindowedDeloneSet& X, std::span<const Vec> centers, double R);
double grid_cover(const PointIndex& sites, double rho, double h);
std::vector<Polytope> voronoi_cells(const WindowedDeloneSet& X, std::span<const std::size_t> indices,
                                    double cutoff);
double min_separation(const PointIndex& pts);

}  // namespace parallel

/// Dispatch helpers used by the analysis modules.
inline std::vector<Patch> extract_patches(const WindowedDeloneSet& X, std::span<const Vec> centers, double R,
                                          bool par) {
  return par ? parallel::extract_patches(X, centers, R) : serial::extract_patches(X, centers, R);
}
inline double grid_cover(const PointIndex& sites, double rho, double h, bool par) {
  return par ? parallel::grid_cover(sites, rho, h) : serial::grid_cover(sites, rho, h);
}
inline double min_separation(const PointIndex& pts, bool par) {
  return par ? parallel::min_separation(pts) : serial::min_separation(pts);
}

}  // namespace delone
