#include "delone/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "delone/voronoi.hpp"

namespace delone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Distance from point i to its nearest other point, or `cap` if none is closer.
double nearest_other(const PointIndex& idx, std::size_t i, double cap, std::vector<std::size_t>& buf) {
  const Vec p = idx.points()[i];
  double r = std::isfinite(cap) ? cap : 1.0;
  for (int step = 0; step < 64; ++step) {
    idx.in_ball(p, r, false, buf);
    double best = kInf;
    for (std::size_t j : buf)
      if (j != i) best = std::min(best, dist(idx.points()[j], p));
    if (best < kInf) return std::min(best, cap);
    if (std::isfinite(cap)) return cap;
    r *= 2.0;
  }
  return cap;
}

std::int64_t grid_extent(double rho, double h) { return static_cast<std::int64_t>(std::floor(rho / h + 1e-12)); }

}  // namespace

namespace serial {

std::vector<Patch> extract_patches(const WindowedDeloneSet& X, std::span<const Vec> centers, double R) {
  std::vector<Patch> out(centers.size());
  for (std::size_t k = 0; k < centers.size(); ++k) out[k] = extract_patch_unchecked(X, centers[k], R);
  return out;
}

double grid_cover(const PointIndex& sites, double rho, double h) {
  const std::int64_t m = grid_extent(rho, h);
  double worst = 0.0;
  if (sites.dim() == 1) {
    for (std::int64_t k = -m; k <= m; ++k)
      worst = std::max(worst, sites.nearest({static_cast<double>(k) * h, 0.0}).second);
    return worst;
  }
  for (std::int64_t j = -m; j <= m; ++j) {
    const double y = static_cast<double>(j) * h;
    const std::int64_t mx = grid_extent(std::sqrt(std::max(0.0, rho * rho - y * y)), h);
    for (std::int64_t i = -mx; i <= mx; ++i)
      worst = std::max(worst, sites.nearest({static_cast<double>(i) * h, y}).second);
  }
  return worst;
}

std::vector<Polytope> voronoi_cells(const WindowedDeloneSet& X, std::span<const std::size_t> indices,
                                    double cutoff) {
  std::vector<Polytope> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(voronoi_cell(X, i, cutoff));
  return out;
}

double min_separation(const PointIndex& pts) {
  double best = kInf;
  std::vector<std::size_t> buf;
  for (std::size_t i = 0; i < pts.size(); ++i) best = std::min(best, nearest_other(pts, i, best, buf));
  return best;
}

}  // namespace serial

namespace parallel {

std::vector<Patch> extract_patches(const WindowedDeloneSet& X, std::span<const Vec> centers, double R) {
  std::vector<Patch> out(centers.size());
  const auto n = static_cast<std::int64_t>(centers.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t k = 0; k < n; ++k)
    out[static_cast<std::size_t>(k)] = extract_patch_unchecked(X, centers[static_cast<std::size_t>(k)], R);
  return out;
}

double grid_cover(const PointIndex& sites, double rho, double h) {
  const std::int64_t m = grid_extent(rho, h);
  double worst = 0.0;
  if (sites.dim() == 1) {
#pragma omp parallel for reduction(max : worst) schedule(static)
    for (std::int64_t k = -m; k <= m; ++k)
      worst = std::max(worst, sites.nearest({static_cast<double>(k) * h, 0.0}).second);
    return worst;
  }
#pragma omp parallel for reduction(max : worst) schedule(dynamic, 4)
  for (std::int64_t j = -m; j <= m; ++j) {
    const double y = static_cast<double>(j) * h;
    const std::int64_t mx = grid_extent(std::sqrt(std::max(0.0, rho * rho - y * y)), h);
    for (std::int64_t i = -mx; i <= mx; ++i)
      worst = std::max(worst, sites.nearest({static_cast<double>(i) * h, y}).second);
  }
  return worst;
}

std::vector<Polytope> voronoi_cells(const WindowedDeloneSet& X, std::span<const std::size_t> indices,
                                    double cutoff) {
  std::vector<Polytope> out(indices.size());
  std::exception_ptr error;
  const auto n = static_cast<std::int64_t>(indices.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t k = 0; k < n; ++k) {
    try {
      out[static_cast<std::size_t>(k)] = voronoi_cell(X, indices[static_cast<std::size_t>(k)], cutoff);
    } catch (...) {
#pragma omp critical(delone_voronoi_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

double min_separation(const PointIndex& pts) {
  // Seed with a cheap upper bound so the per-thread searches stay local.
  std::vector<std::size_t> seed_buf;
  double seed = pts.size() > 1 ? nearest_other(pts, 0, kInf, seed_buf) : kInf;
  double best = seed;
  const auto n = static_cast<std::int64_t>(pts.size());
#pragma omp parallel reduction(min : best)
  {
    std::vector<std::size_t> buf;
    double local = seed;
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t i = 0; i < n; ++i)
      local = std::min(local, nearest_other(pts, static_cast<std::size_t>(i), local, buf));
    best = std::min(best, local);
  }
  return best;
}

}  // namespace parallel

}  // namespace delone
