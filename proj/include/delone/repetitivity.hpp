#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "delone/atlas.hpp"
#include "delone/point_set.hpp"

namespace delone {

/// Grid estimates of the Delone constants. R_upper = R_hat + resolution·√d/2
/// bounds the true covering radius of the sampled region.
struct DeloneEstimate {
  double r_hat = 0.0;
  double R_hat = 0.0;
  double R_upper = 0.0;
  double resolution = 0.0;
  double region_radius = 0.0;  // R_hat is measured on B_{region_radius}(0)
};

/// r_hat = half the minimum pairwise distance; R_hat by a grid scan of an
/// interior ball that stays clear of the window boundary.
/// Throws WindowTooSmall when B_{W/2}(0) holds fewer than two points.
DeloneEstimate estimate_delone_params(const WindowedDeloneSet& X, std::optional<double> step = {},
                                      bool parallel = true);

struct CoveringRadius {
  double value = 0.0;       // max grid-point distance to the nearest site
  double resolution = 0.0;  // grid step h
  double upper = 0.0;       // value + h·√d/2
  double region_radius = 0.0;
};

/// Covering radius of `sites` over the closed ball B_rho(0). Default step:
/// an eighth of the sites' minimum separation (rho/256 for a single site).
/// Throws EmptySites.
CoveringRadius covering_radius(std::span<const Vec> sites, int dim, double rho, std::optional<double> step = {},
                               bool parallel = true);

struct RepetitivityOptions {
  std::optional<double> step;  // grid step; default r_hat/4
  bool parallel = true;
};

/// M̂_X(R): max over translation classes of the R-atlas of (covering radius of
/// the class placements on B_{W−2R}(0) + largest offset from the ball center).
/// Throws InsufficientWindow unless R < W/4.
double repetitivity_function(const WindowedDeloneSet& X, double R, const RepetitivityOptions& opt = {});

struct ClassRepetitivity {
  double R = 0.0;
  std::size_t class_id = 0;
  std::size_t size = 0;
  double diameter = 0.0;
  double cover = 0.0;
  double ratio = 0.0;  // (cover + diameter) / diameter; 0 for singletons
};

struct RepetitivityEstimate {
  std::vector<double> R_grid;
  std::vector<double> M_of_R;
  std::vector<std::size_t> class_counts;
  double L_hat = 1.0;
  std::vector<ClassRepetitivity> per_class;
  std::optional<double> threshold_radius;  // smallest R from which M̂ ≤ (L_hat+1)·2R on the rest of the grid
  double resolution = 0.0;
  bool monotone = true;  // M_of_R nondecreasing up to two grid resolutions
};

/// Throws InsufficientWindow (max R ≥ W/4) and DegenerateDiameter (only singleton classes).
RepetitivityEstimate lr_constant(const WindowedDeloneSet& X, const std::vector<double>& R_grid,
                                 const RepetitivityOptions& opt = {});

struct FactorLRClass {
  double R = 0.0;
  std::size_t class_id = 0;
  double diameter = 0.0;
  double needed = 0.0;  // radius that provably contains a copy around every point of the region
  double allowed = 0.0;  // 5·L·diameter
  bool passed = false;
};

struct FactorLRReport {
  double L = 1.0;
  std::vector<double> R_grid;
  std::vector<FactorLRClass> classes;
  std::size_t failures = 0;
  /// Smallest diameter d such that every tested class with diameter ≥ d passes.
  std::optional<double> threshold_diameter;
  double smallest_diameter = 0.0;
  bool passed = false;  // the class(es) of largest diameter pass
  double resolution = 0.0;
};

/// Every ball of radius 5·L·diam(P) in the valid region of Y contains a
/// translated copy of P, for each non-singleton class P of the R-atlases of Y.
/// The containment radius is certified from the grid covering radius of the
/// placements, so failures can only be over-reported by one grid step.
FactorLRReport check_factor_lr(const WindowedDeloneSet& Y, double L, const std::vector<double>& R_grid,
                               const RepetitivityOptions& opt = {});

}  // namespace delone
