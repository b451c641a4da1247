#include "delone/repetitivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "delone/error.hpp"
#include "delone/kernels.hpp"

namespace delone {

namespace {

constexpr double kMaxGridPoints = 4.0e6;

// Coarsens h until the grid over B_rho has at most kMaxGridPoints points.
double capped_step(double h, double rho, int dim) {
  const auto count = [&](double s) {
    return dim == 1 ? 2.0 * rho / s + 1.0 : 3.14159265358979 * (rho / s + 1.0) * (rho / s + 1.0);
  };
  while (count(h) > kMaxGridPoints) h *= 1.25;
  return h;
}

double slack(double h, int dim) { return h * std::sqrt(static_cast<double>(dim)) / 2.0; }

double default_step(const WindowedDeloneSet& X, const RepetitivityOptions& opt) {
  if (opt.step) {
    if (!(*opt.step > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid step must be positive");
    return *opt.step;
  }
  if (X.size() < 2) throw Error(ErrorCode::WindowTooSmall, "need at least two points for a default grid step");
  return min_separation(X.index(), opt.parallel) / 8.0;  // r_hat / 4
}

void require_quarter_window(const WindowedDeloneSet& X, double R) {
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  if (R >= X.window_radius() / 4.0) {
    std::ostringstream os;
    os << "radius " << R << " needs a window above " << 4.0 * R << " (have " << X.window_radius() << ")";
    throw Error(ErrorCode::InsufficientWindow, os.str());
  }
}

struct ClassCover {
  double cover = 0.0;
  double reach = 0.0;  // max offset norm from the representative's ball center
};

// Placements are complete on B_{rho}(0) only. A grid point at depth g whose
// nearest placement lies within g sees the true distance; shrink until it does.
double reliable_cover(const PointIndex& sites, double rho, double h, bool parallel) {
  double g = std::min(rho / 2.0, 4.0 * h);
  for (;;) {
    const double c = grid_cover(sites, rho - g, h, parallel);
    if (c <= g || g >= rho / 2.0) return c;
    g = std::min(rho / 2.0, 2.0 * c);
  }
}

std::vector<ClassCover> class_covers(const WindowedDeloneSet& X, const Atlas& A, double h, bool parallel) {
  const double rho = X.window_radius() - 2.0 * A.radius;
  std::vector<ClassCover> out(A.size());
  for (std::size_t c = 0; c < A.size(); ++c) {
    const PointIndex idx(A.sites(X, c), X.dim());
    out[c].cover = reliable_cover(idx, rho, h, parallel);
    const Patch& rep = A[c].representative;
    for (const Vec& o : rep.offsets) out[c].reach = std::max(out[c].reach, dist(o, rep.center));
  }
  return out;
}

}  // namespace

DeloneEstimate estimate_delone_params(const WindowedDeloneSet& X, std::optional<double> step, bool parallel) {
  const double W = X.window_radius();
  if (X.in_ball({}, W / 2.0, false).size() < 2)
    throw Error(ErrorCode::WindowTooSmall, "B_{W/2}(0) holds fewer than two points");
  DeloneEstimate out;
  out.r_hat = min_separation(X.index(), parallel) / 2.0;
  double h = step.value_or(out.r_hat / 4.0);
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid step must be positive");
  // Keep the scan region a margin g inside the window; the nearest point of a
  // grid point at depth g is then inside the window whenever R_hat <= g.
  double g = std::min(W / 2.0, std::max(8.0 * out.r_hat, W / 8.0));
  for (int round = 0; round < 8; ++round) {
    out.region_radius = W - g;
    out.resolution = capped_step(h, out.region_radius, X.dim());
    out.R_hat = grid_cover(X.index(), out.region_radius, out.resolution, parallel);
    if (out.R_hat <= g || g >= W / 2.0) break;
    g = std::min(W / 2.0, 2.0 * out.R_hat);
  }
  out.R_upper = out.R_hat + slack(out.resolution, X.dim());
  return out;
}

CoveringRadius covering_radius(std::span<const Vec> sites, int dim, double rho, std::optional<double> step,
                               bool parallel) {
  if (sites.empty()) throw Error(ErrorCode::EmptySites, "covering radius of an empty site set");
  if (!(rho >= 0.0)) throw Error(ErrorCode::InvalidArgument, "region radius must be nonnegative");
  const PointIndex idx(std::vector<Vec>(sites.begin(), sites.end()), dim);
  double h = 0.0;
  if (step) {
    h = *step;
  } else if (sites.size() > 1) {
    h = min_separation(idx, parallel) / 8.0;
  } else {
    h = rho > 0.0 ? rho / 256.0 : 1.0;
  }
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid step must be positive");
  CoveringRadius out;
  out.region_radius = rho;
  out.resolution = capped_step(h, rho, dim);
  out.value = grid_cover(idx, rho, out.resolution, parallel);
  out.upper = out.value + slack(out.resolution, dim);
  return out;
}

double repetitivity_function(const WindowedDeloneSet& X, double R, const RepetitivityOptions& opt) {
  require_quarter_window(X, R);
  const double h = capped_step(default_step(X, opt), X.window_radius() - 2.0 * R, X.dim());
  const Atlas A = r_atlas(X, R, Equivalence::Translation, opt.parallel);
  double M = 0.0;
  for (const ClassCover& c : class_covers(X, A, h, opt.parallel)) M = std::max(M, c.cover + c.reach);
  return M;
}

RepetitivityEstimate lr_constant(const WindowedDeloneSet& X, const std::vector<double>& R_grid,
                                 const RepetitivityOptions& opt) {
  if (R_grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty radius grid");
  RepetitivityEstimate out;
  out.R_grid = R_grid;
  std::sort(out.R_grid.begin(), out.R_grid.end());
  require_quarter_window(X, out.R_grid.back());
  require_quarter_window(X, out.R_grid.front());
  const double h0 = default_step(X, opt);
  // One resolution for the whole grid: the widest region decides the cap.
  out.resolution = capped_step(h0, X.window_radius() - 2.0 * out.R_grid.front(), X.dim());
  bool any = false;
  for (double R : out.R_grid) {
    const Atlas A = r_atlas(X, R, Equivalence::Translation, opt.parallel);
    const auto covers = class_covers(X, A, out.resolution, opt.parallel);
    double M = 0.0;
    for (std::size_t c = 0; c < A.size(); ++c) {
      M = std::max(M, covers[c].cover + covers[c].reach);
      ClassRepetitivity e;
      e.R = R;
      e.class_id = c;
      e.size = A[c].size();
      e.diameter = A[c].diameter();
      e.cover = covers[c].cover;
      if (e.size > 1 && e.diameter > kEta) {
        e.ratio = (e.cover + e.diameter) / e.diameter;
        out.L_hat = std::max(out.L_hat, e.ratio);
        any = true;
      }
      out.per_class.push_back(e);
    }
    out.M_of_R.push_back(M);
    out.class_counts.push_back(A.size());
  }
  if (!any) throw Error(ErrorCode::DegenerateDiameter, "every patch class is a single point");
  const double noise = 2.0 * out.resolution;
  for (std::size_t k = 1; k < out.M_of_R.size(); ++k)
    if (out.M_of_R[k] + noise < out.M_of_R[k - 1]) out.monotone = false;
  for (std::size_t k = out.R_grid.size(); k-- > 0;) {
    if (out.M_of_R[k] > (out.L_hat + 1.0) * 2.0 * out.R_grid[k]) break;
    out.threshold_radius = out.R_grid[k];
  }
  return out;
}

FactorLRReport check_factor_lr(const WindowedDeloneSet& Y, double L, const std::vector<double>& R_grid,
                               const RepetitivityOptions& opt) {
  if (!(L >= 1.0)) throw Error(ErrorCode::InvalidArgument, "L must be at least 1");
  if (R_grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty radius grid");
  FactorLRReport out;
  out.L = L;
  out.R_grid = R_grid;
  std::sort(out.R_grid.begin(), out.R_grid.end());
  const double h0 = default_step(Y, opt);
  out.resolution = h0;
  for (double R : out.R_grid) {
    if (R >= Y.window_radius() / 2.0) throw Error(ErrorCode::InsufficientWindow, "radius too large for the window");
    const Atlas A = r_atlas(Y, R, Equivalence::Translation, opt.parallel);
    for (std::size_t c = 0; c < A.size(); ++c) {
      const Patch& rep = A[c].representative;
      FactorLRClass e;
      e.R = R;
      e.class_id = c;
      e.diameter = rep.diameter();
      if (rep.size() < 2 || e.diameter <= kEta) continue;
      e.allowed = 5.0 * L * e.diameter;
      // Centered at the bounding-box midpoint of the cloud, measured from the placement.
      Vec lo = rep.offsets.front(), hi = lo;
      for (const Vec& o : rep.offsets) {
        lo = {std::min(lo.x, o.x), std::min(lo.y, o.y)};
        hi = {std::max(hi.x, o.x), std::max(hi.y, o.y)};
      }
      const Vec mid = 0.5 * (lo + hi);
      double reach = 0.0;
      for (const Vec& o : rep.offsets) reach = std::max(reach, dist(o, mid));
      const double rho = Y.window_radius() - 2.0 * R - e.allowed;
      if (rho <= 0.0) {
        std::ostringstream os;
        os << "ball radius " << e.allowed << " for a patch of diameter " << e.diameter << " leaves no valid region";
        throw Error(ErrorCode::InsufficientWindow, os.str());
      }
      std::vector<Vec> centers = A.sites(Y, c);
      for (Vec& s : centers) s = s - rep.center + mid;
      const PointIndex idx(std::move(centers), Y.dim());
      const double h = capped_step(h0, rho, Y.dim());
      out.resolution = std::max(out.resolution, h);
      e.needed = grid_cover(idx, rho, h, opt.parallel) + slack(h, Y.dim()) + reach;
      e.passed = e.needed <= e.allowed;
      if (!e.passed) ++out.failures;
      out.classes.push_back(e);
    }
  }
  if (out.classes.empty()) throw Error(ErrorCode::DegenerateDiameter, "no class with positive diameter");
  auto sorted = out.classes;
  std::sort(sorted.begin(), sorted.end(), [](const FactorLRClass& a, const FactorLRClass& b) {
    return a.diameter > b.diameter;
  });
  out.smallest_diameter = sorted.back().diameter;
  // Walk down from the largest diameters while everything passes.
  std::size_t k = 0;
  while (k < sorted.size()) {
    std::size_t j = k;
    bool ok = true;
    while (j < sorted.size() && std::abs(sorted[j].diameter - sorted[k].diameter) <= kEta) ok &= sorted[j++].passed;
    if (!ok) break;
    out.threshold_diameter = sorted[k].diameter;
    k = j;
  }
  out.passed = out.threshold_diameter.has_value();
  return out;
}

}  // namespace delone
