#include "delone/point_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "delone/error.hpp"

namespace delone {

// ---------------------------------------------------------------- PointIndex

PointIndex::PointIndex(std::vector<Vec> points, int dim) : dim_(dim), points_(std::move(points)) {
  const std::size_t n = points_.size();
  if (dim_ == 1) {
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::sort(order_.begin(), order_.end(),
              [&](std::size_t a, std::size_t b) { return points_[a].x < points_[b].x; });
    sorted_x_.resize(n);
    for (std::size_t k = 0; k < n; ++k) sorted_x_[k] = points_[order_[k]].x;
    return;
  }
  if (n == 0) return;
  Vec lo = points_[0], hi = points_[0];
  for (const Vec& p : points_) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  const double wx = hi.x - lo.x, wy = hi.y - lo.y;
  // Collinear or single-point clouds have no area; fall back to the long side.
  cell_ = std::max({std::sqrt(wx * wy / static_cast<double>(n)), std::max(wx, wy) / static_cast<double>(n), 1e-6});
  // Cap the grid size for very sparse clouds.
  while ((wx / cell_ + 1.0) * (wy / cell_ + 1.0) > 4.0e6) cell_ *= 2.0;
  origin_ = lo;
  nx_ = static_cast<std::int64_t>(std::floor((hi.x - lo.x) / cell_)) + 1;
  ny_ = static_cast<std::int64_t>(std::floor((hi.y - lo.y) / cell_)) + 1;
  std::vector<std::size_t> counts(static_cast<std::size_t>(nx_ * ny_) + 1, 0);
  auto cell_of = [&](const Vec& p) {
    auto i = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((p.x - lo.x) / cell_)), 0, nx_ - 1);
    auto j = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((p.y - lo.y) / cell_)), 0, ny_ - 1);
    return static_cast<std::size_t>(j * nx_ + i);
  };
  for (const Vec& p : points_) ++counts[cell_of(p) + 1];
  std::partial_sum(counts.begin(), counts.end(), counts.begin());
  cell_start_ = counts;
  cell_items_.resize(n);
  std::vector<std::size_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t k = 0; k < n; ++k) cell_items_[fill[cell_of(points_[k])]++] = k;
}

void PointIndex::cells_for(Vec lo, Vec hi, std::int64_t& i0, std::int64_t& i1, std::int64_t& j0,
                           std::int64_t& j1) const {
  i0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor((lo.x - origin_.x) / cell_)));
  i1 = std::min<std::int64_t>(nx_ - 1, static_cast<std::int64_t>(std::floor((hi.x - origin_.x) / cell_)));
  j0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor((lo.y - origin_.y) / cell_)));
  j1 = std::min<std::int64_t>(ny_ - 1, static_cast<std::int64_t>(std::floor((hi.y - origin_.y) / cell_)));
}

void PointIndex::in_ball(Vec c, double r, bool open, std::vector<std::size_t>& out) const {
  out.clear();
  if (points_.empty() || r <= 0.0) return;
  const double limit = open ? r - kEta : r + kEta;
  if (limit <= 0.0 && open) return;
  auto accept = [&](std::size_t k) {
    const double d = dist(points_[k], c);
    return open ? d < limit : d <= limit;
  };
  if (dim_ == 1) {
    auto first = std::lower_bound(sorted_x_.begin(), sorted_x_.end(), c.x - r - kEta);
    auto last = std::upper_bound(sorted_x_.begin(), sorted_x_.end(), c.x + r + kEta);
    for (auto it = first; it != last; ++it) {
      const std::size_t k = order_[static_cast<std::size_t>(it - sorted_x_.begin())];
      if (accept(k)) out.push_back(k);
    }
  } else {
    std::int64_t i0, i1, j0, j1;
    const double pad = r + kEta;
    cells_for({c.x - pad, c.y - pad}, {c.x + pad, c.y + pad}, i0, i1, j0, j1);
    for (std::int64_t j = j0; j <= j1; ++j)
      for (std::int64_t i = i0; i <= i1; ++i) {
        const auto cell = static_cast<std::size_t>(j * nx_ + i);
        for (std::size_t t = cell_start_[cell]; t < cell_start_[cell + 1]; ++t)
          if (accept(cell_items_[t])) out.push_back(cell_items_[t]);
      }
  }
  std::sort(out.begin(), out.end());
}

std::optional<std::size_t> PointIndex::find(Vec p, double tol) const {
  if (points_.empty()) return std::nullopt;
  if (dim_ == 1) {
    auto it = std::lower_bound(sorted_x_.begin(), sorted_x_.end(), p.x - tol);
    for (; it != sorted_x_.end() && *it <= p.x + tol; ++it) {
      const std::size_t k = order_[static_cast<std::size_t>(it - sorted_x_.begin())];
      if (near(points_[k], p, tol)) return k;
    }
    return std::nullopt;
  }
  std::int64_t i0, i1, j0, j1;
  cells_for({p.x - tol, p.y - tol}, {p.x + tol, p.y + tol}, i0, i1, j0, j1);
  for (std::int64_t j = j0; j <= j1; ++j)
    for (std::int64_t i = i0; i <= i1; ++i) {
      const auto cell = static_cast<std::size_t>(j * nx_ + i);
      for (std::size_t t = cell_start_[cell]; t < cell_start_[cell + 1]; ++t)
        if (near(points_[cell_items_[t]], p, tol)) return cell_items_[t];
    }
  return std::nullopt;
}

std::pair<std::size_t, double> PointIndex::nearest(Vec p) const {
  if (points_.empty()) throw Error(ErrorCode::EmptySites, "nearest query on an empty index");
  if (dim_ == 1) {
    auto it = std::lower_bound(sorted_x_.begin(), sorted_x_.end(), p.x);
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    auto consider = [&](std::size_t pos) {
      const std::size_t k = order_[pos];
      const double d = dist(points_[k], p);
      if (d < best_d || (d == best_d && k < best)) {
        best_d = d;
        best = k;
      }
    };
    const auto pos = static_cast<std::size_t>(it - sorted_x_.begin());
    if (pos < sorted_x_.size()) consider(pos);
    if (pos > 0) consider(pos - 1);
    return {best, best_d};
  }
  const double fx = (p.x - origin_.x) / cell_;
  const double fy = (p.y - origin_.y) / cell_;
  const auto ci = static_cast<std::int64_t>(std::floor(fx));
  const auto cj = static_cast<std::int64_t>(std::floor(fy));
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  const std::int64_t max_ring =
      std::max({std::abs(ci), std::abs(ci - (nx_ - 1)), std::abs(cj), std::abs(cj - (ny_ - 1))});
  // Queries far outside the grid start at the first ring that touches it.
  const std::int64_t first_ring = std::max<std::int64_t>({0, -ci, ci - (nx_ - 1), -cj, cj - (ny_ - 1)});
  auto scan = [&](std::int64_t i, std::int64_t j) {
    const auto cell = static_cast<std::size_t>(j * nx_ + i);
    for (std::size_t t = cell_start_[cell]; t < cell_start_[cell + 1]; ++t) {
      const std::size_t idx = cell_items_[t];
      const double d = dist(points_[idx], p);
      if (d < best_d || (d == best_d && idx < best)) {
        best_d = d;
        best = idx;
      }
    }
  };
  for (std::int64_t k = first_ring; k <= max_ring; ++k) {
    if (best_d <= static_cast<double>(k - 1) * cell_) break;
    const std::int64_t j0 = std::max<std::int64_t>(cj - k, 0), j1 = std::min<std::int64_t>(cj + k, ny_ - 1);
    const std::int64_t i0 = std::max<std::int64_t>(ci - k, 0), i1 = std::min<std::int64_t>(ci + k, nx_ - 1);
    for (std::int64_t j = j0; j <= j1; ++j) {
      if (j == cj - k || j == cj + k) {
        for (std::int64_t i = i0; i <= i1; ++i) scan(i, j);
      } else {
        if (ci - k >= 0 && ci - k < nx_) scan(ci - k, j);
        if (k > 0 && ci + k >= 0 && ci + k < nx_) scan(ci + k, j);
      }
    }
  }
  return {best, best_d};
}

// ----------------------------------------------------------------- PointHash

std::pair<std::size_t, bool> PointHash::insert(Vec p) {
  if (auto hit = find(p)) return {*hit, false};
  const std::size_t id = points_.size();
  points_.push_back(p);
  buckets_.emplace(std::make_pair(quantize(p.x, eta_), dim_ == 2 ? quantize(p.y, eta_) : 0), id);
  return {id, true};
}

std::optional<std::size_t> PointHash::find(Vec p) const {
  const std::int64_t qx = quantize(p.x, eta_);
  const std::int64_t qy = dim_ == 2 ? quantize(p.y, eta_) : 0;
  const int ry = dim_ == 2 ? 1 : 0;
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = -ry; dy <= ry; ++dy) {
      auto [lo, hi] = buckets_.equal_range({qx + dx, qy + dy});
      for (auto it = lo; it != hi; ++it)
        if (near(points_[it->second], p, eta_)) return it->second;
    }
  return std::nullopt;
}

// -------------------------------------------------------- WindowedDeloneSet

WindowedDeloneSet WindowedDeloneSet::build(std::vector<Vec> points, int dim, double window_radius,
                                           Options options) {
  if (dim != 1 && dim != 2)
    throw Error(ErrorCode::UnsupportedDimension, "dimension " + std::to_string(dim) + " (supported: 1, 2)");
  if (!(window_radius > 0.0) || !std::isfinite(window_radius))
    throw Error(ErrorCode::InvalidArgument, "window radius must be positive and finite");
  if (!options.labels.empty() && options.labels.size() != points.size())
    throw Error(ErrorCode::InvalidArgument, "labels and points differ in length");
  for (Vec& p : points) {
    if (!is_finite(p)) throw Error(ErrorCode::InvalidArgument, "non-finite coordinate");
    if (dim == 1) p.y = 0.0;
    if (norm(p) > window_radius + kEta) {
      std::ostringstream os;
      os.precision(17);
      os << "point (" << p.x << ", " << p.y << ") outside B_" << window_radius << "(0)";
      throw Error(ErrorCode::PointOutsideWindow, os.str());
    }
  }
  std::vector<std::size_t> perm(points.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return lex_less(points[a], points[b]); });
  std::vector<Vec> sorted(points.size());
  std::vector<int> labels(options.labels.empty() ? 0 : points.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    sorted[k] = points[perm[k]];
    if (!labels.empty()) labels[k] = options.labels[perm[k]];
  }

  WindowedDeloneSet X;
  X.dim_ = dim;
  X.window_ = window_radius;
  X.index_ = PointIndex(std::move(sorted), dim);
  X.labels_ = std::move(labels);
  X.r_declared_ = options.r_declared;
  X.R_declared_ = options.R_declared;
  X.meta_ = options.meta.is_null() ? nlohmann::json::object() : std::move(options.meta);

  std::vector<std::size_t> nb;
  for (std::size_t k = 0; k < X.size(); ++k) {
    X.index_.in_ball(X.point(k), kEta, false, nb);
    if (nb.size() > 1) {
      std::ostringstream os;
      os.precision(17);
      os << "points closer than " << kEta << " near (" << X.point(k).x << ", " << X.point(k).y << ")";
      throw Error(ErrorCode::DuplicatePoints, os.str());
    }
  }
  return X;
}

void WindowedDeloneSet::require_ball(Vec c, double rho, const char* what) const {
  if (!ball_inside(c, rho)) {
    std::ostringstream os;
    os.precision(12);
    os << what << ": ball of radius " << rho << " at distance " << norm(c)
       << " from the origin leaves the window of radius " << window_;
    throw Error(ErrorCode::InsufficientWindow, os.str());
  }
}

std::vector<std::size_t> WindowedDeloneSet::interior(double margin) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < size(); ++k)
    if (ball_inside(point(k), margin)) out.push_back(k);
  return out;
}

WindowedDeloneSet WindowedDeloneSet::translated(Vec v) const {
  const double w = window_ - norm(v);
  if (w <= 0.0) throw Error(ErrorCode::InsufficientWindow, "translation larger than the window");
  std::vector<Vec> pts;
  Options opt;
  for (std::size_t k = 0; k < size(); ++k) {
    const Vec p = point(k) - v;
    if (norm(p) <= w) {
      pts.push_back(p);
      if (has_labels()) opt.labels.push_back(labels_[k]);
    }
  }
  opt.r_declared = r_declared_;
  opt.R_declared = R_declared_;
  opt.meta = meta_;
  opt.meta["translated_by"] = {v.x, v.y};
  return build(std::move(pts), dim_, w, std::move(opt));
}

WindowedDeloneSet WindowedDeloneSet::restricted(double new_window) const {
  if (new_window > window_ + kEta) throw Error(ErrorCode::InsufficientWindow, "restriction beyond the window");
  std::vector<Vec> pts;
  Options opt;
  for (std::size_t k = 0; k < size(); ++k)
    if (norm(point(k)) <= new_window) {
      pts.push_back(point(k));
      if (has_labels()) opt.labels.push_back(labels_[k]);
    }
  opt.r_declared = r_declared_;
  opt.R_declared = R_declared_;
  opt.meta = meta_;
  return build(std::move(pts), dim_, new_window, std::move(opt));
}

WindowedDeloneSet WindowedDeloneSet::unlabeled() const {
  WindowedDeloneSet copy = *this;
  copy.labels_.clear();
  return copy;
}

double min_pairwise_distance(const WindowedDeloneSet& X, std::span<const std::size_t> indices) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> nb;
  for (std::size_t k : indices) {
    // Grow the search ball until another point shows up.
    double r = 1.0;
    for (;;) {
      X.index().in_ball(X.point(k), r, false, nb);
      if (nb.size() > 1 || r > 4.0 * X.window_radius()) break;
      r *= 2.0;
    }
    for (std::size_t j : nb)
      if (j != k) best = std::min(best, dist(X.point(j), X.point(k)));
  }
  return best;
}

DeclaredCheck validate_declared(const WindowedDeloneSet& X, std::size_t samples) {
  DeclaredCheck out;
  std::vector<std::size_t> all(X.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  out.min_distance = X.size() > 1 ? min_pairwise_distance(X, all) : 0.0;
  if (auto r = X.r_declared()) out.r_ok = out.min_distance >= 2.0 * *r - kEta;
  if (auto R = X.R_declared()) {
    const double rho = X.window_radius() - *R;
    if (rho > 0.0 && !X.empty()) {
      // Deterministic low-discrepancy samples (golden-ratio sequences).
      const double g1 = 0.6180339887498949, g2 = 0.7548776662466927, g3 = 0.5698402909980532;
      for (std::size_t k = 0; k < samples; ++k) {
        const double a = std::fmod(0.5 + g1 * static_cast<double>(k), 1.0);
        Vec y;
        if (X.dim() == 1) {
          y = {(2.0 * a - 1.0) * rho, 0.0};
        } else {
          const double b = std::fmod(0.5 + g2 * static_cast<double>(k), 1.0);
          const double c = std::fmod(0.5 + g3 * static_cast<double>(k), 1.0);
          const double rad = rho * std::sqrt(a);
          const double th = 2.0 * 3.141592653589793 * (0.5 * b + 0.5 * c);
          y = {rad * std::cos(th), rad * std::sin(th)};
        }
        const double d = X.nearest(y).second;
        out.worst_sample_distance = std::max(out.worst_sample_distance, d);
        ++out.samples;
      }
      out.R_ok = out.worst_sample_distance <= *R + kEta;
    }
  }
  return out;
}

}  // namespace delone
