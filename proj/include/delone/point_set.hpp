#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "delone/geometry.hpp"
#include "json.hpp"

namespace delone {

/// Range/nearest queries over a fixed cloud: sorted coordinates for d = 1,
/// a uniform bucket grid for d = 2.
class PointIndex {
 public:
  PointIndex() = default;
  PointIndex(std::vector<Vec> points, int dim);

  int dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::span<const Vec> points() const { return points_; }

  /// Indices of points in B_r(c), ascending. `open` excludes points within
  /// kEta of the sphere; closed includes them.
  void in_ball(Vec c, double r, bool open, std::vector<std::size_t>& out) const;
  std::vector<std::size_t> in_ball(Vec c, double r, bool open) const {
    std::vector<std::size_t> out;
    in_ball(c, r, open, out);
    return out;
  }

  std::optional<std::size_t> find(Vec p, double tol = kEta) const;

  /// Nearest point (index, distance). Requires a nonempty index.
  std::pair<std::size_t, double> nearest(Vec p) const;

 private:
  void cells_for(Vec lo, Vec hi, std::int64_t& i0, std::int64_t& i1, std::int64_t& j0,
                 std::int64_t& j1) const;

  int dim_ = 1;
  std::vector<Vec> points_;
  // d = 1: permutation sorting points by x, and the sorted x values.
  std::vector<std::size_t> order_;
  std::vector<double> sorted_x_;
  // d = 2: CSR bucket grid.
  Vec origin_{};
  double cell_ = 1.0;
  std::int64_t nx_ = 0, ny_ = 0;
  std::vector<std::size_t> cell_start_;
  std::vector<std::size_t> cell_items_;
};

/// Membership hash quantized at resolution eta with 3^d neighbor-bucket probing,
/// so a point within eta of a stored point is always found.
class PointHash {
 public:
  explicit PointHash(int dim, double eta = kEta) : dim_(dim), eta_(eta) {}

  /// Inserts unless an existing point lies within eta; returns the index of the
  /// stored point and whether an insertion happened.
  std::pair<std::size_t, bool> insert(Vec p);
  std::optional<std::size_t> find(Vec p) const;
  std::span<const Vec> points() const { return points_; }

 private:
  struct KeyHash {
    std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& k) const noexcept {
      return std::hash<std::int64_t>()(k.first * 0x9E3779B97F4A7C15LL ^ k.second);
    }
  };
  int dim_;
  double eta_;
  std::vector<Vec> points_;
  std::unordered_multimap<std::pair<std::int64_t, std::int64_t>, std::size_t, KeyHash> buckets_;
};

/// Finite window X ∩ B_W(0) of a Delone set. Immutable after construction;
/// points are sorted lexicographically and pairwise distinct.
class WindowedDeloneSet {
 public:
  struct Options {
    std::vector<int> labels;
    std::optional<double> r_declared;
    std::optional<double> R_declared;
    nlohmann::json meta = nlohmann::json::object();
  };

  WindowedDeloneSet() = default;

  /// Validates and canonicalizes. Throws UnsupportedDimension,
  /// PointOutsideWindow, DuplicatePoints.
  static WindowedDeloneSet build(std::vector<Vec> points, int dim, double window_radius,
                                 Options options);
  static WindowedDeloneSet build(std::vector<Vec> points, int dim, double window_radius) {
    return build(std::move(points), dim, window_radius, Options{});
  }

  int dim() const { return dim_; }
  double window_radius() const { return window_; }
  std::size_t size() const { return index_.size(); }
  bool empty() const { return index_.empty(); }
  std::span<const Vec> points() const { return index_.points(); }
  const Vec& point(std::size_t i) const { return index_.points()[i]; }
  bool has_labels() const { return !labels_.empty(); }
  std::span<const int> labels() const { return labels_; }
  int label(std::size_t i) const { return labels_.empty() ? kNoLabel : labels_[i]; }
  std::optional<double> r_declared() const { return r_declared_; }
  std::optional<double> R_declared() const { return R_declared_; }
  const nlohmann::json& meta() const { return meta_; }
  const PointIndex& index() const { return index_; }

  /// True when B_rho(c) lies inside the window (the validity contract).
  bool ball_inside(Vec c, double rho) const { return norm(c) + rho <= window_ + kEta; }
  /// Throws InsufficientWindow when B_rho(c) leaves the window.
  void require_ball(Vec c, double rho, const char* what) const;

  std::vector<std::size_t> in_ball(Vec c, double r, bool open) const {
    return index_.in_ball(c, r, open);
  }
  std::optional<std::size_t> find(Vec p, double tol = kEta) const { return index_.find(p, tol); }
  std::pair<std::size_t, double> nearest(Vec p) const { return index_.nearest(p); }

  /// Indices of points with ||p|| + margin <= W.
  std::vector<std::size_t> interior(double margin) const;

  /// X − v on the window B_{W−||v||}(0).
  WindowedDeloneSet translated(Vec v) const;
  /// X ∩ B_{W'}(0) for W' <= W.
  WindowedDeloneSet restricted(double new_window) const;
  /// Same points with labels dropped.
  WindowedDeloneSet unlabeled() const;

 private:
  int dim_ = 1;
  double window_ = 0.0;
  PointIndex index_;
  std::vector<int> labels_;
  std::optional<double> r_declared_;
  std::optional<double> R_declared_;
  nlohmann::json meta_ = nlohmann::json::object();
};

/// Checks of the declared Delone constants against the data.
struct DeclaredCheck {
  double min_distance = 0.0;
  bool r_ok = true;
  double worst_sample_distance = 0.0;
  bool R_ok = true;
  std::size_t samples = 0;
};

/// Uniform discreteness is checked exactly; relative density by sampling
/// `samples` deterministic points of B_{W−R}(0).
DeclaredCheck validate_declared(const WindowedDeloneSet& X, std::size_t samples = 256);

/// Minimum pairwise distance among points in `indices` (against any point of X).
double min_pairwise_distance(const WindowedDeloneSet& X, std::span<const std::size_t> indices);

}  // namespace delone
