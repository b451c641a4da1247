#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace delone {

/// Identity tolerance for point comparisons (absolute, unit-scale coordinates).
inline constexpr double kEta = 1e-9;

/// Label value for undecorated points.
inline constexpr int kNoLabel = -1;

/// A point or vector in R^d, d <= 2. One-dimensional data keeps y == 0.
struct Vec {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec& operator+=(Vec o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec& operator-=(Vec o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend constexpr Vec operator+(Vec a, Vec b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec operator-(Vec a, Vec b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec operator-(Vec a) { return {-a.x, -a.y}; }
  friend constexpr Vec operator*(double s, Vec a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec operator*(Vec a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec, Vec) = default;
};

constexpr double dot(Vec a, Vec b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec a, Vec b) { return a.x * b.y - a.y * b.x; }
constexpr double norm2(Vec a) { return dot(a, a); }
inline double norm(Vec a) { return std::hypot(a.x, a.y); }
inline double dist(Vec a, Vec b) { return norm(a - b); }
inline bool is_finite(Vec a) { return std::isfinite(a.x) && std::isfinite(a.y); }

inline bool near(Vec a, Vec b, double tol = kEta) { return dist(a, b) <= tol; }

/// Exact lexicographic order; a strict weak order for any input.
constexpr bool lex_less(Vec a, Vec b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

/// Lexicographic order that treats coordinates within `tol` as equal.
/// Consistent on point clouds whose coordinate differences are either
/// below tol or well above it, which holds for finite-type sets at unit scale.
constexpr bool fuzzy_less(Vec a, Vec b, double tol = kEta) {
  if (a.x < b.x - tol) return true;
  if (a.x > b.x + tol) return false;
  return a.y < b.y - tol;
}

/// Pointwise comparison of two clouds sorted by fuzzy_less.
inline bool same_sorted_cloud(std::span<const Vec> a, std::span<const Vec> b, double tol = kEta) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!near(a[i], b[i], tol)) return false;
  return true;
}

/// Largest pairwise distance in a cloud (0 for fewer than two points).
inline double cloud_diameter(std::span<const Vec> pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, dist(pts[i], pts[j]));
  return best;
}

/// {y : <normal, y> <= offset}.
struct HalfSpace {
  Vec normal;
  double offset = 0.0;
};

inline std::int64_t quantize(double v, double resolution) {
  return static_cast<std::int64_t>(std::llround(v / resolution));
}

}  // namespace delone
