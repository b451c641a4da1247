#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "delone/patch.hpp"
#include "delone/point_set.hpp"

namespace delone {

/// R-atlas of X: classes of the R-patches at the points of B_{W−R}(0).
struct Atlas {
  double radius = 0.0;
  double valid_region_radius = 0.0;  // W − R
  ClassIndex index;
  std::vector<std::size_t> centers;   // interior point indices, ascending
  std::vector<std::size_t> class_of;  // parallel to centers
  std::vector<Vec> anchor_offset;     // parallel to centers: least offset of the patch
  std::vector<std::vector<std::size_t>> occurrence_indices;  // per class, ascending

  std::size_t size() const { return index.size(); }
  const std::vector<PatchClass>& classes() const { return index.classes(); }
  const PatchClass& operator[](std::size_t c) const { return index[c]; }
  Equivalence equivalence() const { return index.equivalence(); }

  /// Occurrence centers of class c.
  std::vector<Vec> occurrences(const WindowedDeloneSet& X, std::size_t c) const;
  /// Distinct placements of the class cloud: the point of each occurrence
  /// corresponding to the representative's ball center. Always points of X.
  std::vector<Vec> sites(const WindowedDeloneSet& X, std::size_t c) const;
};

/// Throws InsufficientWindow when R >= W.
Atlas r_atlas(const WindowedDeloneSet& X, double R, Equivalence eq = Equivalence::Translation,
              bool parallel = true);

/// All x in X ∩ B_{W−R}(0) whose R-patch falls in P's class (equivalence of P).
std::vector<Vec> occurrences(const WindowedDeloneSet& X, const PatchClass& P);

/// X_P as placements of P: sites = X_P + base, complete on B_{W−2R}(0).
struct ReturnVectorSet {
  PatchClass patch;
  WindowedDeloneSet sites;  // absolute positions, window W − 2R
  Vec base{};               // site nearest the origin (v = 0)

  /// X_P itself: sites − base, ascending.
  std::vector<Vec> vectors() const;
};

/// Throws NoOccurrenceNearOrigin when no placement lies in the complete region.
ReturnVectorSet return_vectors(const WindowedDeloneSet& X, const Atlas& atlas, std::size_t class_id);
ReturnVectorSet return_vectors(const WindowedDeloneSet& X, const PatchClass& P);

/// A nonzero v ∈ (X − X) ∩ B_{2.2·R_hat}(0) with X − v = X on the interior, if any.
std::optional<Vec> find_period(const WindowedDeloneSet& X, double R_hat);

struct ReturnGap {
  double radius = 0.0;
  double gap = 0.0;                    // min nonzero return-vector norm over all classes
  std::size_t worst_class = 0;
  PatchClass worst;
  std::size_t class_count = 0;
  std::size_t classes_with_returns = 0;
};

/// Throws PeriodicInput (after find_period), InsufficientWindow when R >= W/4.
ReturnGap min_return_gap(const WindowedDeloneSet& X, double R, double R_hat, bool parallel = true);
/// Same on a precomputed atlas; no periodicity test.
ReturnGap min_return_gap(const WindowedDeloneSet& X, const Atlas& atlas, bool parallel = true);

struct ExtensionCount {
  double R1 = 0.0, R2 = 0.0;
  std::size_t inner_classes = 0;   // centered R1-classes at interior points
  std::size_t max_extensions = 0;  // max number of R2 translation classes over one R1 class
  std::size_t worst_inner = 0;
};

/// Extensions of centered R1-patches to R2-patches up to translation.
ExtensionCount extension_count(const WindowedDeloneSet& X, double R1, double R2, bool parallel = true);

}  // namespace delone
