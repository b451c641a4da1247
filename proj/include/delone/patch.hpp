#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "delone/geometry.hpp"
#include "delone/point_set.hpp"

namespace delone {

/// How two patches are identified.
///  Translation: the point clouds agree after some translation (ball center ignored).
///  Centered:    the center-relative offset sets agree exactly, i.e. the atlas
///               element (X ∩ B_R(x)) − x; needed wherever the center carries meaning
///               (rule tables, decorations, fibers).
enum class Equivalence { Translation, Centered };

const char* to_string(Equivalence eq);

/// (X − center) ∩ B_R(0): offsets relative to `center`, sorted by fuzzy_less.
struct Patch {
  Vec center{};
  double radius = 0.0;
  std::vector<Vec> offsets;
  std::vector<int> labels;  // parallel to offsets; empty when undecorated

  std::size_t size() const { return offsets.size(); }
  bool labeled() const { return !labels.empty(); }
  double diameter() const { return cloud_diameter(offsets); }
  /// Largest ||offset||.
  double max_offset_norm() const;
  /// Absolute positions center + offsets.
  std::vector<Vec> points() const;
};

/// Canonical class of a patch.
///
/// `representative.offsets` are in class coordinates: anchored at the
/// lexicographically least point for Translation, at the ball center for
/// Centered. `representative.center` is the ball center in those coordinates
/// (−least offset for Translation, 0 for Centered).
struct PatchClass {
  Patch representative;
  std::vector<std::int64_t> quantized_key;
  std::size_t multiplicity = 0;
  Equivalence equivalence = Equivalence::Translation;

  std::size_t size() const { return representative.size(); }
  double radius() const { return representative.radius; }
  double diameter() const { return representative.diameter(); }
};

/// Sorts offsets (and labels alongside) by fuzzy_less.
void sort_patch(Patch& p, double tol = kEta);

/// Exact open-ball patch X ∩ B_R(center). Throws InsufficientWindow when the
/// ball leaves the window.
Patch extract_patch(const WindowedDeloneSet& X, Vec center, double R);

/// Patch from a point index without a window check (callers guarantee validity).
Patch extract_patch_unchecked(const WindowedDeloneSet& X, Vec center, double R);

/// The v with P.offsets − v = Q.offsets pointwise after aligning least
/// offsets (and equal labels, when both are labeled). The center difference is
/// not part of v; see center_shift.
std::optional<Vec> patch_translation_match(const Patch& P, const Patch& Q, double tol = kEta);

/// Q.center − P.center.
inline Vec center_shift(const Patch& P, const Patch& Q) { return Q.center - P.center; }

/// Throws EmptyPatch for an empty patch. multiplicity is 1.
PatchClass canonical_class(const Patch& P, Equivalence eq = Equivalence::Translation,
                           double tol = kEta);

/// Whether the class coordinates of a and b agree within tol (and labels, radius).
bool same_class(const PatchClass& a, const PatchClass& b, double tol = kEta);

/// Smallest-norm u with Q + u = P ∩ B_{Q.r}(u) (open ball) and ||u|| + Q.r ≤ P.r.
std::optional<Vec> is_subpatch(const Patch& Q, const Patch& P, double tol = kEta);

/// Patch restricted to the open ball of radius r < radius about its center.
Patch restrict_patch(const Patch& P, double r);

/// Deduplicating store of patch classes. The quantized key is only a filter;
/// membership is decided by tolerance comparison.
class ClassIndex {
 public:
  explicit ClassIndex(Equivalence eq = Equivalence::Translation, double tol = kEta)
      : eq_(eq), tol_(tol) {}

  /// Class id for P (inserted when new); bumps the multiplicity.
  std::size_t add(const Patch& P);
  std::size_t add(const PatchClass& c);
  std::optional<std::size_t> find(const Patch& P) const;
  std::optional<std::size_t> find(const PatchClass& c) const;

  /// Reorders classes by (size, quantized_key); returns old id -> new id.
  std::vector<std::size_t> finalize();

  Equivalence equivalence() const { return eq_; }
  std::size_t size() const { return classes_.size(); }
  const std::vector<PatchClass>& classes() const { return classes_; }
  const PatchClass& operator[](std::size_t i) const { return classes_[i]; }

 private:
  std::vector<std::uint64_t> probe_keys(const PatchClass& c) const;
  std::uint64_t primary_key(const PatchClass& c) const;

  Equivalence eq_;
  double tol_;
  std::vector<PatchClass> classes_;
  std::unordered_multimap<std::uint64_t, std::size_t> lookup_;
};

}  // namespace delone
