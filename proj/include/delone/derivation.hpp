#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "delone/patch.hpp"
#include "delone/point_set.hpp"
#include "json.hpp"

namespace delone {

struct ImagePoint {
  Vec offset{};
  int label = kNoLabel;
};

/// Radius-s lookup table from centered patch classes to image offsets.
/// Labeled tables read labeled patches; unlabeled tables ignore input labels.
struct LocalDerivationRule {
  std::string name;
  double radius = 0.0;
  ClassIndex table{Equivalence::Centered};
  std::vector<std::vector<ImagePoint>> images;  // by class id
  double offset_bound = 0.0;
  bool labeled = false;

  /// s0 = s + offset_bound: the output on B_R(y) depends on X ∩ B_{R+s0}(y).
  double s0() const { return radius + offset_bound; }
  /// Inserts (or replaces) the image of a class and refreshes offset_bound.
  void set(const Patch& p, std::vector<ImagePoint> image);
};

/// A rule over every interior s-patch class of X, images chosen by `image_of`.
LocalDerivationRule make_rule(const WindowedDeloneSet& X, double s, bool labeled, std::string name,
                              const std::function<std::vector<ImagePoint>(const Patch&)>& image_of);

/// Each class to its center, keeping the center's label.
LocalDerivationRule identity_rule(const WindowedDeloneSet& X, double s);
/// Identity followed by a global shift t.
LocalDerivationRule translated_rule(const WindowedDeloneSet& X, double s, Vec t = {1e-3, 0.0});
/// Labeled classes to their unlabeled center.
LocalDerivationRule label_forgetting_rule(const WindowedDeloneSet& X, double s);
/// d = 1: each point to the midpoint of the gap on its right; s must exceed the largest gap.
LocalDerivationRule midpoint_rule(const WindowedDeloneSet& X, double s);

nlohmann::json rule_to_json(const LocalDerivationRule& rule);
/// Throws InputError on malformed input.
LocalDerivationRule rule_from_json(const nlohmann::json& j, int dim);

/// π(X): images of the points of B_{W−s}(0), kept on B_{W−s−offset_bound}(0),
/// merged within kEta (smallest label wins). Throws UnknownPatchClass, OutputNotDelone.
WindowedDeloneSet apply_rule(const LocalDerivationRule& rule, const WindowedDeloneSet& X, bool parallel = true);

struct FiberCount {
  double R = 0.0;
  std::size_t count = 0;         // max distinct preimage classes over one image class
  std::size_t image_classes = 0;
  std::size_t centers = 0;
  double bound = 0.0;            // (55 L²)^d
};

/// For each centered (R + s0)-patch class of π(X) at points x of X, the number
/// of distinct centered R-patch classes of X at those x; the max over image
/// classes. Throws InsufficientWindow.
FiberCount fiber_class_count(const LocalDerivationRule& rule, const WindowedDeloneSet& X, double R, double L,
                             bool parallel = true);

/// L^n − 1 − 12L − 176L² > 1.
bool n_condition_holds(double L, int n);

struct TheoremHarnessConfig {
  int n = 2;
  double R = 5.0;
  double epsilon = 0.0;
  double L = 1.0;
  bool override_n = false;
  std::vector<std::string> rule_ids;
};

struct FamilyMember {
  std::size_t cell_class = 0;  // j: cell-patch class of the base patch
  std::size_t index = 0;       // l: position among that cell's return patches
  std::size_t family_id = 0;   // entry of Family::classes
};

struct Family {
  double R = 0.0;
  int n = 0;
  double L = 1.0;
  double patch_radius = 0.0;  // L^n R
  Vec base{};                 // x, the point of X nearest the origin
  PatchClass base_patch;      // translation class of X ∩ B_R(x)
  std::size_t cell_classes = 0;  // N
  std::vector<std::size_t> cell_return_counts;  // m_j
  ClassIndex classes{Equivalence::Centered};    // distinct P_{w_{j,l}}
  std::vector<FamilyMember> members;
  double bound = 0.0;  // c(L)·c(n,L) = (352L³)^d (968L^{n+3})^d
  bool central_balls_agree = true;
  std::size_t size() const { return classes.size(); }
};

/// Throws InsufficientWindow, PeriodicInput.
Family build_family_F(const WindowedDeloneSet& X, double R, int n, double L, bool parallel = true);

struct RelationMatrix {
  std::string rule_id;
  std::vector<std::vector<bool>> entries;
  std::vector<std::size_t> occurrences;  // per family member, occurrences checked
  std::vector<std::size_t> Q_sizes;      // classes of π-patches over the occurrences of each member
  double R_prime = 0.0;
  bool R_prime_fallback = false;         // (L^n − 1)R − ε used because the displayed radius is ≤ 0
  double search_radius = 0.0;            // 4 L R
  bool reflexive() const;
};

/// Throws InsufficientWindow, NoOccurrence, InvalidArgument (n-condition without override).
RelationMatrix relation_Ri(const LocalDerivationRule& rule, const Family& family, const WindowedDeloneSet& X,
                           const TheoremHarnessConfig& cfg, bool parallel = true);

struct RelationComparison {
  std::vector<std::pair<std::size_t, std::size_t>> equal_pairs;
  double k = 0.0;                 // c(L)c(n,L)
  double log10_relations = 0.0;   // k² log10 2
  double log10_coverings = 0.0;   // k log10 2
};

/// Throws FamilyMismatch when the matrices have different sizes.
RelationComparison compare_relations(const std::vector<RelationMatrix>& matrices, double family_bound = 0.0);

}  // namespace delone
