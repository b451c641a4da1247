#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "delone/patch.hpp"
#include "delone/point_set.hpp"
#include "json.hpp"

namespace delone {

using Matrix = std::vector<std::vector<double>>;

/// Lattice spanned by the rows of `basis` (d×d, d ∈ {1,2}), cut to B_W(0).
/// r and R are set analytically. Throws SingularBasis.
WindowedDeloneSet generate_lattice(const Matrix& basis, double window_radius);

/// Half the shortest nonzero lattice vector and the covering radius.
std::pair<double, double> lattice_delone_constants(const Matrix& basis);

struct SubstitutionRule1D {
  std::string name;
  std::string alphabet;                 // one char per symbol; label = position
  std::map<char, std::string> rule;
  std::map<char, double> tile_lengths;
  char seed_symbol = 0;                 // informational; the two-sided seed is searched
};

SubstitutionRule1D fibonacci_rule();    // a→ab, b→a; |a| = φ, |b| = 1
SubstitutionRule1D period_two_rule();   // a→ab, b→ab; unit tiles
SubstitutionRule1D silver_rule();       // a→aab, b→a; |a| = 1+√2, |b| = 1

/// Some power of the substitution matrix is strictly positive.
bool is_primitive(const SubstitutionRule1D& rule);

struct TwoSidedSeed {
  char left = 0, right = 0;
  int power = 0;  // σ^power(left) ends in left, σ^power(right) starts with right
};

/// Smallest legal pair (alphabet order) admitting a fixed power. Throws NonPrimitiveRule.
TwoSidedSeed find_two_sided_seed(const SubstitutionRule1D& rule);

/// Tile endpoints of the two-sided fixed point, 0 at the seed junction.
/// Labels: symbol to the right of each point; the last point gets kNoLabel.
WindowedDeloneSet generate_substitution_1d(const SubstitutionRule1D& rule, double window_radius);

struct CutAndProjectScheme {
  std::string name;
  int total_dim = 0;               // N
  int physical_dim = 0;            // d; internal dimension is N − d (≤ 2)
  Matrix lattice_basis;            // N rows, each a basis vector of length N
  Matrix physical_projection;      // d × N
  Matrix internal_projection;      // (N−d) × N
  std::vector<HalfSpace> window;   // acceptance window in internal space
  std::optional<double> r_declared, R_declared;
};

/// Convex zonotope Σ[−½,½]g_k + shift as halfspaces (2-D internal space).
std::vector<HalfSpace> zonotope_window(const std::vector<Vec>& generators, Vec shift);
/// Interval [lo, hi] as halfspaces (1-D internal space).
std::vector<HalfSpace> interval_window(double lo, double hi);

CutAndProjectScheme fibonacci_scheme();
CutAndProjectScheme ammann_beenker_scheme();

/// Throws InvalidArgument (malformed scheme), EmptySet (acceptance window empty),
/// InfeasibleEnumeration (lattice box above the enumeration limit).
WindowedDeloneSet generate_cut_and_project(const CutAndProjectScheme& scheme, double window_radius,
                                           double max_box = 2.0e8);

CutAndProjectScheme scheme_from_json(const nlohmann::json& j);
nlohmann::json scheme_to_json(const CutAndProjectScheme& s);
SubstitutionRule1D substitution_from_json(const nlohmann::json& j);

/// Centered s-patch class → label.
struct DecorationRule {
  double radius = 0.0;
  ClassIndex classes{Equivalence::Centered};
  std::vector<int> labels;  // by class id
};

/// Shrinks the window of a labeled set until it holds no kNoLabel point
/// (the generator leaves the rightmost tile endpoint unlabeled). Unlabeled
/// or fully labeled sets come back unchanged.
WindowedDeloneSet trim_unlabeled_edge(const WindowedDeloneSet& X);

/// Builds a decoration rule from every interior s-patch class of X.
DecorationRule make_decoration(const WindowedDeloneSet& X, double s,
                               const std::function<int(const Patch&)>& label_of);

/// Label by the gap to the next point on the right: bucket k if the gap is
/// within tol of gaps[k]. 1-D only; matches substitution tile labels when
/// gaps are the tile lengths in alphabet order.
DecorationRule forward_gap_decoration(const WindowedDeloneSet& X, double s, const std::vector<double>& gaps,
                                      double tol = 1e-6);

/// d = 1: alternating labels 0, 1 by point index, 0 at the point nearest the
/// origin. Not locally derivable from the points, so forgetting these labels
/// is a 2-to-1 factor rather than a conjugacy.
WindowedDeloneSet index_parity_decoration(const WindowedDeloneSet& X);

/// Labels the points of B_{W−s}(0); the window shrinks to W − s.
/// Throws UnknownPatchClass naming the offending class.
WindowedDeloneSet decorate(const WindowedDeloneSet& X, const DecorationRule& rule);

}  // namespace delone
