#include "delone/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "delone/error.hpp"
#include "delone/kernels.hpp"

namespace delone {

namespace {

std::vector<Vec> centers_of(const WindowedDeloneSet& X, const std::vector<std::size_t>& idx) {
  std::vector<Vec> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(X.point(i));
  return out;
}

}  // namespace

std::vector<Vec> Atlas::occurrences(const WindowedDeloneSet& X, std::size_t c) const {
  return centers_of(X, occurrence_indices.at(c));
}

std::vector<Vec> Atlas::sites(const WindowedDeloneSet& X, std::size_t c) const {
  const Vec rep_center = index[c].representative.center;
  PointHash seen(X.dim());
  std::vector<Vec> out;
  // occurrence_indices[c] is ascending; walk centers once to find each one's anchor.
  for (std::size_t k = 0; k < centers.size(); ++k) {
    if (class_of[k] != c) continue;
    const Vec site = X.point(centers[k]) + anchor_offset[k] + rep_center;
    if (seen.insert(site).second) out.push_back(site);
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

Atlas r_atlas(const WindowedDeloneSet& X, double R, Equivalence eq, bool parallel) {
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "atlas radius must be positive");
  if (R >= X.window_radius()) {
    std::ostringstream os;
    os << "atlas radius " << R << " is not below the window radius " << X.window_radius();
    throw Error(ErrorCode::InsufficientWindow, os.str());
  }
  Atlas A;
  A.radius = R;
  A.valid_region_radius = X.window_radius() - R;
  A.index = ClassIndex(eq);
  A.centers = X.interior(R);
  const auto centers = centers_of(X, A.centers);
  const auto patches = extract_patches(X, centers, R, parallel);
  std::vector<std::size_t> raw(patches.size());
  A.anchor_offset.resize(patches.size());
  for (std::size_t k = 0; k < patches.size(); ++k) {
    raw[k] = A.index.add(patches[k]);
    A.anchor_offset[k] = eq == Equivalence::Translation ? patches[k].offsets.front() : Vec{};
  }
  const auto remap = A.index.finalize();
  A.class_of.resize(raw.size());
  A.occurrence_indices.assign(A.index.size(), {});
  for (std::size_t k = 0; k < raw.size(); ++k) {
    A.class_of[k] = remap[raw[k]];
    A.occurrence_indices[A.class_of[k]].push_back(A.centers[k]);
  }
  return A;
}

std::vector<Vec> occurrences(const WindowedDeloneSet& X, const PatchClass& P) {
  const double R = P.radius();
  if (R >= X.window_radius()) throw Error(ErrorCode::InsufficientWindow, "patch radius is not below the window radius");
  std::vector<Vec> out;
  const WindowedDeloneSet* src = &X;
  WindowedDeloneSet plain;
  if (X.has_labels() && !P.representative.labeled()) {
    plain = X.unlabeled();
    src = &plain;
  }
  for (std::size_t i : src->interior(R)) {
    const Patch p = extract_patch_unchecked(*src, src->point(i), R);
    if (p.offsets.empty()) continue;
    if (same_class(canonical_class(p, P.equivalence), P)) out.push_back(src->point(i));
  }
  return out;
}

std::vector<Vec> ReturnVectorSet::vectors() const {
  std::vector<Vec> out;
  out.reserve(sites.size());
  for (const Vec& s : sites.points()) out.push_back(s - base);
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

namespace {

ReturnVectorSet make_return_set(const WindowedDeloneSet& X, const PatchClass& P, std::vector<Vec> sites) {
  const double Wr = X.window_radius() - 2.0 * P.radius();
  if (Wr <= 0.0) throw Error(ErrorCode::InsufficientWindow, "window too small for return vectors of this radius");
  std::vector<Vec> kept;
  for (const Vec& s : sites)
    if (norm(s) <= Wr) kept.push_back(s);
  if (kept.empty()) throw Error(ErrorCode::NoOccurrenceNearOrigin, "no placement of the patch in the complete region");
  ReturnVectorSet out;
  out.patch = P;
  WindowedDeloneSet::Options opt;
  opt.meta = {{"kind", "return-vector sites"}, {"patch_radius", P.radius()}};
  out.sites = WindowedDeloneSet::build(std::move(kept), X.dim(), Wr, std::move(opt));
  out.base = out.sites.nearest({}).first < out.sites.size() ? out.sites.point(out.sites.nearest({}).first) : Vec{};
  return out;
}

}  // namespace

ReturnVectorSet return_vectors(const WindowedDeloneSet& X, const Atlas& atlas, std::size_t c) {
  if (c >= atlas.size()) throw Error(ErrorCode::InvalidArgument, "class id out of range");
  return make_return_set(X, atlas[c], atlas.sites(X, c));
}

ReturnVectorSet return_vectors(const WindowedDeloneSet& X, const PatchClass& P) {
  const double R = P.radius();
  if (R >= X.window_radius()) throw Error(ErrorCode::InsufficientWindow, "patch radius is not below the window radius");
  PointHash seen(X.dim());
  std::vector<Vec> sites;
  for (std::size_t i : X.interior(R)) {
    const Patch p = extract_patch_unchecked(X, X.point(i), R);
    if (p.offsets.empty()) continue;
    const PatchClass c = canonical_class(p, P.equivalence);
    if (!same_class(c, P)) continue;
    const Vec anchor = P.equivalence == Equivalence::Translation ? p.offsets.front() : Vec{};
    const Vec s = X.point(i) + anchor + P.representative.center;
    if (seen.insert(s).second) sites.push_back(s);
  }
  return make_return_set(X, P, std::move(sites));
}

std::optional<Vec> find_period(const WindowedDeloneSet& X, double R_hat) {
  if (X.size() < 2) return std::nullopt;
  const double reach = 2.0 * R_hat * 1.1 + 1e-6;
  const std::size_t i0 = X.nearest({}).first;
  const Vec x0 = X.point(i0);
  std::vector<Vec> cands;
  for (std::size_t j : X.in_ball(x0, reach, false))
    if (j != i0) cands.push_back(X.point(j) - x0);
  std::sort(cands.begin(), cands.end(), [](Vec a, Vec b) {
    const double na = norm(a), nb = norm(b);
    return na < nb || (na == nb && lex_less(a, b));
  });
  for (const Vec& v : cands) {
    const double nv = norm(v);
    if (nv >= X.window_radius()) continue;
    bool periodic = true;
    bool tested = false;
    for (std::size_t i = 0; i < X.size() && periodic; ++i) {
      const Vec p = X.point(i);
      if (norm(p) + nv > X.window_radius()) continue;
      tested = true;
      periodic = X.find(p + v, 1e-7).has_value() && X.find(p - v, 1e-7).has_value();
    }
    if (tested && periodic) return v;
  }
  return std::nullopt;
}

ReturnGap min_return_gap(const WindowedDeloneSet& X, const Atlas& atlas, bool parallel) {
  ReturnGap out;
  out.radius = atlas.radius;
  out.class_count = atlas.size();
  out.gap = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < atlas.size(); ++c) {
    const auto sites = atlas.sites(X, c);
    if (sites.size() < 2) continue;
    ++out.classes_with_returns;
    const double g = min_separation(PointIndex(sites, X.dim()), parallel);
    if (g < out.gap) {
      out.gap = g;
      out.worst_class = c;
    }
  }
  if (out.classes_with_returns > 0) out.worst = atlas[out.worst_class];
  return out;
}

ReturnGap min_return_gap(const WindowedDeloneSet& X, double R, double R_hat, bool parallel) {
  if (R >= X.window_radius() / 4.0) throw Error(ErrorCode::InsufficientWindow, "return gap needs R < W/4");
  if (auto v = find_period(X, R_hat)) {
    std::ostringstream os;
    os.precision(17);
    os << "X - v = X on the window for v = (" << v->x << ", " << v->y << ")";
    throw Error(ErrorCode::PeriodicInput, os.str());
  }
  return min_return_gap(X, r_atlas(X, R, Equivalence::Translation, parallel), parallel);
}

ExtensionCount extension_count(const WindowedDeloneSet& X, double R1, double R2, bool parallel) {
  if (!(R1 > 0.0 && R1 < R2)) throw Error(ErrorCode::InvalidArgument, "need 0 < R1 < R2");
  if (R2 >= X.window_radius()) throw Error(ErrorCode::InsufficientWindow, "R2 is not below the window radius");
  const auto idx = X.interior(R2);
  const auto centers = centers_of(X, idx);
  const auto outer = extract_patches(X, centers, R2, parallel);
  ClassIndex inner_classes(Equivalence::Centered);
  ClassIndex outer_classes(Equivalence::Translation);
  std::map<std::size_t, std::vector<std::size_t>> ext;  // inner class -> outer classes
  for (std::size_t k = 0; k < outer.size(); ++k) {
    const std::size_t a = inner_classes.add(restrict_patch(outer[k], R1));
    const std::size_t b = outer_classes.add(outer[k]);
    auto& v = ext[a];
    if (std::find(v.begin(), v.end(), b) == v.end()) v.push_back(b);
  }
  ExtensionCount out;
  out.R1 = R1;
  out.R2 = R2;
  out.inner_classes = inner_classes.size();
  for (const auto& [a, v] : ext)
    if (v.size() > out.max_extensions) {
      out.max_extensions = v.size();
      out.worst_inner = a;
    }
  return out;
}

}  // namespace delone
