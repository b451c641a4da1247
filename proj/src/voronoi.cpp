#include "delone/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "delone/error.hpp"
#include "delone/kernels.hpp"
#include "delone/repetitivity.hpp"

namespace delone {

namespace {

using Ring = std::vector<Vec>;

// Keeps the part of a convex ring with <n, y> <= c.
Ring clip(const Ring& poly, Vec n, double c) {
  Ring out;
  const std::size_t m = poly.size();
  if (m == 0) return out;
  out.reserve(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec p = poly[i], q = poly[(i + 1) % m];
    const double fp = dot(n, p) - c, fq = dot(n, q) - c;
    if (fp <= 0.0) out.push_back(p);
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
      const double t = fp / (fp - fq);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

Ring merge_close(const Ring& ring, double tol) {
  Ring out;
  for (const Vec& v : ring)
    if (out.empty() || !near(out.back(), v, tol)) out.push_back(v);
  while (out.size() > 1 && near(out.front(), out.back(), tol)) out.pop_back();
  return out;
}

double ring_area(const Ring& ring) {
  double a = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) a += cross(ring[i], ring[(i + 1) % ring.size()]);
  return a / 2.0;
}

}  // namespace

// ------------------------------------------------------------------ Polytope

double Polytope::measure() const {
  if (vertices.empty()) return 0.0;
  if (dim == 1) return vertices.size() == 2 ? std::abs(vertices[1].x - vertices[0].x) : 0.0;
  return std::abs(ring_area(vertices));
}

bool Polytope::contains(Vec y, double tol) const {
  if (dim == 1) {
    if (vertices.size() != 2) return false;
    return y.x >= vertices[0].x - tol && y.x <= vertices[1].x + tol;
  }
  for (const HalfSpace& h : halfspaces)
    if (dot(h.normal, y) > h.offset + tol * norm(h.normal)) return false;
  return !vertices.empty();
}

double Polytope::inradius_at_site() const {
  double r = std::numeric_limits<double>::infinity();
  for (const HalfSpace& h : halfspaces) r = std::min(r, (h.offset - dot(h.normal, site)) / norm(h.normal));
  return r;
}

double Polytope::circumradius_at_site() const {
  double r = 0.0;
  for (const Vec& v : vertices) r = std::max(r, dist(v, site));
  return r;
}

Polytope cell_from_neighbors(Vec site, std::span<const Vec> neighbors, double cutoff, int dim) {
  Polytope cell;
  cell.dim = dim;
  cell.site = site;
  if (dim == 1) {
    double left = -std::numeric_limits<double>::infinity(), right = std::numeric_limits<double>::infinity();
    for (const Vec& q : neighbors) {
      const double dx = q.x - site.x;
      if (std::abs(dx) <= kEta) continue;
      if (dx < 0.0) left = std::max(left, q.x);
      else right = std::min(right, q.x);
    }
    if (!std::isfinite(left) || !std::isfinite(right)) {
      std::ostringstream os;
      os.precision(17);
      os << "cell of " << site.x << " has no neighbor on one side within cutoff " << cutoff;
      throw Error(ErrorCode::UnboundedCell, os.str());
    }
    const double lo = (left + site.x) / 2.0, hi = (right + site.x) / 2.0;
    cell.vertices = {{lo, 0.0}, {hi, 0.0}};
    cell.halfspaces = {{{1.0, 0.0}, hi}, {{-1.0, 0.0}, -lo}};
    return cell;
  }
  // Work in coordinates centered at the site for accuracy.
  std::vector<Vec> local;
  local.reserve(neighbors.size());
  for (const Vec& q : neighbors) {
    const Vec d = q - site;
    if (norm(d) > kEta) local.push_back(d);
  }
  std::sort(local.begin(), local.end(), [](Vec a, Vec b) {
    const double na = norm2(a), nb = norm2(b);
    return na < nb || (na == nb && lex_less(a, b));
  });
  const double half = 2.0 * cutoff;
  Ring ring{{-half, -half}, {half, -half}, {half, half}, {-half, half}};
  for (const Vec& q : local) {
    const double c = norm2(q) / 2.0;
    bool cuts = false;
    for (const Vec& v : ring) cuts = cuts || dot(q, v) > c;
    if (cuts) ring = clip(ring, q, c);
    cell.halfspaces.push_back({q, c + dot(q, site)});
  }
  ring = merge_close(ring, kEta);
  const double edge_tol = 1e-9 * std::max(1.0, half);
  for (const Vec& v : ring)
    if (std::max(std::abs(v.x), std::abs(v.y)) >= half - edge_tol) {
      std::ostringstream os;
      os.precision(17);
      os << "cell of (" << site.x << ", " << site.y << ") is not closed by neighbors within cutoff " << cutoff;
      throw Error(ErrorCode::UnboundedCell, os.str());
    }
  if (ring.size() < 3) throw Error(ErrorCode::UnboundedCell, "degenerate cell");
  cell.vertices.reserve(ring.size());
  for (const Vec& v : ring) cell.vertices.push_back(v + site);
  return cell;
}

Polytope voronoi_cell(const WindowedDeloneSet& X, std::size_t index, double cutoff) {
  const Vec x = X.point(index);
  X.require_ball(x, cutoff, "voronoi_cell");
  thread_local std::vector<std::size_t> idx;
  X.index().in_ball(x, cutoff, false, idx);
  thread_local std::vector<Vec> nb;
  nb.clear();
  for (std::size_t k : idx)
    if (k != index) nb.push_back(X.point(k));
  return cell_from_neighbors(x, nb, cutoff, X.dim());
}

Polytope voronoi_cell(const WindowedDeloneSet& X, Vec x, double cutoff) {
  const auto idx = X.find(x);
  if (!idx) throw Error(ErrorCode::InvalidArgument, "voronoi_cell: site is not a point of the set");
  return voronoi_cell(X, *idx, cutoff);
}

bool same_vertices(const Polytope& a, const Polytope& b, double tol) {
  if (a.dim != b.dim || a.vertices.size() != b.vertices.size()) return false;
  const std::size_t m = a.vertices.size();
  if (m == 0) return true;
  if (a.dim == 1) return near(a.vertices[0], b.vertices[0], tol) && near(a.vertices[1], b.vertices[1], tol);
  for (std::size_t shift = 0; shift < m; ++shift) {
    if (!near(a.vertices[0], b.vertices[shift], tol)) continue;
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) ok = near(a.vertices[i], b.vertices[(i + shift) % m], tol);
    if (ok) return true;
  }
  return false;
}

Polytope box_polytope(Vec lo, Vec hi, int dim) {
  Polytope p;
  p.dim = dim;
  p.site = 0.5 * (lo + hi);
  if (dim == 1) {
    p.vertices = {{lo.x, 0.0}, {hi.x, 0.0}};
    p.halfspaces = {{{1.0, 0.0}, hi.x}, {{-1.0, 0.0}, -lo.x}};
    return p;
  }
  p.vertices = {lo, {hi.x, lo.y}, hi, {lo.x, hi.y}};
  p.halfspaces = {{{1.0, 0.0}, hi.x}, {{-1.0, 0.0}, -lo.x}, {{0.0, 1.0}, hi.y}, {{0.0, -1.0}, -lo.y}};
  return p;
}

Polytope intersect(const Polytope& a, const Polytope& b) {
  Polytope out;
  out.dim = a.dim;
  out.site = a.site;
  if (a.vertices.empty() || b.vertices.empty()) return out;
  if (a.dim == 1) {
    const double lo = std::max(a.vertices[0].x, b.vertices[0].x);
    const double hi = std::min(a.vertices[1].x, b.vertices[1].x);
    if (hi > lo) out.vertices = {{lo, 0.0}, {hi, 0.0}};
    return out;
  }
  // Clip a by the edges of b (counter-clockwise: interior on the left).
  Ring ring = a.vertices;
  const std::size_t m = b.vertices.size();
  const double orient = ring_area(b.vertices) >= 0.0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < m && !ring.empty(); ++i) {
    const Vec p = b.vertices[i], q = b.vertices[(i + 1) % m];
    const Vec e = q - p;
    const Vec n = orient * Vec{e.y, -e.x};  // outward normal
    ring = clip(ring, n, dot(n, p));
  }
  out.vertices = merge_close(ring, kEta);
  if (out.vertices.size() < 3) out.vertices.clear();
  return out;
}

// ------------------------------------------------------------- cells of X_P

PatchCells voronoi_cells_of_patch(const WindowedDeloneSet& X, const Atlas& atlas, std::size_t class_id) {
  PatchCells out;
  out.returns = return_vectors(X, atlas, class_id);
  const WindowedDeloneSet& S = out.returns.sites;
  if (S.size() < 2) throw Error(ErrorCode::InsufficientWindow, "fewer than two placements of the patch in the window");
  const DeloneEstimate est = estimate_delone_params(S);
  out.sites_covering_radius = est.R_upper;
  out.cutoff = 4.0 * est.R_upper;
  for (std::size_t k = 0; k < S.size(); ++k)
    if (S.ball_inside(S.point(k), out.cutoff)) out.site_index.push_back(k);
  if (out.site_index.empty())
    throw Error(ErrorCode::InsufficientWindow, "no placement has its 4R-neighborhood inside the window");
  out.cells = parallel::voronoi_cells(S, out.site_index, out.cutoff);
  out.clouds.resize(out.cells.size());
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < out.cells.size(); ++k) {
    const Polytope& cell = out.cells[k];
    X.index().in_ball(cell.site, cell.circumradius_at_site() + kEta, false, idx);
    for (std::size_t i : idx)
      if (cell.contains(X.point(i), kEta)) out.clouds[k].push_back(X.point(i));
    std::sort(out.clouds[k].begin(), out.clouds[k].end(), [](Vec a, Vec b) { return fuzzy_less(a, b); });
  }
  return out;
}

CellClassSummary cell_patch_classes(const WindowedDeloneSet& X, const PatchCells& cells) {
  CellClassSummary out;
  std::vector<std::size_t> raw(cells.cells.size());
  for (std::size_t k = 0; k < cells.cells.size(); ++k) {
    Patch p;
    p.center = cells.cells[k].site;
    p.radius = cells.cutoff;
    for (const Vec& q : cells.clouds[k]) {
      p.offsets.push_back(q - p.center);
      if (X.has_labels()) p.labels.push_back(X.label(*X.find(q)));
    }
    sort_patch(p);
    if (p.offsets.empty()) throw Error(ErrorCode::EmptyPatch, "a cell of the patch contains no point of the set");
    raw[k] = out.classes.add(p);
  }
  const auto remap = out.classes.finalize();
  out.class_of_cell.resize(raw.size());
  out.representative.assign(out.classes.size(), raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    out.class_of_cell[k] = remap[raw[k]];
    out.representative[out.class_of_cell[k]] = std::min(out.representative[out.class_of_cell[k]], k);
  }
  return out;
}

CellReturnResult cell_return_patches(const WindowedDeloneSet& X, const PatchCells& cells, std::size_t k, int n,
                                     double L) {
  if (k >= cells.cells.size()) throw Error(ErrorCode::InvalidArgument, "cell index out of range");
  if (n < 1 || !(L >= 1.0)) throw Error(ErrorCode::InvalidArgument, "need n >= 1 and L >= 1");
  CellReturnResult out;
  out.cell = k;
  out.L = L;
  out.n = n;
  const double R = cells.returns.patch.radius();
  out.patch_radius = std::pow(L, n) * R;
  const Polytope& V = cells.cells[k];
  const std::vector<Vec>& C = cells.clouds[k];
  const Vec s = V.site;
  const double reach = V.circumradius_at_site() + kEta;
  if (!X.ball_inside(s, out.patch_radius))
    throw Error(ErrorCode::InsufficientWindow, "the L^n R ball about the cell site leaves the window");

  std::vector<int> cloud_labels;
  if (X.has_labels())
    for (const Vec& q : C) cloud_labels.push_back(X.label(*X.find(q)));

  std::optional<Patch> central;
  std::vector<std::size_t> idx;
  std::vector<std::pair<double, Vec>> found;
  for (std::size_t i : X.interior(out.patch_radius)) {
    const Vec w = X.point(i) - s;
    ++out.candidates_checked;
    bool ok = true;
    for (std::size_t c = 0; c < C.size() && ok; ++c) {
      const auto hit = X.find(C[c] + w);
      ok = hit.has_value() && (cloud_labels.empty() || X.label(*hit) == cloud_labels[c]);
    }
    if (!ok) continue;
    X.index().in_ball(s + w, reach, false, idx);
    std::size_t inside = 0;
    for (std::size_t j : idx)
      if (V.contains(X.point(j) - w, kEta)) ++inside;
    if (inside != C.size()) continue;
    found.emplace_back(norm(w), w);
    const Patch pw = extract_patch_unchecked(X, X.point(i), out.patch_radius);
    out.classes.add(pw);
    Patch core = restrict_patch(pw, R / 22.0);
    core.center = {};
    if (!central) central = core;
    else if (core.offsets.size() != central->offsets.size() ||
             !same_sorted_cloud(core.offsets, central->offsets) || core.labels != central->labels)
      out.central_ball_agrees = false;
  }
  if (found.empty()) throw Error(ErrorCode::NoReturnVectorsFound, "no return vector of the cell in the window");
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    return a.first < b.first || (a.first == b.first && lex_less(a.second, b.second));
  });
  for (const auto& f : found) out.return_vectors.push_back(f.second);
  out.classes.finalize();
  return out;
}

// ------------------------------------------------------------------- tiling

TilingReport tiling_check(const WindowedDeloneSet& X, double R_hat, bool par) {
  TilingReport rep;
  const int d = X.dim();
  const double cutoff = 4.0 * R_hat;
  const double reach = 2.0 * R_hat;  // certified cell radius bound for cutoff 4R
  const double sqd = std::sqrt(static_cast<double>(d));
  const double a = (X.window_radius() - cutoff - reach - 2.0 * kEta) / sqd;
  if (!(a > 0.0)) throw Error(ErrorCode::InsufficientWindow, "window too small for the tiling check");
  rep.box_half_side = a;
  const Polytope box = box_polytope({-a, d == 2 ? -a : 0.0}, {a, d == 2 ? a : 0.0}, d);
  rep.box_measure = box.measure();
  std::vector<std::size_t> sel;
  for (std::size_t i = 0; i < X.size(); ++i)
    if (norm(X.point(i)) <= a * sqd + reach) sel.push_back(i);
  const auto cells = par ? parallel::voronoi_cells(X, sel, cutoff) : serial::voronoi_cells(X, sel, cutoff);
  std::vector<Polytope> clipped(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    clipped[k] = intersect(cells[k], box);
    rep.cell_measure_sum += clipped[k].measure();
  }
  rep.cells = cells.size();
  rep.relative_error = std::abs(rep.cell_measure_sum - rep.box_measure) / rep.box_measure;
  // Overlaps only between sites closer than twice the cell reach.
  std::vector<Vec> sites;
  for (std::size_t i : sel) sites.push_back(X.point(i));
  const PointIndex site_index(sites, d);
  std::vector<std::size_t> nb;
  for (std::size_t k = 0; k < clipped.size(); ++k) {
    if (clipped[k].vertices.empty()) continue;
    site_index.in_ball(sites[k], 2.0 * reach, false, nb);
    for (std::size_t j : nb) {
      if (j <= k || clipped[j].vertices.empty()) continue;
      rep.max_pair_overlap = std::max(rep.max_pair_overlap, intersect(clipped[k], clipped[j]).measure());
    }
  }
  return rep;
}

}  // namespace delone
