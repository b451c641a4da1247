#include "delone/patch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "delone/error.hpp"

namespace delone {

namespace {

// Resolution of the lookup hash. Coarser than the identity tolerance so that
// only coordinates within tol of a rounding boundary need alternative probes.
constexpr double kCoarse = 1e-6;
constexpr std::size_t kMaxAmbiguous = 12;

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  return h;
}

// Class coordinates of P under eq: the shift applied to the offsets.
Vec anchor_of(const Patch& P, Equivalence eq) {
  if (eq == Equivalence::Centered || P.offsets.empty()) return {};
  return P.offsets.front();
}

}  // namespace

const char* to_string(Equivalence eq) {
  return eq == Equivalence::Translation ? "translation" : "centered";
}

double Patch::max_offset_norm() const {
  double m = 0.0;
  for (const Vec& o : offsets) m = std::max(m, norm(o));
  return m;
}

std::vector<Vec> Patch::points() const {
  std::vector<Vec> out;
  out.reserve(offsets.size());
  for (const Vec& o : offsets) out.push_back(center + o);
  return out;
}

void sort_patch(Patch& p, double tol) {
  std::vector<std::size_t> perm(p.offsets.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t a, std::size_t b) { return fuzzy_less(p.offsets[a], p.offsets[b], tol); });
  std::vector<Vec> offs(perm.size());
  std::vector<int> labs(p.labels.empty() ? 0 : perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    offs[k] = p.offsets[perm[k]];
    if (!labs.empty()) labs[k] = p.labels[perm[k]];
  }
  p.offsets = std::move(offs);
  p.labels = std::move(labs);
}

Patch extract_patch_unchecked(const WindowedDeloneSet& X, Vec center, double R) {
  Patch p;
  p.center = center;
  p.radius = R;
  thread_local std::vector<std::size_t> idx;
  X.index().in_ball(center, R, true, idx);
  p.offsets.reserve(idx.size());
  for (std::size_t k : idx) p.offsets.push_back(X.point(k) - center);
  if (X.has_labels()) {
    p.labels.reserve(idx.size());
    for (std::size_t k : idx) p.labels.push_back(X.label(k));
  }
  sort_patch(p);
  return p;
}

Patch extract_patch(const WindowedDeloneSet& X, Vec center, double R) {
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "patch radius must be positive");
  X.require_ball(center, R, "extract_patch");
  return extract_patch_unchecked(X, center, R);
}

std::optional<Vec> patch_translation_match(const Patch& P, const Patch& Q, double tol) {
  if (P.size() != Q.size() || std::abs(P.radius - Q.radius) > tol) return std::nullopt;
  if (P.labeled() && Q.labeled() && P.labels != Q.labels) return std::nullopt;
  if (P.offsets.empty()) return Vec{};
  const Vec v = P.offsets.front() - Q.offsets.front();
  for (std::size_t k = 0; k < P.size(); ++k)
    if (!near(P.offsets[k] - v, Q.offsets[k], tol)) return std::nullopt;
  return v;
}

PatchClass canonical_class(const Patch& P, Equivalence eq, double tol) {
  if (P.offsets.empty()) throw Error(ErrorCode::EmptyPatch, "cannot classify an empty patch");
  (void)tol;
  PatchClass c;
  c.equivalence = eq;
  c.multiplicity = 1;
  const Vec a = anchor_of(P, eq);
  Patch& rep = c.representative;
  rep.radius = P.radius;
  rep.center = Vec{} - a;
  rep.labels = P.labels;
  rep.offsets.reserve(P.size());
  for (const Vec& o : P.offsets) rep.offsets.push_back(o - a);
  // Anchoring at the least point of a fuzzy-sorted cloud: force it to exact zero.
  if (eq == Equivalence::Translation) rep.offsets.front() = Vec{};
  c.quantized_key.reserve(1 + 2 * rep.size() + rep.labels.size());
  c.quantized_key.push_back(static_cast<std::int64_t>(rep.size()));
  for (const Vec& o : rep.offsets) {
    c.quantized_key.push_back(quantize(o.x, kEta));
    c.quantized_key.push_back(quantize(o.y, kEta));
  }
  for (int l : rep.labels) c.quantized_key.push_back(l);
  return c;
}

bool same_class(const PatchClass& a, const PatchClass& b, double tol) {
  const Patch& p = a.representative;
  const Patch& q = b.representative;
  if (a.equivalence != b.equivalence || p.size() != q.size()) return false;
  if (std::abs(p.radius - q.radius) > tol) return false;
  if (p.labels != q.labels) return false;
  return same_sorted_cloud(p.offsets, q.offsets, tol);
}

Patch restrict_patch(const Patch& P, double r) {
  Patch out;
  out.center = P.center;
  out.radius = r;
  for (std::size_t k = 0; k < P.size(); ++k)
    if (norm(P.offsets[k]) < r - kEta) {
      out.offsets.push_back(P.offsets[k]);
      if (P.labeled()) out.labels.push_back(P.labels[k]);
    }
  return out;
}

std::optional<Vec> is_subpatch(const Patch& Q, const Patch& P, double tol) {
  if (Q.radius > P.radius + tol) return std::nullopt;
  std::vector<Vec> candidates;
  if (Q.offsets.empty()) {
    candidates.push_back(Vec{});
  } else {
    for (const Vec& p : P.offsets) candidates.push_back(p - Q.offsets.front());
  }
  std::sort(candidates.begin(), candidates.end(), [](Vec a, Vec b) {
    const double na = norm(a), nb = norm(b);
    return na < nb || (na == nb && lex_less(a, b));
  });
  for (const Vec& u : candidates) {
    if (norm(u) + Q.radius > P.radius + tol) continue;
    // P ∩ B_{Q.r}(u), shifted back by u, must equal Q.
    Patch sub;
    sub.radius = Q.radius;
    for (std::size_t k = 0; k < P.size(); ++k)
      if (dist(P.offsets[k], u) < Q.radius - kEta) {
        sub.offsets.push_back(P.offsets[k] - u);
        if (P.labeled()) sub.labels.push_back(P.labels[k]);
      }
    if (sub.size() != Q.size()) continue;
    sort_patch(sub, tol);
    if (!same_sorted_cloud(sub.offsets, Q.offsets, tol)) continue;
    if (P.labeled() && Q.labeled() && sub.labels != Q.labels) continue;
    return u;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- ClassIndex

std::uint64_t ClassIndex::primary_key(const PatchClass& c) const {
  std::uint64_t h = mix(0, c.size());
  for (int l : c.representative.labels) h = mix(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(l)));
  for (const Vec& o : c.representative.offsets) {
    h = mix(h, static_cast<std::uint64_t>(quantize(o.x, kCoarse)));
    h = mix(h, static_cast<std::uint64_t>(quantize(o.y, kCoarse)));
  }
  return h;
}

std::vector<std::uint64_t> ClassIndex::probe_keys(const PatchClass& c) const {
  // Per coordinate: primary rounding, plus the other rounding when the value
  // sits within tol of a bucket boundary.
  std::vector<double> coords;
  coords.reserve(2 * c.size());
  for (const Vec& o : c.representative.offsets) {
    coords.push_back(o.x);
    coords.push_back(o.y);
  }
  std::vector<std::int64_t> primary(coords.size());
  std::vector<std::pair<std::size_t, std::int64_t>> alternates;
  for (std::size_t k = 0; k < coords.size(); ++k) {
    const double t = coords[k] / kCoarse;
    primary[k] = std::llround(t);
    const double frac = t - std::floor(t);
    if (std::abs(frac - 0.5) <= tol_ / kCoarse + 1e-9) {
      const std::int64_t other = (primary[k] == static_cast<std::int64_t>(std::floor(t)))
                                     ? primary[k] + 1
                                     : primary[k] - 1;
      alternates.emplace_back(k, other);
    }
  }
  if (alternates.size() > kMaxAmbiguous) return {};  // caller falls back to a scan
  std::uint64_t base = mix(0, c.size());
  for (int l : c.representative.labels) base = mix(base, static_cast<std::uint64_t>(static_cast<std::int64_t>(l)));
  std::vector<std::uint64_t> keys;
  const std::size_t combos = std::size_t{1} << alternates.size();
  keys.reserve(combos);
  std::vector<std::int64_t> q = primary;
  for (std::size_t mask = 0; mask < combos; ++mask) {
    for (std::size_t a = 0; a < alternates.size(); ++a)
      q[alternates[a].first] = (mask >> a) & 1U ? alternates[a].second : primary[alternates[a].first];
    std::uint64_t h = base;
    for (std::int64_t v : q) h = mix(h, static_cast<std::uint64_t>(v));
    keys.push_back(h);
  }
  return keys;
}

std::optional<std::size_t> ClassIndex::find(const PatchClass& c) const {
  const auto keys = probe_keys(c);
  if (keys.empty()) {
    for (std::size_t i = 0; i < classes_.size(); ++i)
      if (same_class(classes_[i], c, tol_)) return i;
    return std::nullopt;
  }
  for (std::uint64_t k : keys) {
    auto [lo, hi] = lookup_.equal_range(k);
    for (auto it = lo; it != hi; ++it)
      if (same_class(classes_[it->second], c, tol_)) return it->second;
  }
  return std::nullopt;
}

std::optional<std::size_t> ClassIndex::find(const Patch& P) const {
  if (P.offsets.empty()) return std::nullopt;
  return find(canonical_class(P, eq_, tol_));
}

std::size_t ClassIndex::add(const PatchClass& c) {
  if (c.equivalence != eq_) throw Error(ErrorCode::InvalidArgument, "class equivalence does not match the index");
  if (auto hit = find(c)) {
    classes_[*hit].multiplicity += std::max<std::size_t>(c.multiplicity, 1);
    return *hit;
  }
  const std::size_t id = classes_.size();
  classes_.push_back(c);
  if (classes_.back().multiplicity == 0) classes_.back().multiplicity = 1;
  lookup_.emplace(primary_key(c), id);
  return id;
}

std::size_t ClassIndex::add(const Patch& P) { return add(canonical_class(P, eq_, tol_)); }

std::vector<std::size_t> ClassIndex::finalize() {
  std::vector<std::size_t> order(classes_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ka = classes_[a].quantized_key;
    const auto& kb = classes_[b].quantized_key;
    return std::tie(ka[0], ka) < std::tie(kb[0], kb);
  });
  std::vector<std::size_t> remap(classes_.size());
  std::vector<PatchClass> sorted;
  sorted.reserve(classes_.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    remap[order[k]] = k;
    sorted.push_back(std::move(classes_[order[k]]));
  }
  classes_ = std::move(sorted);
  lookup_.clear();
  for (std::size_t k = 0; k < classes_.size(); ++k) lookup_.emplace(primary_key(classes_[k]), k);
  return remap;
}

}  // namespace delone
