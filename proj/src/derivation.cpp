#include "delone/derivation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "delone/atlas.hpp"
#include "delone/error.hpp"
#include "delone/repetitivity.hpp"
#include "delone/voronoi.hpp"

namespace delone {

namespace {

std::string describe(const Patch& p, int dim) {
  std::ostringstream os;
  os.precision(17);
  os << "(offsets:";
  for (std::size_t k = 0; k < p.offsets.size(); ++k) {
    os << " (" << p.offsets[k].x;
    if (dim == 2) os << ", " << p.offsets[k].y;
    os << ")";
    if (p.labeled()) os << "#" << p.labels[k];
  }
  os << ")";
  return os.str();
}

int center_label(const Patch& p) {
  for (std::size_t k = 0; k < p.offsets.size(); ++k)
    if (norm(p.offsets[k]) <= kEta) return p.labeled() ? p.labels[k] : kNoLabel;
  return kNoLabel;
}

double power(double L, int n) { return std::pow(L, static_cast<double>(n)); }

nlohmann::json vec_json(Vec v, int dim) { return dim == 1 ? nlohmann::json::array({v.x}) : nlohmann::json::array({v.x, v.y}); }

Vec json_vec(const nlohmann::json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) throw Error(ErrorCode::InputError, "offset of wrong dimension");
  for (const auto& c : j)
    if (!c.is_number()) throw Error(ErrorCode::InputError, "offset coordinate is not a number");
  return {j[0].get<double>(), dim == 2 ? j[1].get<double>() : 0.0};
}

}  // namespace

void LocalDerivationRule::set(const Patch& p, std::vector<ImagePoint> image) {
  const std::size_t before = table.size();
  const std::size_t id = table.add(p);
  if (id == before) images.emplace_back();
  images[id] = std::move(image);
  for (const ImagePoint& q : images[id]) offset_bound = std::max(offset_bound, norm(q.offset));
}

LocalDerivationRule make_rule(const WindowedDeloneSet& X, double s, bool labeled, std::string name,
                              const std::function<std::vector<ImagePoint>(const Patch&)>& image_of) {
  if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "rule radius must be positive");
  if (labeled && !X.has_labels()) throw Error(ErrorCode::InvalidArgument, "labeled rule needs a labeled input");
  LocalDerivationRule rule;
  rule.name = std::move(name);
  rule.radius = s;
  rule.labeled = labeled;
  const WindowedDeloneSet plain = labeled ? WindowedDeloneSet{} : X.unlabeled();
  const WindowedDeloneSet& src = labeled ? X : plain;
  for (std::size_t k : src.interior(s)) {
    const Patch p = extract_patch_unchecked(src, src.point(k), s);
    if (rule.table.find(p)) continue;
    rule.set(p, image_of(p));
  }
  return rule;
}

LocalDerivationRule identity_rule(const WindowedDeloneSet& X, double s) {
  return make_rule(X, s, X.has_labels(), "identity",
                   [](const Patch& p) { return std::vector<ImagePoint>{{{}, center_label(p)}}; });
}

LocalDerivationRule translated_rule(const WindowedDeloneSet& X, double s, Vec t) {
  return make_rule(X, s, X.has_labels(), "translated-identity",
                   [t](const Patch& p) { return std::vector<ImagePoint>{{t, center_label(p)}}; });
}

LocalDerivationRule label_forgetting_rule(const WindowedDeloneSet& X, double s) {
  if (!X.has_labels()) throw Error(ErrorCode::InvalidArgument, "label forgetting needs a labeled input");
  return make_rule(X, s, true, "label-forgetting",
                   [](const Patch&) { return std::vector<ImagePoint>{{{}, kNoLabel}}; });
}

LocalDerivationRule midpoint_rule(const WindowedDeloneSet& X, double s) {
  if (X.dim() != 1) throw Error(ErrorCode::UnsupportedDimension, "midpoint rule is one-dimensional");
  return make_rule(X, s, false, "midpoint", [s](const Patch& p) {
    double next = std::numeric_limits<double>::infinity();
    for (const Vec& o : p.offsets)
      if (o.x > kEta) next = std::min(next, o.x);
    if (!std::isfinite(next)) {
      std::ostringstream os;
      os << "midpoint rule radius " << s << " does not reach the next point";
      throw Error(ErrorCode::InvalidArgument, os.str());
    }
    return std::vector<ImagePoint>{{{next / 2.0, 0.0}, kNoLabel}};
  });
}

nlohmann::json rule_to_json(const LocalDerivationRule& rule) {
  nlohmann::json entries = nlohmann::json::array();
  const int dim = [&] {
    for (const auto& c : rule.table.classes())
      for (const Vec& o : c.representative.offsets)
        if (o.y != 0.0) return 2;
    return 1;
  }();
  for (std::size_t c = 0; c < rule.table.size(); ++c) {
    const Patch& p = rule.table[c].representative;
    nlohmann::json e;
    e["class_offsets"] = nlohmann::json::array();
    for (const Vec& o : p.offsets) e["class_offsets"].push_back(vec_json(o, dim));
    if (p.labeled()) e["labels"] = p.labels;
    e["image_offsets"] = nlohmann::json::array();
    std::vector<int> image_labels;
    bool any_label = false;
    for (const ImagePoint& q : rule.images[c]) {
      e["image_offsets"].push_back(vec_json(q.offset, dim));
      image_labels.push_back(q.label);
      any_label |= q.label != kNoLabel;
    }
    if (any_label) e["image_labels"] = image_labels;
    entries.push_back(std::move(e));
  }
  return {{"name", rule.name}, {"radius", rule.radius}, {"dim", dim}, {"entries", entries}};
}

LocalDerivationRule rule_from_json(const nlohmann::json& j, int dim) {
  try {
    if (!j.is_object() || !j.contains("radius") || !j.contains("entries") || !j["entries"].is_array())
      throw Error(ErrorCode::InputError, "rule needs \"radius\" and \"entries\"");
    LocalDerivationRule rule;
    rule.name = j.value("name", std::string("rule"));
    rule.radius = j["radius"].get<double>();
    if (!(rule.radius > 0.0)) throw Error(ErrorCode::InputError, "rule radius must be positive");
    bool first = true;
    for (const auto& e : j["entries"]) {
      Patch p;
      p.radius = rule.radius;
      for (const auto& o : e.at("class_offsets")) p.offsets.push_back(json_vec(o, dim));
      if (e.contains("labels")) p.labels = e["labels"].get<std::vector<int>>();
      if (!p.labels.empty() && p.labels.size() != p.offsets.size())
        throw Error(ErrorCode::InputError, "labels and class_offsets differ in length");
      for (const Vec& o : p.offsets)
        if (norm(o) >= rule.radius) throw Error(ErrorCode::InputError, "class offset outside the rule radius");
      if (p.offsets.empty()) throw Error(ErrorCode::InputError, "empty class");
      if (first) rule.labeled = p.labeled();
      else if (rule.labeled != p.labeled()) throw Error(ErrorCode::InputError, "mixed labeled and unlabeled entries");
      first = false;
      sort_patch(p);
      std::vector<ImagePoint> image;
      for (const auto& o : e.at("image_offsets")) image.push_back({json_vec(o, dim), kNoLabel});
      if (e.contains("image_labels")) {
        const auto labels = e["image_labels"].get<std::vector<int>>();
        if (labels.size() != image.size()) throw Error(ErrorCode::InputError, "image_labels and image_offsets differ in length");
        for (std::size_t k = 0; k < labels.size(); ++k) image[k].label = labels[k];
      }
      rule.set(p, std::move(image));
    }
    return rule;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::InputError, std::string("malformed rule: ") + ex.what());
  }
}

WindowedDeloneSet apply_rule(const LocalDerivationRule& rule, const WindowedDeloneSet& X, bool parallel) {
  const double W2 = X.window_radius() - rule.s0();
  if (W2 <= 0.0) throw Error(ErrorCode::InsufficientWindow, "rule reach exceeds the window");
  if (rule.labeled && !X.has_labels()) throw Error(ErrorCode::UnknownPatchClass, "labeled rule applied to an unlabeled set");
  const WindowedDeloneSet plain = rule.labeled ? WindowedDeloneSet{} : X.unlabeled();
  const WindowedDeloneSet& src = rule.labeled ? X : plain;
  const auto centers = src.interior(rule.radius);
  std::vector<std::size_t> cls(centers.size());
  std::exception_ptr error;
  const auto n = static_cast<std::int64_t>(centers.size());
#pragma omp parallel for schedule(dynamic, 256) if (parallel)
  for (std::int64_t k = 0; k < n; ++k) {
    const Patch p = extract_patch_unchecked(src, src.point(centers[static_cast<std::size_t>(k)]), rule.radius);
    const auto id = rule.table.find(p);
    if (id) {
      cls[static_cast<std::size_t>(k)] = *id;
    } else {
#pragma omp critical(delone_rule_error)
      if (!error) {
        try {
          throw Error(ErrorCode::UnknownPatchClass, "rule '" + rule.name + "' has no entry for the patch at " +
                                                        std::to_string(p.center.x) + " " + describe(p, X.dim()));
        } catch (...) {
          error = std::current_exception();
        }
      }
    }
  }
  if (error) std::rethrow_exception(error);
  // Serial merge in center order keeps the output deterministic.
  PointHash seen(X.dim());
  std::vector<int> labels;
  bool labeled = false;
  for (std::size_t k = 0; k < centers.size(); ++k) {
    for (const ImagePoint& q : rule.images[cls[k]]) {
      const Vec y = src.point(centers[k]) + q.offset;
      if (norm(y) > W2) continue;
      const auto [id, fresh] = seen.insert(y);
      if (fresh) labels.push_back(q.label);
      else if (q.label != kNoLabel && (labels[id] == kNoLabel || q.label < labels[id])) labels[id] = q.label;
      labeled |= q.label != kNoLabel;
    }
  }
  std::vector<Vec> pts(seen.points().begin(), seen.points().end());
  if (pts.size() < 2) throw Error(ErrorCode::OutputNotDelone, "derived set has fewer than two points");
  WindowedDeloneSet::Options opt;
  if (labeled) opt.labels = labels;
  opt.meta = X.meta();
  opt.meta["derived_by"] = rule.name;
  opt.meta["rule_radius"] = rule.radius;
  opt.meta["rule_offset_bound"] = rule.offset_bound;
  WindowedDeloneSet Y = WindowedDeloneSet::build(std::move(pts), X.dim(), W2, std::move(opt));
  // Relative density on the inner half of the output window.
  const DeclaredCheck chk = [&] {
    DeclaredCheck c;
    const double rho = W2 / 2.0;
    const double g = 0.6180339887498949;
    for (std::size_t k = 0; k < 64; ++k) {
      const double a = std::fmod(0.5 + g * static_cast<double>(k), 1.0);
      const double b = std::fmod(0.5 + 0.7548776662466927 * static_cast<double>(k), 1.0);
      const Vec y = X.dim() == 1 ? Vec{(2.0 * a - 1.0) * rho, 0.0}
                                 : Vec{rho * std::sqrt(a) * std::cos(6.283185307179586 * b),
                                       rho * std::sqrt(a) * std::sin(6.283185307179586 * b)};
      c.worst_sample_distance = std::max(c.worst_sample_distance, Y.nearest(y).second);
    }
    return c;
  }();
  if (chk.worst_sample_distance > W2 / 2.0)
    throw Error(ErrorCode::OutputNotDelone, "derived set leaves holes comparable to the window");
  return Y;
}

FiberCount fiber_class_count(const LocalDerivationRule& rule, const WindowedDeloneSet& X, double R, double L,
                             bool parallel) {
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  const WindowedDeloneSet Y = apply_rule(rule, X, parallel);
  const double outer = R + rule.s0();
  if (outer >= Y.window_radius()) throw Error(ErrorCode::InsufficientWindow, "R + s0 exceeds the derived window");
  FiberCount out;
  out.R = R;
  out.bound = std::pow(55.0 * L * L, X.dim());
  ClassIndex image_classes(Equivalence::Centered);
  ClassIndex pre_classes(Equivalence::Centered);
  std::map<std::size_t, std::set<std::size_t>> fibers;
  constexpr std::size_t kEmpty = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < X.size(); ++i) {
    const Vec x = X.point(i);
    if (!Y.ball_inside(x, outer)) continue;
    ++out.centers;
    const Patch q = extract_patch_unchecked(Y, x, outer);
    const std::size_t a = q.offsets.empty() ? kEmpty : image_classes.add(q);
    fibers[a].insert(pre_classes.add(extract_patch_unchecked(X, x, R)));
  }
  if (out.centers == 0) throw Error(ErrorCode::InsufficientWindow, "no point of X has a complete image ball");
  out.image_classes = fibers.size();
  for (const auto& [a, s] : fibers) out.count = std::max(out.count, s.size());
  return out;
}

bool n_condition_holds(double L, int n) { return power(L, n) - 1.0 - 12.0 * L - 176.0 * L * L > 1.0; }

Family build_family_F(const WindowedDeloneSet& X, double R, int n, double L, bool parallel) {
  if (n < 1 || !(L >= 1.0) || !(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "need n >= 1, L >= 1, R > 0");
  Family F;
  F.R = R;
  F.n = n;
  F.L = L;
  F.patch_radius = power(L, n) * R;
  const int d = X.dim();
  F.bound = std::pow(352.0 * L * L * L, d) * std::pow(968.0 * power(L, n + 3), d);
  if (F.patch_radius + 4.0 * L * R >= X.window_radius())
    throw Error(ErrorCode::InsufficientWindow, "window below L^n R + 4 L R");
  const DeloneEstimate est = estimate_delone_params(X, {}, parallel);
  if (auto v = find_period(X, est.R_hat)) {
    std::ostringstream os;
    os.precision(17);
    os << "X - v = X on the window for v = (" << v->x << ", " << v->y << ")";
    throw Error(ErrorCode::PeriodicInput, os.str());
  }
  const auto [i0, d0] = X.nearest({});
  (void)d0;
  F.base = X.point(i0);
  const Atlas A = r_atlas(X, R, Equivalence::Translation, parallel);
  const Patch P = extract_patch(X, F.base, R);
  const auto cid = A.index.find(P);
  if (!cid) throw Error(ErrorCode::InsufficientWindow, "the base patch is not in the atlas window");
  F.base_patch = A[*cid];
  const PatchCells cells = voronoi_cells_of_patch(X, A, *cid);
  const CellClassSummary summary = cell_patch_classes(X, cells);
  F.cell_classes = summary.classes.size();
  for (std::size_t j = 0; j < summary.representative.size(); ++j) {
    // The representative cell of class j, moved to the closest usable copy if
    // its L^n R ball leaves the window.
    std::optional<std::size_t> pick;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cells.cells.size(); ++k) {
      if (summary.class_of_cell[k] != j || !X.ball_inside(cells.cells[k].site, F.patch_radius)) continue;
      const double r = norm(cells.cells[k].site);
      if (r < best) {
        best = r;
        pick = k;
      }
    }
    if (!pick) throw Error(ErrorCode::InsufficientWindow, "no copy of a cell class has its L^n R ball inside the window");
    const CellReturnResult res = cell_return_patches(X, cells, *pick, n, L);
    F.central_balls_agree &= res.central_ball_agrees;
    F.cell_return_counts.push_back(res.classes.size());
    for (std::size_t l = 0; l < res.classes.size(); ++l)
      F.members.push_back({j, l, F.classes.add(res.classes[l])});
  }
  return F;
}

bool RelationMatrix::reflexive() const {
  for (std::size_t a = 0; a < entries.size(); ++a)
    if (!entries[a][a]) return false;
  return true;
}

RelationMatrix relation_Ri(const LocalDerivationRule& rule, const Family& family, const WindowedDeloneSet& X,
                           const TheoremHarnessConfig& cfg, bool parallel) {
  if (!cfg.override_n && !n_condition_holds(cfg.L, cfg.n)) {
    std::ostringstream os;
    os << "n = " << cfg.n << " violates L^n - 1 - 12L - 176L^2 > 1 for L = " << cfg.L << " (use the override)";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  RelationMatrix M;
  M.rule_id = rule.name;
  const double LnR = power(cfg.L, cfg.n) * cfg.R;
  M.search_radius = 4.0 * cfg.L * cfg.R;
  M.R_prime = (power(cfg.L, cfg.n) - 1.0) * cfg.R - cfg.epsilon - M.search_radius;
  if (M.R_prime <= 0.0) {
    M.R_prime = (power(cfg.L, cfg.n) - 1.0) * cfg.R - cfg.epsilon;
    M.R_prime_fallback = true;
  }
  if (M.R_prime <= 0.0) throw Error(ErrorCode::InvalidArgument, "R' is not positive");
  const WindowedDeloneSet Y = apply_rule(rule, X, parallel);
  const double need = M.R_prime + M.search_radius;
  const std::size_t m = family.size();

  // Occurrences of family members: points y with the centered L^n R patch in the family
  // and the whole comparison neighborhood inside π(X)'s window.
  std::vector<std::vector<Vec>> occ(m);
  for (std::size_t i : X.interior(LnR)) {
    const Vec y = X.point(i);
    if (!Y.ball_inside(y, need)) continue;
    const auto id = family.classes.find(extract_patch_unchecked(X, y, LnR));
    if (id) occ[*id].push_back(y);
  }
  M.occurrences.resize(m);
  for (std::size_t a = 0; a < m; ++a) {
    M.occurrences[a] = occ[a].size();
    if (occ[a].empty()) throw Error(ErrorCode::NoOccurrence, "a family member has no occurrence with a complete neighborhood");
  }

  // Q_a: centered R'-classes of π(X) at the occurrences of a.
  ClassIndex qclasses(Equivalence::Centered);
  std::vector<std::vector<std::size_t>> Q(m);
  for (std::size_t a = 0; a < m; ++a) {
    std::set<std::size_t> s;
    for (const Vec& y : occ[a]) s.insert(qclasses.add(extract_patch_unchecked(Y, y, M.R_prime)));
    Q[a].assign(s.begin(), s.end());
  }
  M.Q_sizes.resize(m);
  for (std::size_t a = 0; a < m; ++a) M.Q_sizes[a] = Q[a].size();

  // Occurrences of b with the same centered π-neighborhood of radius R' + 4LR give the same answers.
  std::vector<std::vector<Vec>> reps(m);
  for (std::size_t b = 0; b < m; ++b) {
    ClassIndex nb(Equivalence::Centered);
    for (const Vec& y : occ[b]) {
      const std::size_t before = nb.size();
      if (nb.add(extract_patch_unchecked(Y, y, need)) == before) reps[b].push_back(y);
    }
  }

  M.entries.assign(m, std::vector<bool>(m, false));
  const auto mm = static_cast<std::int64_t>(m * m);
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (std::int64_t e = 0; e < mm; ++e) {
    const std::size_t a = static_cast<std::size_t>(e) / m, b = static_cast<std::size_t>(e) % m;
    // Every π-patch seen at an occurrence of a must reappear near every occurrence of b.
    bool all = true;
    std::vector<std::size_t> idx;
    for (std::size_t qa : Q[a]) {
      const Patch& rep = qclasses[qa].representative;
      const Vec o = rep.offsets.front();
      for (const Vec& y2 : reps[b]) {
        bool found = false;
        // Y ∩ B_{R'}(z) − z = rep forces z + o ∈ Y.
        Y.index().in_ball(y2 + o, M.search_radius, true, idx);
        for (std::size_t q : idx) {
          const Vec z = Y.point(q) - o;
          if (dist(z, y2) >= M.search_radius) continue;
          const Patch p = extract_patch_unchecked(Y, z, M.R_prime);
          if (!p.offsets.empty() && same_class(canonical_class(p, Equivalence::Centered), qclasses[qa])) {
            found = true;
            break;
          }
        }
        if (!found) {
          all = false;
          break;
        }
      }
      if (!all) break;
    }
    M.entries[a][b] = all;
  }
  return M;
}

RelationComparison compare_relations(const std::vector<RelationMatrix>& mats, double family_bound) {
  RelationComparison out;
  for (std::size_t i = 1; i < mats.size(); ++i)
    if (mats[i].entries.size() != mats[0].entries.size())
      throw Error(ErrorCode::FamilyMismatch, "relation matrices are over different families");
  for (std::size_t i = 0; i < mats.size(); ++i)
    for (std::size_t j = i + 1; j < mats.size(); ++j)
      if (mats[i].entries == mats[j].entries) out.equal_pairs.emplace_back(i, j);
  out.k = family_bound;
  out.log10_relations = family_bound * family_bound * std::log10(2.0);
  out.log10_coverings = family_bound * std::log10(2.0);
  return out;
}

}  // namespace delone
