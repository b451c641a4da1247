// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned here.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "delone/atlas.hpp"
#include "delone/derivation.hpp"
#include "delone/error.hpp"
#include "delone/generators.hpp"
#include "delone/io.hpp"
#include "delone/metric.hpp"
#include "delone/repetitivity.hpp"
#include "delone/verify.hpp"
#include "delone/voronoi.hpp"

using namespace delone;

namespace {

constexpr double kVertexTol = 1e-9;
constexpr double kTilingTol = 1e-6;
constexpr double kOracleResolution = 1e-4;
constexpr double kMetricAgreement = 1e-3;
constexpr double kSelfDistance = 1e-6;
constexpr double kEquivarianceTol = 1e-9;
constexpr double kStability = 0.10;

const std::vector<double> kLrGrid{1.5, 2, 3, 5, 8, 13, 20};

struct Outcome {
  bool passed = false;
  std::string detail;
};

char buf[512];

template <class... A>
std::string fmt(const char* f, A... a) {
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

bool run(int id, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = o.passed && s < limit_s;
  std::printf("criterion %d: %s  %s  [%.1fs, limit %.0fs]\n", id, ok ? "PASS" : "FAIL", o.detail.c_str(), s, limit_s);
  std::fflush(stdout);
  return ok;
}

WindowedDeloneSet fibonacci(double W) { return trim_unlabeled_edge(generate_substitution_1d(fibonacci_rule(), W)); }

double lr_of(const WindowedDeloneSet& X, const std::vector<double>& grid) {
  std::vector<double> g;
  for (double R : grid)
    if (R < X.window_radius() / 4.0) g.push_back(R);
  return lr_constant(X, g).L_hat;
}

Outcome geometry() {
  const auto Z2 = generate_lattice({{1, 0}, {0, 1}}, 10.0);
  const Polytope c = voronoi_cell(Z2, Vec{0, 0}, 3.0);
  bool square = c.vertices.size() == 4;
  for (Vec v : {Vec{0.5, 0.5}, Vec{-0.5, 0.5}, Vec{-0.5, -0.5}, Vec{0.5, -0.5}}) {
    bool hit = false;
    for (const Vec& w : c.vertices) hit |= dist(v, w) <= kVertexTol;
    square &= hit;
  }
  const auto A = generate_cut_and_project(ammann_beenker_scheme(), 20.0);
  const TilingReport t = tiling_check(A, estimate_delone_params(A).R_upper);
  return {square && t.relative_error <= kTilingTol,
          fmt("Z^2 origin cell square=%s; AB W=20 tiling rel. error %.2e (tol %.0e) over %zu cells",
              square ? "yes" : "no", t.relative_error, kTilingTol, t.cells)};
}

Outcome localization() {
  const auto A = generate_cut_and_project(ammann_beenker_scheme(), 20.0);
  const auto e = estimate_delone_params(A);
  auto pool = A.interior(8.0 * e.R_upper);
  std::mt19937_64 rng(0);
  std::shuffle(pool.begin(), pool.end(), rng);
  if (pool.size() < 200) return {false, fmt("only %zu admissible sites", pool.size())};
  pool.resize(200);
  const auto a = voronoi_cells(A, pool, 4.0 * e.R_upper, true);
  const auto b = voronoi_cells(A, pool, 8.0 * e.R_upper, true);
  std::size_t diff = 0;
  for (std::size_t k = 0; k < a.size(); ++k) diff += !same_vertices(a[k], b[k], kVertexTol);
  return {diff == 0, fmt("200 AB sites, cutoffs %.4f vs %.4f: %zu vertex-set mismatches", 4.0 * e.R_upper,
                         8.0 * e.R_upper, diff)};
}

Outcome return_gap() {
  const auto F = fibonacci(1e4).unlabeled();
  const double L = lr_of(F, kLrGrid);
  std::size_t violations = 0;
  std::string per;
  for (double R : {5.0, 10.0, 20.0, 40.0}) {
    const ReturnGap g = min_return_gap(F, r_atlas(F, R));
    violations += !(g.gap >= R / (11.0 * L));
    per += fmt(" R=%g:%.3f>=%.3f", R, g.gap, R / (11.0 * L));
  }
  return {violations == 0, fmt("Fibonacci W=1e4, L=%.4f;%s; violations %zu", L, per.c_str(), violations)};
}

// Extension, cell-class and cell-return counts against their bounds.
std::string count_bounds(const WindowedDeloneSet& X, double L, double R1, double R2, double R, std::size_t& violations) {
  const double d = X.dim();
  const ExtensionCount ext = extension_count(X, R1, R2);
  const double ext_bound = std::pow(44.0 * L * L, d) * std::pow(R2 / R1, d);
  const Atlas A = r_atlas(X, R);
  const auto base = A.index.find(extract_patch(X, X.point(X.nearest({}).first), R));
  if (!base) throw Error(ErrorCode::InsufficientWindow, "origin patch outside the atlas");
  const PatchCells pc = voronoi_cells_of_patch(X, A, *base);
  const CellClassSummary s = cell_patch_classes(X, pc);
  const double cell_bound = std::pow(352.0 * L * L * L, d);
  std::size_t ret = 0;
  for (std::size_t j = 0; j < s.representative.size(); ++j) {
    std::optional<std::size_t> pick;
    for (std::size_t k = 0; k < pc.cells.size() && !pick; ++k)
      if (s.class_of_cell[k] == j && X.ball_inside(pc.cells[k].site, L * R)) pick = k;
    if (!pick) throw Error(ErrorCode::InsufficientWindow, "no cell copy with its L R ball inside");
    ret = std::max(ret, cell_return_patches(X, pc, *pick, 1, L).classes.size());
  }
  const double ret_bound = std::pow(968.0 * std::pow(L, 4.0), d);
  violations += (ext.max_extensions > ext_bound) + (s.classes.size() > cell_bound) + (ret > ret_bound);
  return fmt("ext(%g,%g) %zu<=%.3g, cells(R=%g) %zu<=%.3g, returns(n=1) %zu<=%.3g", R1, R2, ext.max_extensions,
             ext_bound, R, s.classes.size(), cell_bound, ret, ret_bound);
}

Outcome counting() {
  std::size_t violations = 0;
  const auto F = fibonacci(1e4).unlabeled();
  const double LF = lr_of(F, kLrGrid);
  const std::string f = count_bounds(F, LF, 5.0, 20.0, 5.0, violations);
  // d = 2 radii scaled to a window of radius 40.
  const auto A = generate_cut_and_project(ammann_beenker_scheme(), 40.0);
  const double LA = lr_of(A, {1, 1.5, 2, 3});
  const std::string a = count_bounds(A, LA, 1.0, 4.0, 1.25, violations);
  return {violations == 0, fmt("Fibonacci L=%.3f: ", LF) + f + fmt("; AB W=40 L=%.3f: ", LA) + a +
                               fmt("; violations %zu", violations)};
}

std::vector<double> ball(const WindowedDeloneSet& X, double v, double rad) {
  std::vector<double> out;
  for (const Vec& p : X.points())
    if (std::abs(p.x - v) < rad) out.push_back(p.x - v);
  std::sort(out.begin(), out.end());
  return out;
}

// Independent grid search: smallest ε on a 1e-4 grid with grid points v and
// aligned v′ whose open balls agree.
double oracle_distance(const WindowedDeloneSet& X, const WindowedDeloneSet& Y) {
  for (double e = kOracleResolution; e < 0.7; e += kOracleResolution) {
    const double rad = 1.0 / e;
    if (rad + e > X.window_radius()) continue;
    std::vector<double> shifts;
    for (const Vec& x : X.points())
      for (const Vec& y : Y.points())
        if (std::abs(x.x) < 3.0 && std::abs(y.x) < 3.0 && std::abs(x.x - y.x) < 2.0 * e) shifts.push_back(x.x - y.x);
    for (double v = -e + kOracleResolution / 2.0; v < e; v += kOracleResolution)
      for (double dlt : shifts) {
        const double vp = v - dlt;
        if (std::abs(vp) >= e) continue;
        const auto a = ball(X, v, rad), b = ball(Y, vp, rad);
        bool same = a.size() == b.size();
        for (std::size_t k = 0; k < a.size() && same; ++k) same = std::abs(a[k] - b[k]) < kEta;
        if (same) return e;
      }
  }
  return kMetricCap;
}

WindowedDeloneSet progression(double step, double shift, double W) {
  std::vector<Vec> pts;
  const long n = static_cast<long>(W / step) + 2;
  for (long k = -n; k <= n; ++k)
    if (std::abs(k * step + shift) <= W) pts.push_back({k * step + shift, 0.0});
  return WindowedDeloneSet::build(pts, 1, W);
}

Outcome metric() {
  const auto Z = progression(1.0, 0.0, 40.0), H = progression(1.0, -0.5, 40.0), E = progression(2.0, 0.0, 40.0);
  const MetricResult zh = delone_distance(Z, H);
  const double oracle = oracle_distance(Z, H);
  const double mid = 0.5 * (zh.lower + zh.upper);
  const MetricResult ze = delone_distance(Z, E);
  // d(X, X) ≤ 1e-6 needs 1/ε + ε ≤ W at ε = 1e-6.
  const auto F = generate_substitution_1d(fibonacci_rule(), 1.0005e6).unlabeled();
  const MetricResult ff = delone_distance(F, F);
  const bool ok = std::abs(mid - oracle) <= kMetricAgreement && ze.cap_hit &&
                  std::abs(ze.upper - kMetricCap) < 1e-15 && ff.upper <= kSelfDistance;
  return {ok, fmt("d(Z,Z-1/2) in [%.6f, %.6f] vs oracle %.4f; d(Z,2Z) cap_hit=%s (%.6f); d(X,X) upper %.3e (W=%.4g)",
                  zh.lower, zh.upper, oracle, ze.cap_hit ? "yes" : "no", ze.upper, ff.upper, F.window_radius())};
}

Outcome factors() {
  const auto F = fibonacci(1e4);
  const double L = lr_of(F, kLrGrid);
  const auto id = identity_rule(F, 3.0), lf = label_forgetting_rule(F, 3.0);
  std::string counts;
  bool ok = true;
  std::size_t first_lf = 0;
  for (double R : {5.0, 10.0, 20.0}) {
    const auto a = fiber_class_count(id, F, R, L), b = fiber_class_count(lf, F, R, L);
    if (R == 5.0) first_lf = b.count;
    ok &= a.count == 1 && b.count == first_lf && b.count <= 55.0 * L * L;
    counts += fmt(" R=%g:%zu/%zu", R, a.count, b.count);
  }
  const auto Y = apply_rule(lf, F);
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> u(-500.0, 500.0);
  double worst = 0.0;
  std::size_t missing = 0;
  for (int k = 0; k < 50; ++k) {
    const Vec v{u(rng), 0.0};
    const auto lhs = apply_rule(lf, F.translated(v)), rhs = Y.translated(v);
    const double r = std::min(lhs.window_radius(), rhs.window_radius()) - 1e-6;
    for (const Vec& p : lhs.points()) {
      if (norm(p) >= r) continue;
      const auto [j, d] = rhs.nearest(p);
      worst = std::max(worst, d);
      missing += d > kEquivarianceTol;
    }
    for (const Vec& p : rhs.points())
      if (norm(p) < r) missing += !lhs.find(p, kEquivarianceTol);
  }
  ok &= missing == 0;
  return {ok, fmt("tile-decorated Fibonacci W=1e4, L=%.4f, identity/label-forgetting fibers:%s (bound %.1f); "
                  "equivariance on 50 v: max deviation %.1e, %zu misses",
                  L, counts.c_str(), 55.0 * L * L, worst, missing)};
}

Outcome stability() {
  const auto small = lr_constant(fibonacci(1e3).unlabeled(), kLrGrid);
  const auto big = lr_constant(fibonacci(1e4).unlabeled(), kLrGrid);
  const double rel = std::abs(small.L_hat - big.L_hat) / big.L_hat;
  return {rel < kStability && big.monotone && small.monotone,
          fmt("L(W=1e3)=%.5f L(W=1e4)=%.5f rel. diff %.4f (< %.2f); M monotone %s/%s", small.L_hat, big.L_hat, rel,
              kStability, small.monotone ? "yes" : "no", big.monotone ? "yes" : "no")};
}

struct HarnessRun {
  double L = 0.0;
  std::size_t family = 0;
  double bound = 0.0;
  bool id_tr_equal = false, reflexive = false, id_lf_differ = false;
  std::size_t diffs = 0;
};

HarnessRun harness(const WindowedDeloneSet& X, const std::vector<double>& grid) {
  HarnessRun h;
  h.L = lr_of(X, grid);
  const Family fam = build_family_F(X, 5.0, 2, h.L);
  h.family = fam.size();
  h.bound = fam.bound;
  TheoremHarnessConfig cfg;
  cfg.n = 2;
  cfg.R = 5.0;
  cfg.L = h.L;
  cfg.override_n = true;
  const auto id = relation_Ri(identity_rule(X, 3.0), fam, X, cfg);
  const auto tr = relation_Ri(translated_rule(X, 3.0), fam, X, cfg);
  const auto lf = relation_Ri(label_forgetting_rule(X, 3.0), fam, X, cfg);
  h.id_tr_equal = id.entries == tr.entries;
  h.reflexive = id.reflexive() && tr.reflexive();
  for (std::size_t a = 0; a < id.entries.size(); ++a)
    for (std::size_t b = 0; b < id.entries.size(); ++b) h.diffs += id.entries[a][b] != lf.entries[a][b];
  h.id_lf_differ = h.diffs > 0;
  return h;
}

Outcome theorem_harness() {
  // Index-parity labels: forgetting them is a genuine 2-to-1 factor.
  const auto P = index_parity_decoration(fibonacci(1e4).unlabeled());
  const HarnessRun h = harness(P, kLrGrid);
  const bool ok = h.family <= h.bound && h.id_tr_equal && h.reflexive && h.id_lf_differ;
  // Tile labels are locally derivable from the points, so both factors are
  // conjugate and the matrices coincide. Reported, not gated.
  const HarnessRun t = harness(fibonacci(1e4), kLrGrid);
  std::printf("  info: tile-labelled Fibonacci L=%.4f |F|=%zu identity vs label-forgetting differ at %zu entries\n", t.L,
              t.family, t.diffs);
  return {ok, fmt("parity-coloured Fibonacci W=1e4, n=2 (override), R=5, L=%.4f: |F|=%zu <= %.3g; "
                  "identity==translated %s, reflexive %s; identity vs label-forgetting differ at %zu entries",
                  h.L, h.family, h.bound, h.id_tr_equal ? "yes" : "no", h.reflexive ? "yes" : "no", h.diffs)};
}

Outcome mutation() {
  const auto dir = std::filesystem::temp_directory_path() / "delone_acceptance";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "fibonacci.json").string();
  write_point_set(path, generate_substitution_1d(fibonacci_rule(), 1e4));
  const WindowedDeloneSet F = read_point_set(path);
  std::vector<Vec> pts(F.points().begin(), F.points().end());
  std::vector<int> labels(F.labels().begin(), F.labels().end());
  const std::size_t k = F.nearest({1234.5, 0.0}).first;
  pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(k));
  labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(k));
  WindowedDeloneSet::Options o;
  o.labels = labels;
  o.r_declared = F.r_declared();
  o.R_declared = F.R_declared();
  o.meta = F.meta();
  const auto M = WindowedDeloneSet::build(pts, 1, F.window_radius(), o);
  const auto reports = verify_all(M, {});
  std::string failed;
  for (const auto& r : reports)
    if (!r.passed && !r.skipped) failed += " " + r.check_id;
  return {!failed.empty(), fmt("deleted the point at x=%.4f; failing checks:%s", F.point(k).x,
                               failed.empty() ? " none" : failed.c_str())};
}

}  // namespace

int main() {
  int failures = 0;
  failures += !run(1, 10, geometry);
  failures += !run(2, 30, localization);
  failures += !run(3, 120, return_gap);
  failures += !run(4, 300, counting);
  failures += !run(5, 30, metric);
  failures += !run(6, 120, factors);
  failures += !run(7, 120, stability);
  failures += !run(8, 300, theorem_harness);
  failures += !run(9, 60, mutation);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
