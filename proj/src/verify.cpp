#include "delone/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>

#include "delone/atlas.hpp"
#include "delone/derivation.hpp"
#include "delone/error.hpp"
#include "delone/generators.hpp"
#include "delone/kernels.hpp"
#include "delone/repetitivity.hpp"
#include "delone/voronoi.hpp"

namespace delone {

Profile profile_for(const std::string& name, int dim) {
  Profile p;
  p.name = name;
  if (dim == 1) {
    if (name == "smoke") {
      p.gap_radii = {5, 10};
      p.lr_grid = {1.5, 2, 3, 5};
      p.ext_R1 = 2, p.ext_R2 = 8;
      p.cell_R = 3;
      p.fiber_radii = {3, 5};
      p.factor_radii = {2, 3};
      p.localization_sites = 50;
    } else if (name == "desk") {
      p.gap_radii = {5, 10, 20, 40};
      p.lr_grid = {1.5, 2, 3, 5, 8, 13, 20};
      p.fiber_radii = {5, 10, 20};
      p.factor_radii = {2, 3, 5, 8};
    } else if (name == "deep") {
      p.gap_radii = {5, 10, 20, 40, 80};
      p.lr_grid = {1.5, 2, 3, 5, 8, 13, 20, 34};
      p.ext_R1 = 5, p.ext_R2 = 40;
      p.cell_R = 8;
      p.cell_n = 2;
      p.fiber_radii = {5, 10, 20, 40};
      p.factor_radii = {2, 3, 5, 8, 13};
      p.localization_sites = 1000;
    } else {
      throw Error(ErrorCode::UsageError, "unknown profile '" + name + "' (smoke, desk, deep)");
    }
    return p;
  }
  p.rule_radius = 1.0;
  if (name == "smoke") {
    p.gap_radii = {1, 1.5};
    p.lr_grid = {1, 1.5};
    p.ext_R1 = 0.75, p.ext_R2 = 1.5;
    p.cell_R = 1;
    p.fiber_radii = {1};
    p.factor_radii = {1};
    p.localization_sites = 50;
  } else if (name == "desk") {
    p.gap_radii = {1, 1.5, 2, 3};
    p.lr_grid = {1, 1.5, 2, 3};
    p.ext_R1 = 1, p.ext_R2 = 4;
    p.cell_R = 1.25;
    p.fiber_radii = {1, 1.5, 2};
    p.factor_radii = {1, 1.5};
  } else if (name == "deep") {
    p.gap_radii = {1, 1.5, 2, 3, 4};
    p.lr_grid = {1, 1.5, 2, 3, 4};
    p.ext_R1 = 1.25, p.ext_R2 = 5;
    p.cell_R = 1.5;
    p.fiber_radii = {1, 1.5, 2, 3};
    p.factor_radii = {1, 1.5, 2};
    p.localization_sites = 1000;
  } else {
    throw Error(ErrorCode::UsageError, "unknown profile '" + name + "' (smoke, desk, deep)");
  }
  return p;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["check_id"] = check_id;
  j["parameters"] = parameters;
  j["measured"] = std::isfinite(measured) ? nlohmann::json(measured) : nlohmann::json(nullptr);
  j["bound"] = bound && std::isfinite(*bound) ? nlohmann::json(*bound) : nlohmann::json(nullptr);
  j["relation"] = relation;
  j["passed"] = passed;
  j["skipped"] = skipped;
  if (!reason.empty()) j["reason"] = reason;
  j["scanned_range"] = scanned_range;
  j["window_stats"] = window_stats;
  j["details"] = details;
  return j;
}

nlohmann::json reports_to_json(const std::vector<VerificationReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  bool all = true;
  for (const auto& r : reports) {
    arr.push_back(r.to_json());
    all &= r.passed || r.skipped;
  }
  return {{"passed", all}, {"reports", arr}};
}

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids = {
      "delone-params",  "return-gap",      "voronoi-localization", "tiling-area",
      "cell-diameter",  "cell-contained-ball", "cell-count",      "extension-count",
      "cell-return-count", "fiber-bound",   "factor-lr"};
  return ids;
}

namespace {

// Checks whose bounds presuppose a non-periodic input.
bool needs_aperiodic(const std::string& id) {
  return id == "return-gap" || id == "cell-diameter" || id == "cell-contained-ball" || id == "cell-count" ||
         id == "cell-return-count";
}

std::vector<double> below(const std::vector<double>& radii, double limit) {
  std::vector<double> out;
  for (double r : radii)
    if (r < limit) out.push_back(r);
  return out;
}

// Lazily computed quantities shared by the checks of one run.
class Context {
 public:
  Context(const WindowedDeloneSet& X, const VerifyOptions& opt)
      : X_(trim_unlabeled_edge(X)), opt_(opt), prof_(profile_for(opt.profile, X.dim())) {}

  const WindowedDeloneSet& X() const { return X_; }
  const VerifyOptions& opt() const { return opt_; }
  const Profile& profile() const { return prof_; }
  int d() const { return X_.dim(); }

  const DeloneEstimate& est() {
    if (!est_) est_ = estimate_delone_params(X_, {}, opt_.parallel);
    return *est_;
  }
  const std::optional<Vec>& period() {
    if (!period_checked_) {
      period_ = find_period(X_, est().R_hat);
      period_checked_ = true;
    }
    return period_;
  }
  double L() {
    if (opt_.L) return *opt_.L;
    if (!lr_) {
      const auto grid = below(prof_.lr_grid, X_.window_radius() / 4.0);
      if (grid.empty()) throw Error(ErrorCode::InsufficientWindow, "window too small for the repetitivity grid");
      lr_ = lr_constant(X_, grid, {std::nullopt, opt_.parallel});
    }
    return lr_->L_hat;
  }
  nlohmann::json L_source() {
    if (opt_.L) return {{"L", *opt_.L}, {"source", "override"}};
    L();
    return {{"L", lr_->L_hat}, {"source", "lr_constant"}, {"R_grid", lr_->R_grid}, {"resolution", lr_->resolution}};
  }
  double cell_R() const { return opt_.radius.value_or(prof_.cell_R); }
  const Atlas& cell_atlas() {
    if (!atlas_) atlas_ = r_atlas(X_, cell_R(), Equivalence::Translation, opt_.parallel);
    return *atlas_;
  }
  std::size_t base_class() {
    const Patch P = extract_patch(X_, X_.point(X_.nearest({}).first), cell_R());
    const auto c = cell_atlas().index.find(P);
    if (!c) throw Error(ErrorCode::InsufficientWindow, "the patch at the origin is not in the atlas window");
    return *c;
  }
  const PatchCells& cells() {
    if (!cells_) cells_ = voronoi_cells_of_patch(X_, cell_atlas(), base_class());
    return *cells_;
  }
  nlohmann::json window_stats() {
    nlohmann::json j = {{"dim", X_.dim()}, {"window_radius", X_.window_radius()}, {"points", X_.size()},
                        {"labeled", X_.has_labels()}};
    if (est_) {
      j["r_hat"] = est_->r_hat;
      j["R_hat"] = est_->R_hat;
      j["R_upper"] = est_->R_upper;
      j["grid_resolution"] = est_->resolution;
    }
    return j;
  }
  std::vector<LocalDerivationRule> rules() {
    std::vector<LocalDerivationRule> out;
    out.push_back(identity_rule(X_, prof_.rule_radius));
    if (X_.has_labels()) out.push_back(label_forgetting_rule(X_, prof_.rule_radius));
    return out;
  }

 private:
  WindowedDeloneSet X_;
  VerifyOptions opt_;
  Profile prof_;
  std::optional<DeloneEstimate> est_;
  std::optional<Vec> period_;
  bool period_checked_ = false;
  std::optional<RepetitivityEstimate> lr_;
  std::optional<Atlas> atlas_;
  std::optional<PatchCells> cells_;
};

void finish_upper(VerificationReport& r, double measured, double bound) {
  r.measured = measured;
  r.bound = bound;
  r.relation = "<=";
  r.passed = measured <= bound;
}

void check_delone_params(Context& C, VerificationReport& r) {
  const auto& X = C.X();
  const DeloneEstimate& e = C.est();
  r.details["r_hat"] = e.r_hat;
  r.details["R_hat"] = e.R_hat;
  r.details["region_radius"] = e.region_radius;
  r.measured = e.R_hat;
  r.passed = true;
  if (auto rd = X.r_declared()) {
    const bool ok = 2.0 * e.r_hat >= 2.0 * *rd - kEta;
    r.details["r_declared"] = *rd;
    r.details["r_ok"] = ok;
    r.passed &= ok;
  }
  if (auto Rd = X.R_declared()) {
    // Relative density on the whole valid region B_{W−R}(0), not just the estimate's inner ball.
    const double rho = X.window_radius() - *Rd;
    if (rho <= 0.0) throw Error(ErrorCode::InsufficientWindow, "window below the declared R");
    const double h = std::max(e.resolution, X.dim() == 1 ? rho / 2.0e6 : rho / 1.0e3);
    const double worst = grid_cover(X.index(), rho, h, C.opt().parallel);
    r.details["R_declared"] = *Rd;
    r.details["cover_on_valid_region"] = worst;
    r.details["valid_region_radius"] = rho;
    r.details["grid_resolution"] = h;
    r.measured = worst;
    r.bound = *Rd + kEta;
    r.passed &= worst <= *Rd + kEta;
  }
  r.scanned_range = {{"region_radius", X.R_declared() ? X.window_radius() - *X.R_declared() : e.region_radius}};
}

void check_return_gap(Context& C, VerificationReport& r) {
  const auto& X = C.X();
  const double L = C.L();
  const auto radii = C.opt().radius ? std::vector<double>{*C.opt().radius} : below(C.profile().gap_radii, X.window_radius() / 4.0);
  if (radii.empty()) throw Error(ErrorCode::InsufficientWindow, "no gap radius below W/4");
  if (auto v = C.period()) throw Error(ErrorCode::PeriodicInput, "X - v = X on the window for a nonzero v");
  double worst = std::numeric_limits<double>::infinity();
  nlohmann::json per = nlohmann::json::array();
  double first_pass = 0.0;
  bool passing = false;
  for (double R : radii) {
    const ReturnGap g = min_return_gap(X, r_atlas(X, R, Equivalence::Translation, C.opt().parallel), C.opt().parallel);
    const double bound = R / (11.0 * L);
    const double ratio = g.gap / bound;
    worst = std::min(worst, ratio);
    per.push_back({{"R", R}, {"gap", std::isfinite(g.gap) ? nlohmann::json(g.gap) : nlohmann::json(nullptr)},
                   {"bound", bound}, {"classes", g.class_count}, {"classes_with_returns", g.classes_with_returns}});
    if (ratio >= 1.0 && !passing) first_pass = R;
    passing = ratio >= 1.0;
  }
  r.parameters["L"] = C.L_source();
  r.details["per_radius"] = per;
  r.scanned_range = {{"radii", radii}};
  if (passing) r.scanned_range["first_passing_R"] = first_pass;
  r.measured = worst;
  r.bound = 1.0;
  r.relation = ">=";
  r.passed = worst >= 1.0;
  r.details["note"] = "measured is min over R of gap / (R / (11 L))";
}

void check_localization(Context& C, VerificationReport& r) {
  const auto& X = C.X();
  const DeloneEstimate& e = C.est();
  const double c4 = 4.0 * e.R_upper, c8 = 8.0 * e.R_upper;
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < X.size(); ++i)
    if (X.ball_inside(X.point(i), c8)) pool.push_back(i);
  if (pool.empty()) throw Error(ErrorCode::InsufficientWindow, "no point has its 8 R_hat ball inside the window");
  std::mt19937_64 rng(C.opt().seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(std::min(pool.size(), C.profile().localization_sites));
  std::sort(pool.begin(), pool.end());
  const auto a = C.opt().parallel ? parallel::voronoi_cells(X, pool, c4) : serial::voronoi_cells(X, pool, c4);
  const auto b = C.opt().parallel ? parallel::voronoi_cells(X, pool, c8) : serial::voronoi_cells(X, pool, c8);
  std::size_t mismatches = 0, diam_bad = 0, ball_bad = 0;
  double max_diam = 0.0, min_in = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < pool.size(); ++k) {
    if (!same_vertices(a[k], b[k], kEta)) ++mismatches;
    max_diam = std::max(max_diam, a[k].diameter());
    min_in = std::min(min_in, a[k].inradius_at_site());
    if (a[k].diameter() > 2.0 * e.R_upper + kEta) ++diam_bad;
    if (a[k].inradius_at_site() < e.r_hat - kEta) ++ball_bad;
  }
  r.parameters = {{"cutoffs", {c4, c8}}, {"sites", pool.size()}, {"seed", C.opt().seed}};
  r.details = {{"vertex_mismatches", mismatches},
               {"max_cell_diameter", max_diam},
               {"diameter_bound", 2.0 * e.R_upper},
               {"diameter_violations", diam_bad},
               {"min_inradius", min_in},
               {"inradius_bound", e.r_hat},
               {"inradius_violations", ball_bad}};
  finish_upper(r, static_cast<double>(mismatches + diam_bad + ball_bad), 0.0);
}

void check_tiling(Context& C, VerificationReport& r) {
  const TilingReport t = tiling_check(C.X(), C.est().R_upper, C.opt().parallel);
  r.parameters = {{"cutoff", 4.0 * C.est().R_upper}, {"tolerance", C.opt().tiling_tolerance}};
  r.details = {{"box_half_side", t.box_half_side}, {"box_measure", t.box_measure},
               {"cell_measure_sum", t.cell_measure_sum}, {"max_pair_overlap", t.max_pair_overlap},
               {"cells", t.cells}};
  finish_upper(r, t.relative_error, C.opt().tiling_tolerance);
  r.passed &= t.max_pair_overlap <= C.opt().tiling_tolerance * t.box_measure;
}

void check_cell_diameter(Context& C, VerificationReport& r, bool ball) {
  const double L = C.L(), R = C.cell_R();
  const PatchCells& pc = C.cells();
  double max_diam = 0.0, min_in = std::numeric_limits<double>::infinity();
  for (const Polytope& c : pc.cells) {
    max_diam = std::max(max_diam, c.diameter());
    min_in = std::min(min_in, c.inradius_at_site());
  }
  r.parameters = {{"R", R}, {"L", C.L_source()}, {"cutoff", pc.cutoff}};
  r.details = {{"cells", pc.cells.size()}, {"sites_covering_radius", pc.sites_covering_radius}};
  if (ball) {
    r.measured = min_in;
    r.bound = R / (11.0 * L);
    r.relation = ">=";
    r.passed = min_in >= *r.bound - kEta;
  } else {
    finish_upper(r, max_diam, 4.0 * L * R + kEta);
  }
}

void check_cell_count(Context& C, VerificationReport& r) {
  const double L = C.L();
  const CellClassSummary s = cell_patch_classes(C.X(), C.cells());
  r.parameters = {{"R", C.cell_R()}, {"L", C.L_source()}};
  r.details = {{"cells", C.cells().cells.size()}};
  finish_upper(r, static_cast<double>(s.classes.size()), std::pow(352.0 * L * L * L, C.d()));
}

void check_extension(Context& C, VerificationReport& r) {
  const double L = C.L();
  const double R1 = C.opt().radius.value_or(C.profile().ext_R1);
  const double R2 = C.opt().radius ? 4.0 * R1 : C.profile().ext_R2;
  const ExtensionCount e = extension_count(C.X(), R1, R2, C.opt().parallel);
  r.parameters = {{"R1", R1}, {"R2", R2}, {"L", C.L_source()}};
  r.details = {{"inner_classes", e.inner_classes}, {"worst_inner", e.worst_inner}};
  finish_upper(r, static_cast<double>(e.max_extensions), std::pow(44.0 * L * L, C.d()) * std::pow(R2 / R1, C.d()));
}

void check_cell_return(Context& C, VerificationReport& r) {
  const double L = C.L();
  const int n = C.profile().cell_n;
  const PatchCells& pc = C.cells();
  const CellClassSummary s = cell_patch_classes(C.X(), pc);
  std::size_t worst = 0;
  bool central = true;
  nlohmann::json per = nlohmann::json::array();
  for (std::size_t j = 0; j < s.representative.size(); ++j) {
    // First copy of the class whose L^n R ball fits.
    std::optional<std::size_t> pick;
    const double need = std::pow(L, n) * C.cell_R();
    for (std::size_t k = 0; k < pc.cells.size() && !pick; ++k)
      if (s.class_of_cell[k] == j && C.X().ball_inside(pc.cells[k].site, need)) pick = k;
    if (!pick) throw Error(ErrorCode::InsufficientWindow, "no copy of a cell class has its L^n R ball inside the window");
    const CellReturnResult res = cell_return_patches(C.X(), pc, *pick, n, L);
    worst = std::max(worst, res.classes.size());
    central &= res.central_ball_agrees;
    per.push_back({{"cell_class", j}, {"return_vectors", res.return_vectors.size()},
                   {"patch_classes", res.classes.size()}, {"central_ball_agrees", res.central_ball_agrees},
                   {"candidates_checked", res.candidates_checked}, {"search_space", res.search_space}});
  }
  r.parameters = {{"R", C.cell_R()}, {"n", n}, {"L", C.L_source()}};
  r.details = {{"per_cell_class", per}, {"central_ball_agrees", central}};
  finish_upper(r, static_cast<double>(worst), std::pow(968.0 * std::pow(L, n + 3), C.d()));
  r.passed &= central;
}

void check_fibers(Context& C, VerificationReport& r) {
  const double L = C.L();
  const auto radii = C.opt().radius ? std::vector<double>{*C.opt().radius} : C.profile().fiber_radii;
  std::size_t worst = 0;
  nlohmann::json per = nlohmann::json::array();
  for (const LocalDerivationRule& rule : C.rules())
    for (double R : radii) {
      const FiberCount f = fiber_class_count(rule, C.X(), R, L, C.opt().parallel);
      worst = std::max(worst, f.count);
      per.push_back({{"rule", rule.name}, {"R", R}, {"count", f.count}, {"image_classes", f.image_classes}});
    }
  r.parameters = {{"radii", radii}, {"rule_radius", C.profile().rule_radius}, {"L", C.L_source()}};
  r.details = {{"per_rule_radius", per}};
  r.scanned_range = {{"radii", radii}};
  finish_upper(r, static_cast<double>(worst), std::pow(55.0 * L * L, C.d()));
}

void check_factor_lr_report(Context& C, VerificationReport& r) {
  const double L = C.L();
  const auto rules = C.rules();
  const LocalDerivationRule& rule = rules.back();  // label forgetting when labeled
  const WindowedDeloneSet Y = apply_rule(rule, C.X(), C.opt().parallel);
  const auto radii = C.opt().radius ? std::vector<double>{*C.opt().radius} : C.profile().factor_radii;
  const FactorLRReport f = check_factor_lr(Y, L, radii, {std::nullopt, C.opt().parallel});
  double largest = 0.0;
  for (const auto& c : f.classes) largest = std::max(largest, c.diameter);
  r.parameters = {{"rule", rule.name}, {"radii", radii}, {"L", C.L_source()}};
  r.details = {{"classes_checked", f.classes.size()}, {"failures", f.failures},
               {"smallest_diameter", f.smallest_diameter}, {"largest_diameter", largest},
               {"resolution", f.resolution}};
  r.scanned_range = {{"radii", radii}};
  if (f.threshold_diameter) r.scanned_range["threshold_diameter"] = *f.threshold_diameter;
  r.measured = f.threshold_diameter.value_or(std::numeric_limits<double>::infinity());
  r.bound = largest;
  r.relation = "<=";
  r.passed = f.passed;
  r.details["note"] = "measured is the empirical threshold diameter; every class at least that wide passes";
}

VerificationReport run_in(Context& C, const std::string& id, bool skip_periodic) {
  VerificationReport r;
  r.check_id = id;
  try {
    if (needs_aperiodic(id) && C.period()) {
      if (skip_periodic) {
        r.skipped = true;
        r.reason = "periodic input: the bound assumes a non-periodic set";
        r.window_stats = C.window_stats();
        return r;
      }
      throw Error(ErrorCode::PeriodicInput, "X - v = X on the window for a nonzero v");
    }
    if (id == "delone-params") check_delone_params(C, r);
    else if (id == "return-gap") check_return_gap(C, r);
    else if (id == "voronoi-localization") check_localization(C, r);
    else if (id == "tiling-area") check_tiling(C, r);
    else if (id == "cell-diameter") check_cell_diameter(C, r, false);
    else if (id == "cell-contained-ball") check_cell_diameter(C, r, true);
    else if (id == "cell-count") check_cell_count(C, r);
    else if (id == "extension-count") check_extension(C, r);
    else if (id == "cell-return-count") check_cell_return(C, r);
    else if (id == "fiber-bound") check_fibers(C, r);
    else if (id == "factor-lr") check_factor_lr_report(C, r);
    else throw Error(ErrorCode::UsageError, "unknown check '" + id + "'");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UsageError) throw;
    r.passed = false;
    r.reason = e.what();
  }
  r.parameters["profile"] = C.profile().name;
  r.window_stats = C.window_stats();
  return r;
}

}  // namespace

VerificationReport run_check(const WindowedDeloneSet& X, const std::string& check_id, const VerifyOptions& opt) {
  Context C(X, opt);
  return run_in(C, check_id, false);
}

std::vector<VerificationReport> verify_all(const WindowedDeloneSet& X, const VerifyOptions& opt) {
  Context C(X, opt);
  std::vector<VerificationReport> out;
  for (const std::string& id : check_ids()) out.push_back(run_in(C, id, true));
  return out;
}

}  // namespace delone
