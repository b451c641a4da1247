#include "delone/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>

#include "delone/atlas.hpp"
#include "delone/derivation.hpp"
#include "delone/error.hpp"
#include "delone/generators.hpp"
#include "delone/io.hpp"
#include "delone/kernels.hpp"
#include "delone/metric.hpp"
#include "delone/repetitivity.hpp"
#include "delone/svg.hpp"
#include "delone/verify.hpp"
#include "delone/voronoi.hpp"

namespace delone {

namespace {

struct Global {
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::string profile = "desk";
  std::string out_dir;
  std::string format = "json";
  bool serial = false;
};

// What a subcommand hands back: the report text and whether a check failed.
struct Outcome {
  std::string text;
  std::string extension = "json";
  bool failed = false;
};

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

void require_json(const Global& g, const char* cmd) {
  if (g.format != "json") throw Error(ErrorCode::UsageError, std::string(cmd) + " only writes JSON reports");
}

Matrix parse_basis(const std::string& text) {
  Matrix m;
  std::stringstream rows(text);
  for (std::string row; std::getline(rows, row, ';');) {
    std::vector<double> r;
    std::stringstream cols(row);
    for (std::string c; std::getline(cols, c, ',');) {
      try {
        r.push_back(std::stod(c));
      } catch (const std::logic_error&) {
        throw Error(ErrorCode::UsageError, "bad basis entry '" + c + "'");
      }
    }
    m.push_back(std::move(r));
  }
  return m;
}

// L̂ over the profile grid, or the user's value.
double resolve_L(const WindowedDeloneSet& X, std::optional<double> L, const Global& g, nlohmann::json& prov) {
  if (L) {
    prov = {{"L", *L}, {"source", "override"}};
    return *L;
  }
  std::vector<double> grid;
  for (double R : profile_for(g.profile, X.dim()).lr_grid)
    if (R < X.window_radius() / 4.0) grid.push_back(R);
  if (grid.empty()) throw Error(ErrorCode::InsufficientWindow, "window too small for the profile's repetitivity grid");
  const auto est = lr_constant(trim_unlabeled_edge(X), grid, {std::nullopt, !g.serial});
  prov = {{"L", est.L_hat}, {"source", "lr_constant"}, {"R_grid", grid}, {"resolution", est.resolution}};
  return est.L_hat;
}

LocalDerivationRule load_rule(const WindowedDeloneSet& X, const std::string& name, double s) {
  if (name == "identity") return identity_rule(X, s);
  if (name == "translated") return translated_rule(X, s);
  if (name == "label-forgetting") return label_forgetting_rule(X, s);
  if (name == "midpoint") return midpoint_rule(X, s);
  return rule_from_json(read_json_file(name), X.dim());
}

nlohmann::json polytope_json(const Polytope& c, int dim) {
  nlohmann::json v = nlohmann::json::array();
  for (const Vec& p : c.vertices) v.push_back(vec_to_json(p, dim));
  return {{"site", vec_to_json(c.site, dim)}, {"vertices", v}, {"diameter", c.diameter()}, {"measure", c.measure()}};
}

// ------------------------------------------------------------------ commands

struct GenerateArgs {
  std::string model = "fibonacci", decorate = "auto", basis = "1", scheme, out;
  double window = 1000.0;
};

Outcome cmd_generate(const GenerateArgs& a, const Global& g) {
  WindowedDeloneSet X;
  std::vector<double> gaps;  // tile lengths for the forward-gap decoration
  if (a.model == "lattice") {
    X = generate_lattice(parse_basis(a.basis), a.window);
  } else if (a.model == "fibonacci" || a.model == "silver" || a.model == "period-two") {
    const SubstitutionRule1D rule =
        a.model == "fibonacci" ? fibonacci_rule() : a.model == "silver" ? silver_rule() : period_two_rule();
    X = generate_substitution_1d(rule, a.window);
    for (char c : rule.alphabet) gaps.push_back(rule.tile_lengths.at(c));
  } else if (a.model == "fibonacci-cp") {
    X = generate_cut_and_project(fibonacci_scheme(), a.window);
    gaps = {(1.0 + std::sqrt(5.0)) / 2.0, 1.0};
  } else if (a.model == "ammann-beenker") {
    X = generate_cut_and_project(ammann_beenker_scheme(), a.window);
  } else if (a.model == "custom") {
    if (a.scheme.empty()) throw Error(ErrorCode::UsageError, "--model custom needs --scheme FILE");
    const nlohmann::json j = read_json_file(a.scheme);
    if (j.contains("rule")) {
      const SubstitutionRule1D rule = substitution_from_json(j);
      X = generate_substitution_1d(rule, a.window);
      for (char c : rule.alphabet) gaps.push_back(rule.tile_lengths.at(c));
    } else {
      X = generate_cut_and_project(scheme_from_json(j), a.window);
    }
  } else {
    throw Error(ErrorCode::UsageError, "unknown model '" + a.model + "'");
  }

  if (a.decorate == "none") {
    X = X.unlabeled();
  } else if (a.decorate == "tiles") {
    if (gaps.empty()) throw Error(ErrorCode::UsageError, "tile decoration needs a 1-D tile model");
    const double s = *std::max_element(gaps.begin(), gaps.end()) + 0.5;
    const WindowedDeloneSet U = X.unlabeled();
    X = decorate(U, forward_gap_decoration(U, s, gaps));
  } else if (a.decorate == "parity") {
    X = index_parity_decoration(X.unlabeled());
  } else if (a.decorate != "auto") {
    throw Error(ErrorCode::UsageError, "unknown decoration '" + a.decorate + "'");
  }

  std::string path = a.out;
  if (path.empty() && !g.out_dir.empty()) path = (std::filesystem::path(g.out_dir) / ("points." + g.format)).string();
  Outcome o;
  if (path.empty()) {
    // No destination: the point set itself is the output.
    o.text = g.format == "csv" ? point_set_to_csv(X) : point_set_to_json(X);
    o.extension = "";
    return o;
  }
  write_point_set(path, X);
  nlohmann::json rep = {{"model", a.model}, {"out", path}, {"points", X.size()}, {"dim", X.dim()},
                        {"window_radius", X.window_radius()}, {"labeled", X.has_labels()}, {"meta", X.meta()}};
  if (auto r = X.r_declared()) rep["r"] = *r;
  if (auto R = X.R_declared()) rep["R"] = *R;
  o.text = dump(rep);
  o.extension = "";
  return o;
}

struct AtlasArgs {
  std::string input, equivalence = "translation";
  double radius = 5.0;
  bool gap = false;
};

Outcome cmd_atlas(const AtlasArgs& a, const Global& g) {
  const WindowedDeloneSet X = trim_unlabeled_edge(read_point_set(a.input));
  Equivalence eq;
  if (a.equivalence == "translation") eq = Equivalence::Translation;
  else if (a.equivalence == "centered") eq = Equivalence::Centered;
  else throw Error(ErrorCode::UsageError, "--equivalence is translation or centered");
  const Atlas A = r_atlas(X, a.radius, eq, !g.serial);
  nlohmann::json rep = atlas_to_json(A, X.dim());
  std::optional<double> gap;
  if (a.gap) {
    const DeloneEstimate e = estimate_delone_params(X, {}, !g.serial);
    const ReturnGap rg = min_return_gap(X, a.radius, e.R_hat, !g.serial);
    gap = rg.gap;
    rep["min_return_gap"] = {{"gap", num(rg.gap)}, {"worst_class", rg.worst_class},
                             {"classes_with_returns", rg.classes_with_returns}};
  }
  Outcome o;
  if (g.format == "csv") {
    o.text = "R,class_count,min_return_gap\n" + format_double(a.radius) + "," + std::to_string(A.size()) + "," +
             (gap ? format_double(*gap) : std::string()) + "\n";
    o.extension = "csv";
  } else {
    o.text = dump(rep);
  }
  return o;
}

struct VoronoiArgs {
  std::string input, svg;
  std::optional<double> patch_radius;
  double svg_half_width = 10.0;
};

Outcome cmd_voronoi(const VoronoiArgs& a, const Global& g) {
  require_json(g, "voronoi");
  const WindowedDeloneSet X = read_point_set(a.input);
  const DeloneEstimate e = estimate_delone_params(X, {}, !g.serial);
  std::vector<Polytope> cells;
  nlohmann::json rep = {{"R_hat", e.R_hat}, {"R_upper", e.R_upper}};
  if (a.patch_radius) {
    const Atlas A = r_atlas(X, *a.patch_radius, Equivalence::Translation, !g.serial);
    const Patch P = extract_patch(X, X.point(X.nearest({}).first), *a.patch_radius);
    const auto c = A.index.find(P);
    if (!c) throw Error(ErrorCode::InsufficientWindow, "the patch at the origin is outside the atlas region");
    const PatchCells pc = voronoi_cells_of_patch(X, A, *c);
    cells = pc.cells;
    rep["patch_radius"] = *a.patch_radius;
    rep["patch_class"] = *c;
    rep["cutoff"] = pc.cutoff;
    rep["sites_covering_radius"] = pc.sites_covering_radius;
  } else {
    const double cutoff = 4.0 * e.R_upper;
    const std::vector<std::size_t> idx = X.interior(cutoff);
    cells = voronoi_cells(X, idx, cutoff, !g.serial);
    rep["cutoff"] = cutoff;
  }
  rep["cells"] = nlohmann::json::array();
  for (const Polytope& c : cells) rep["cells"].push_back(polytope_json(c, X.dim()));
  if (!a.svg.empty()) {
    if (X.dim() != 2) throw Error(ErrorCode::UnsupportedDimension, "SVG output is for d = 2");
    std::vector<Vec> sites;
    for (const Polytope& c : cells) sites.push_back(c.site);
    write_text_file(a.svg, cells_svg(cells, sites, {{}, a.svg_half_width, 800}));
    rep["svg"] = a.svg;
  }
  return {dump(rep)};
}

struct RepetitivityArgs {
  std::string input;
  double rmax = 20.0;
  double grid_step = 1.0;
  std::optional<double> resolution;
};

Outcome cmd_repetitivity(const RepetitivityArgs& a, const Global& g) {
  const WindowedDeloneSet X = trim_unlabeled_edge(read_point_set(a.input));
  if (!(a.grid_step > 0.0)) throw Error(ErrorCode::UsageError, "--grid-step must be positive");
  std::vector<double> grid;
  for (int k = 1; k * a.grid_step <= a.rmax + 1e-12; ++k) grid.push_back(k * a.grid_step);
  if (grid.empty()) throw Error(ErrorCode::UsageError, "--rmax below --grid-step");
  const RepetitivityEstimate est = lr_constant(X, grid, {a.resolution, !g.serial});
  Outcome o;
  if (g.format == "csv") {
    std::ostringstream os;
    os << "R,class_count,M_hat,M_hat_over_R\n";
    for (std::size_t k = 0; k < est.R_grid.size(); ++k)
      os << format_double(est.R_grid[k]) << ',' << est.class_counts[k] << ',' << format_double(est.M_of_R[k]) << ','
         << format_double(est.M_of_R[k] / est.R_grid[k]) << '\n';
    o.text = os.str();
    o.extension = "csv";
    return o;
  }
  nlohmann::json per = nlohmann::json::array();
  for (const ClassRepetitivity& c : est.per_class)
    per.push_back({{"R", c.R}, {"class_id", c.class_id}, {"size", c.size}, {"diameter", c.diameter},
                   {"cover", c.cover}, {"ratio", c.ratio}});
  nlohmann::json rep = {{"R_grid", est.R_grid},     {"M_hat", est.M_of_R},       {"class_counts", est.class_counts},
                        {"L_hat", est.L_hat},       {"resolution", est.resolution}, {"monotone", est.monotone},
                        {"per_class", per}};
  rep["threshold_radius"] = est.threshold_radius ? nlohmann::json(*est.threshold_radius) : nlohmann::json(nullptr);
  o.text = dump(rep);
  return o;
}

struct MetricArgs {
  std::string a, b;
};

Outcome cmd_metric(const MetricArgs& a, const Global& g) {
  const WindowedDeloneSet X = read_point_set(a.a), Y = read_point_set(a.b);
  MetricConfig cfg;
  if (g.tol) cfg.tolerance = *g.tol;
  const MetricResult r = delone_distance(X, Y, cfg);
  Outcome o;
  if (g.format == "csv") {
    o.text = "lower,upper,cap_hit\n" + format_double(r.lower) + "," + format_double(r.upper) + "," +
             (r.cap_hit ? "true" : "false") + "\n";
    o.extension = "csv";
    return o;
  }
  nlohmann::json rep = {{"lower", r.lower},       {"upper", r.upper},       {"cap_hit", r.cap_hit},
                        {"cap", kMetricCap},      {"tolerance", cfg.tolerance}, {"epsilon_min", r.epsilon_min},
                        {"decisions", r.decisions}};
  if (r.witness)
    rep["witness"] = {{"epsilon", r.witness->epsilon}, {"v", vec_to_json(r.witness->v, X.dim())},
                      {"v_prime", vec_to_json(r.witness->v_prime, X.dim())}};
  else
    rep["witness"] = nullptr;
  o.text = dump(rep);
  return o;
}

struct DeriveArgs {
  std::string input, rule = "identity", out, save_rule;
  double rule_radius = 3.0;
};

Outcome cmd_derive(const DeriveArgs& a, const Global& g) {
  require_json(g, "derive");
  const WindowedDeloneSet X = trim_unlabeled_edge(read_point_set(a.input));
  const LocalDerivationRule rule = load_rule(X, a.rule, a.rule_radius);
  const WindowedDeloneSet Y = apply_rule(rule, X, !g.serial);
  if (!a.save_rule.empty()) write_text_file(a.save_rule, dump(rule_to_json(rule)));
  if (a.out.empty()) return {point_set_to_json(Y), ""};
  write_point_set(a.out, Y);
  return {dump({{"rule", rule.name}, {"radius", rule.radius}, {"s0", rule.s0()}, {"table_classes", rule.table.size()},
                {"out", a.out}, {"points", Y.size()}, {"window_radius", Y.window_radius()}})};
}

struct FibersArgs {
  std::string input, rule = "identity";
  double rule_radius = 3.0;
  std::vector<double> radii{5.0};
  std::optional<double> L;
};

Outcome cmd_fibers(const FibersArgs& a, const Global& g) {
  require_json(g, "fibers");
  const WindowedDeloneSet X = trim_unlabeled_edge(read_point_set(a.input));
  nlohmann::json prov;
  const double L = resolve_L(X, a.L, g, prov);
  const LocalDerivationRule rule = load_rule(X, a.rule, a.rule_radius);
  nlohmann::json per = nlohmann::json::array();
  bool within = true;
  for (double R : a.radii) {
    const FiberCount f = fiber_class_count(rule, X, R, L, !g.serial);
    within &= static_cast<double>(f.count) <= f.bound;
    per.push_back({{"R", R}, {"count", f.count}, {"image_classes", f.image_classes}, {"centers", f.centers},
                   {"bound", f.bound}});
  }
  return {dump({{"rule", rule.name}, {"rule_radius", rule.radius}, {"L", prov}, {"fibers", per},
                {"within_bound", within}})};
}

struct HarnessArgs {
  std::string input;
  std::vector<std::string> rules{"identity", "translated"};
  double rule_radius = 3.0;
  int n = 2;
  double radius = 5.0;
  double epsilon = 0.0;
  bool override_n = false;
  std::optional<double> L;
};

Outcome cmd_harness(const HarnessArgs& a, const Global& g) {
  require_json(g, "theorem-harness");
  const WindowedDeloneSet X = trim_unlabeled_edge(read_point_set(a.input));
  nlohmann::json prov;
  const double L = resolve_L(X, a.L, g, prov);
  TheoremHarnessConfig cfg;
  cfg.n = a.n;
  cfg.R = a.radius;
  cfg.epsilon = a.epsilon;
  cfg.L = L;
  cfg.override_n = a.override_n;
  const bool n_ok = n_condition_holds(L, a.n);
  if (!n_ok && !a.override_n)
    throw Error(ErrorCode::InvalidArgument, "n = " + std::to_string(a.n) +
                                                " fails L^n - 1 - 12L - 176L^2 > 1; pass --override-n to run anyway");
  const Family F = build_family_F(X, a.radius, a.n, L, !g.serial);
  std::vector<RelationMatrix> mats;
  nlohmann::json mj = nlohmann::json::array();
  for (const std::string& name : a.rules) {
    const LocalDerivationRule rule = load_rule(X, name, a.rule_radius);
    cfg.rule_ids.push_back(rule.name);
    mats.push_back(relation_Ri(rule, F, X, cfg, !g.serial));
    const RelationMatrix& m = mats.back();
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : m.entries) {
      std::string s;
      for (bool b : row) s += b ? '1' : '0';
      rows.push_back(s);
    }
    mj.push_back({{"rule", rule.name}, {"entries", rows}, {"reflexive", m.reflexive()}, {"R_prime", m.R_prime},
                  {"R_prime_fallback", m.R_prime_fallback}, {"search_radius", m.search_radius},
                  {"occurrences", m.occurrences}, {"Q_sizes", m.Q_sizes}});
  }
  const RelationComparison cmp = compare_relations(mats, F.bound);
  nlohmann::json eq = nlohmann::json::array();
  for (auto [i, j] : cmp.equal_pairs) eq.push_back({mats[i].rule_id, mats[j].rule_id});
  nlohmann::json members = nlohmann::json::array();
  for (const FamilyMember& m : F.members) members.push_back({m.cell_class, m.index, m.family_id});
  nlohmann::json rep = {
      {"exploratory", !n_ok},
      {"n_condition_holds", n_ok},
      {"L", prov},
      {"family",
       {{"R", F.R}, {"n", F.n}, {"patch_radius", F.patch_radius}, {"base", vec_to_json(F.base, X.dim())},
        {"cell_classes", F.cell_classes}, {"cell_return_counts", F.cell_return_counts}, {"size", F.size()},
        {"bound", F.bound}, {"members", members}, {"central_balls_agree", F.central_balls_agree}}},
      {"relations", mj},
      {"equal_pairs", eq},
      {"k", cmp.k},
      {"log10_relations", cmp.log10_relations},
      {"log10_coverings", cmp.log10_coverings}};
  return {dump(rep)};
}

struct VerifyArgs {
  std::string input, check = "all";
  std::optional<double> radius, L;
};

Outcome cmd_verify(const VerifyArgs& a, const Global& g) {
  const WindowedDeloneSet X = read_point_set(a.input);
  VerifyOptions opt;
  opt.profile = g.profile;
  opt.seed = g.seed;
  if (g.tol) opt.tiling_tolerance = *g.tol;
  opt.L = a.L;
  opt.radius = a.radius;
  opt.parallel = !g.serial;
  profile_for(opt.profile, X.dim());  // usage errors before any work
  const std::vector<VerificationReport> reports =
      a.check == "all" ? verify_all(X, opt) : std::vector<VerificationReport>{run_check(X, a.check, opt)};
  Outcome o;
  for (const auto& r : reports) o.failed |= !r.passed && !r.skipped;
  if (g.format == "csv") {
    std::ostringstream os;
    os << "check_id,measured,bound,relation,passed,skipped\n";
    for (const auto& r : reports)
      os << r.check_id << ',' << format_double(r.measured) << ',' << (r.bound ? format_double(*r.bound) : "") << ','
         << r.relation << ',' << (r.passed ? "true" : "false") << ',' << (r.skipped ? "true" : "false") << '\n';
    o.text = os.str();
    o.extension = "csv";
  } else {
    nlohmann::json j = reports_to_json(reports);
    j["profile"] = opt.profile;
    j["seed"] = opt.seed;
    j["input"] = a.input;
    o.text = dump(j);
  }
  return o;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Delone sets of finite type: generation, patch analysis and verification"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--tol", g.tol, "Tolerance: metric bisection width, tiling relative error in verify");
  app.add_option("--profile", g.profile, "Verification profile: smoke, desk or deep")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Also write the report to this directory");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_flag("--serial", g.serial, "Use the serial kernels");
  app.fallthrough();

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Generate a windowed point set");
  gen->add_option("--model", ga.model, "lattice, fibonacci, silver, period-two, fibonacci-cp, ammann-beenker, custom")
      ->capture_default_str();
  gen->add_option("--window", ga.window, "Window radius W")->capture_default_str();
  gen->add_option("--basis", ga.basis, "Lattice basis rows, e.g. \"1,0;0,1\"")->capture_default_str();
  gen->add_option("--scheme", ga.scheme, "Scheme or substitution JSON for --model custom");
  gen->add_option("--decorate", ga.decorate, "auto (generator labels), none, tiles, parity")->capture_default_str();
  gen->add_option("--out", ga.out, "Output file (.json or .csv)");

  AtlasArgs aa;
  auto* atl = app.add_subcommand("atlas", "R-atlas of patch classes");
  atl->add_option("--input", aa.input)->required();
  atl->add_option("--radius", aa.radius)->capture_default_str();
  atl->add_option("--equivalence", aa.equivalence, "translation or centered")->capture_default_str();
  atl->add_flag("--gap", aa.gap, "Also report the minimal return-vector norm");

  VoronoiArgs va;
  auto* vor = app.add_subcommand("voronoi", "Voronoi cells of X or of X_P");
  vor->add_option("--input", va.input)->required();
  vor->add_option("--patch-radius", va.patch_radius, "Cells of X_P for the patch at the origin");
  vor->add_option("--svg", va.svg, "Write an SVG figure (d = 2)");
  vor->add_option("--svg-half-width", va.svg_half_width)->capture_default_str();

  RepetitivityArgs ra;
  auto* rep = app.add_subcommand("repetitivity", "Repetitivity function and linear-repetitivity constant");
  rep->add_option("--input", ra.input)->required();
  rep->add_option("--rmax", ra.rmax)->capture_default_str();
  rep->add_option("--grid-step", ra.grid_step, "Spacing of the R grid")->capture_default_str();
  rep->add_option("--resolution", ra.resolution, "Covering-radius grid step (default r_hat/4)");

  MetricArgs ma;
  auto* met = app.add_subcommand("metric", "Bracket the distance between two sets");
  met->add_option("--a", ma.a)->required();
  met->add_option("--b", ma.b)->required();

  DeriveArgs da;
  auto* der = app.add_subcommand("derive", "Apply a local derivation rule");
  der->add_option("--input", da.input)->required();
  der->add_option("--rule", da.rule, "Rule JSON or preset: identity, translated, label-forgetting, midpoint")
      ->capture_default_str();
  der->add_option("--rule-radius", da.rule_radius, "Radius s for presets")->capture_default_str();
  der->add_option("--out", da.out);
  der->add_option("--save-rule", da.save_rule, "Write the rule table as JSON");

  FibersArgs fa;
  auto* fib = app.add_subcommand("fibers", "Fiber class counts of a factor map");
  fib->add_option("--input", fa.input)->required();
  fib->add_option("--rule", fa.rule)->capture_default_str();
  fib->add_option("--rule-radius", fa.rule_radius)->capture_default_str();
  fib->add_option("--radius", fa.radii, "One or more R")->capture_default_str();
  fib->add_option("--L", fa.L, "Linear-repetitivity constant (default: estimated)");

  HarnessArgs ha;
  auto* har = app.add_subcommand("theorem-harness", "Family F and relation matrices for several rules");
  har->add_option("--input", ha.input)->required();
  har->add_option("--rules", ha.rules, "Rule files or presets")->capture_default_str();
  har->add_option("--rule-radius", ha.rule_radius)->capture_default_str();
  har->add_option("--n", ha.n)->capture_default_str();
  har->add_option("--radius", ha.radius)->capture_default_str();
  har->add_option("--epsilon", ha.epsilon)->capture_default_str();
  har->add_flag("--override-n", ha.override_n, "Run even when n fails the size condition (exploratory)");
  har->add_option("--L", ha.L, "Linear-repetitivity constant (default: estimated)");

  VerifyArgs ya;
  auto* ver = app.add_subcommand("verify", "Run verification checks");
  ver->add_option("--input", ya.input)->required();
  ver->add_option("--check", ya.check, "A check id or all")->capture_default_str();
  ver->add_option("--radius", ya.radius, "Single radius for radius-driven checks");
  ver->add_option("--L", ya.L, "Linear-repetitivity constant (default: estimated)");

  std::vector<std::string> argv_store{"delone"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitError;
  }

  std::string name;
  try {
    Outcome o;
    if (gen->parsed()) name = "generate", o = cmd_generate(ga, g);
    else if (atl->parsed()) name = "atlas", o = cmd_atlas(aa, g);
    else if (vor->parsed()) name = "voronoi", o = cmd_voronoi(va, g);
    else if (rep->parsed()) name = "repetitivity", o = cmd_repetitivity(ra, g);
    else if (met->parsed()) name = "metric", o = cmd_metric(ma, g);
    else if (der->parsed()) name = "derive", o = cmd_derive(da, g);
    else if (fib->parsed()) name = "fibers", o = cmd_fibers(fa, g);
    else if (har->parsed()) name = "theorem-harness", o = cmd_harness(ha, g);
    else name = "verify", o = cmd_verify(ya, g);
    if (!g.out_dir.empty() && !o.extension.empty()) {
      std::filesystem::create_directories(g.out_dir);
      write_text_file((std::filesystem::path(g.out_dir) / (name + "." + o.extension)).string(), o.text);
    }
    out << o.text;
    return o.failed ? kExitCheckFailed : kExitOk;
  } catch (const Error& e) {
    err << name << ": " << e.what() << '\n';
    return kExitError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << name << ": InputError: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace delone
