#include "delone/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "delone/error.hpp"

namespace delone {

namespace {

constexpr double kPhi = std::numbers::phi;

double det2(const Matrix& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

// Dense inverse by Gauss–Jordan with partial pivoting; nullopt when singular.
std::optional<Matrix> invert(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  double scale = 0.0;
  for (const auto& row : a)
    for (double v : row) scale = std::max(scale, std::abs(v));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) <= 1e-12 * std::max(scale, 1.0)) return std::nullopt;
    std::swap(a[piv], a[c]);
    std::swap(inv[piv], inv[c]);
    const double p = a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] /= p;
      inv[c][k] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0.0) continue;
      const double f = a[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

Vec project(const Matrix& P, const std::vector<double>& z) {
  Vec out;
  if (!P.empty()) {
    double s = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) s += P[0][k] * z[k];
    out.x = s;
  }
  if (P.size() > 1) {
    double s = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) s += P[1][k] * z[k];
    out.y = s;
  }
  return out;
}

std::string expand(const SubstitutionRule1D& rule, const std::string& w) {
  std::string out;
  for (char c : w) out += rule.rule.at(c);
  return out;
}

void validate_rule(const SubstitutionRule1D& rule) {
  if (rule.alphabet.empty()) throw Error(ErrorCode::InvalidArgument, "empty alphabet");
  for (char c : rule.alphabet) {
    auto it = rule.rule.find(c);
    if (it == rule.rule.end() || it->second.empty())
      throw Error(ErrorCode::InvalidArgument, std::string("no image for symbol ") + c);
    for (char d : it->second)
      if (rule.alphabet.find(d) == std::string::npos)
        throw Error(ErrorCode::InvalidArgument, std::string("image uses unknown symbol ") + d);
    auto len = rule.tile_lengths.find(c);
    if (len == rule.tile_lengths.end() || !(len->second > 0.0))
      throw Error(ErrorCode::InvalidArgument, std::string("tile length must be positive for ") + c);
  }
}

}  // namespace

// ------------------------------------------------------------------ lattices

std::pair<double, double> lattice_delone_constants(const Matrix& basis) {
  if (basis.size() == 1) {
    const double a = std::abs(basis[0][0]);
    return {a / 2.0, a / 2.0};
  }
  Vec u{basis[0][0], basis[0][1]}, v{basis[1][0], basis[1][1]};
  // Lagrange–Gauss reduction.
  for (;;) {
    if (norm2(u) > norm2(v)) std::swap(u, v);
    const double mu = std::round(dot(u, v) / norm2(u));
    if (mu == 0.0) break;
    v = v - mu * u;
  }
  if (dot(u, v) < 0.0) v = -v;
  // Reduced and non-obtuse: the covering radius is the circumradius of (0, u, v).
  const double area = std::abs(cross(u, v)) / 2.0;
  const double R = norm(u) * norm(v) * dist(u, v) / (4.0 * area);
  return {norm(u) / 2.0, R};
}

WindowedDeloneSet generate_lattice(const Matrix& basis, double W) {
  const std::size_t d = basis.size();
  if (d != 1 && d != 2) throw Error(ErrorCode::UnsupportedDimension, "lattice dimension must be 1 or 2");
  for (const auto& row : basis)
    if (row.size() != d) throw Error(ErrorCode::InvalidArgument, "basis must be square");
  const double det = d == 1 ? basis[0][0] : det2(basis);
  double scale = 0.0;
  for (const auto& row : basis)
    for (double v : row) scale = std::max(scale, std::abs(v));
  if (std::abs(det) <= 1e-12 * std::max(scale * scale, 1.0)) throw Error(ErrorCode::SingularBasis, "basis is singular");

  std::vector<Vec> pts;
  if (d == 1) {
    const double a = std::abs(basis[0][0]);
    const auto m = static_cast<std::int64_t>(std::floor(W / a + 1e-12));
    for (std::int64_t k = -m; k <= m; ++k) pts.push_back({static_cast<double>(k) * a, 0.0});
  } else {
    // Coefficient bounds from the rows of the inverse.
    const auto inv = *invert({{basis[0][0], basis[1][0]}, {basis[0][1], basis[1][1]}});
    const double b0 = std::hypot(inv[0][0], inv[0][1]) * W;
    const double b1 = std::hypot(inv[1][0], inv[1][1]) * W;
    const auto m0 = static_cast<std::int64_t>(std::ceil(b0));
    const auto m1 = static_cast<std::int64_t>(std::ceil(b1));
    for (std::int64_t i = -m0; i <= m0; ++i)
      for (std::int64_t j = -m1; j <= m1; ++j) {
        const Vec p{static_cast<double>(i) * basis[0][0] + static_cast<double>(j) * basis[1][0],
                    static_cast<double>(i) * basis[0][1] + static_cast<double>(j) * basis[1][1]};
        if (norm(p) <= W) pts.push_back(p);
      }
  }
  const auto [r, R] = lattice_delone_constants(basis);
  WindowedDeloneSet::Options opt;
  opt.r_declared = r;
  opt.R_declared = R;
  opt.meta = {{"model", "lattice"}, {"basis", basis}, {"periodic", true}};
  return WindowedDeloneSet::build(std::move(pts), static_cast<int>(d), W, std::move(opt));
}

// -------------------------------------------------------------- substitution

SubstitutionRule1D fibonacci_rule() {
  return {"fibonacci", "ab", {{'a', "ab"}, {'b', "a"}}, {{'a', kPhi}, {'b', 1.0}}, 'a'};
}

SubstitutionRule1D period_two_rule() {
  return {"period-2", "ab", {{'a', "ab"}, {'b', "ab"}}, {{'a', 1.0}, {'b', 1.0}}, 'a'};
}

SubstitutionRule1D silver_rule() {
  return {"silver", "ab", {{'a', "aab"}, {'b', "a"}}, {{'a', 1.0 + std::numbers::sqrt2}, {'b', 1.0}}, 'a'};
}

bool is_primitive(const SubstitutionRule1D& rule) {
  validate_rule(rule);
  const std::size_t n = rule.alphabet.size();
  // M[i][j]: symbol i occurs in σ(symbol j).
  std::vector<std::vector<bool>> M(n, std::vector<bool>(n, false));
  for (std::size_t j = 0; j < n; ++j)
    for (char c : rule.rule.at(rule.alphabet[j])) M[rule.alphabet.find(c)][j] = true;
  auto P = M;
  const std::size_t bound = (n - 1) * (n - 1) + 1;  // Wielandt
  for (std::size_t k = 1; k <= bound; ++k) {
    bool positive = true;
    for (const auto& row : P)
      for (bool b : row) positive = positive && b;
    if (positive) return true;
    std::vector<std::vector<bool>> Q(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t t = 0; t < n && !Q[i][j]; ++t) Q[i][j] = P[i][t] && M[t][j];
    P = std::move(Q);
  }
  return false;
}

TwoSidedSeed find_two_sided_seed(const SubstitutionRule1D& rule) {
  if (!is_primitive(rule)) throw Error(ErrorCode::NonPrimitiveRule, "substitution '" + rule.name + "' is not primitive");
  // Legal two-letter words: those occurring in some iterate of a single symbol.
  std::string word(1, rule.alphabet.front());
  while (word.size() < 4096) word = expand(rule, word);
  const std::size_t n = rule.alphabet.size();
  const int max_power = static_cast<int>(2 * n * n + 2);
  for (char l : rule.alphabet)
    for (char r : rule.alphabet) {
      if (word.find(std::string{l, r}) == std::string::npos) continue;
      std::string wl(1, l), wr(1, r);
      for (int p = 1; p <= max_power; ++p) {
        wl = expand(rule, wl);
        wr = expand(rule, wr);
        if (wl.back() == l && wr.front() == r) return {l, r, p};
      }
    }
  throw Error(ErrorCode::NonPrimitiveRule, "no legal seed pair with a fixed power");
}

WindowedDeloneSet generate_substitution_1d(const SubstitutionRule1D& rule, double W) {
  if (!(W > 0.0)) throw Error(ErrorCode::InvalidArgument, "window radius must be positive");
  const TwoSidedSeed seed = find_two_sided_seed(rule);
  auto length = [&](const std::string& w) {
    double s = 0.0;
    for (char c : w) s += rule.tile_lengths.at(c);
    return s;
  };
  std::string left(1, seed.left), right(1, seed.right);
  while (length(left) < W + 1.0 || length(right) < W + 1.0) {
    for (int p = 0; p < seed.power; ++p) {
      left = expand(rule, left);
      right = expand(rule, right);
    }
  }
  std::vector<Vec> pts;
  std::vector<int> labels;
  // Right half: 0, |w0|, |w0 w1|, ... with label = tile to the right.
  double x = 0.0;
  for (char c : right) {
    if (x > W) break;
    pts.push_back({x, 0.0});
    labels.push_back(static_cast<int>(rule.alphabet.find(c)));
    x += rule.tile_lengths.at(c);
  }
  labels.back() = kNoLabel;
  x = 0.0;
  for (auto it = left.rbegin(); it != left.rend(); ++it) {
    x -= rule.tile_lengths.at(*it);
    if (x < -W) break;
    pts.push_back({x, 0.0});
    labels.push_back(static_cast<int>(rule.alphabet.find(*it)));
  }
  double lmin = 1e300, lmax = 0.0;
  for (char c : rule.alphabet) {
    lmin = std::min(lmin, rule.tile_lengths.at(c));
    lmax = std::max(lmax, rule.tile_lengths.at(c));
  }
  WindowedDeloneSet::Options opt;
  opt.labels = std::move(labels);
  opt.r_declared = lmin / 2.0;
  opt.R_declared = lmax / 2.0;
  nlohmann::json rj = nlohmann::json::object();
  for (const auto& [k, v] : rule.rule) rj[std::string(1, k)] = v;
  nlohmann::json lj = nlohmann::json::object();
  for (const auto& [k, v] : rule.tile_lengths) lj[std::string(1, k)] = v;
  opt.meta = {{"model", rule.name.empty() ? "substitution" : rule.name},
              {"alphabet", rule.alphabet},
              {"rule", rj},
              {"tile_lengths", lj},
              {"seed", std::string{seed.left, '|', seed.right}},
              {"seed_power", seed.power}};
  return WindowedDeloneSet::build(std::move(pts), 1, W, std::move(opt));
}

WindowedDeloneSet trim_unlabeled_edge(const WindowedDeloneSet& X) {
  if (!X.has_labels()) return X;
  double w = X.window_radius();
  for (std::size_t i = 0; i < X.size(); ++i)
    if (X.label(i) == kNoLabel) w = std::min(w, norm(X.point(i)) - 1e-6);
  if (w == X.window_radius()) return X;
  if (!(w > 0.0)) throw Error(ErrorCode::InsufficientWindow, "unlabeled point at the origin");
  return X.restricted(w);
}

// ------------------------------------------------------------ cut-and-project

std::vector<HalfSpace> zonotope_window(const std::vector<Vec>& generators, Vec shift) {
  std::vector<HalfSpace> out;
  for (const Vec& g : generators) {
    const double len = norm(g);
    if (len == 0.0) continue;
    const Vec n{-g.y / len, g.x / len};
    double c = 0.0;
    for (const Vec& h : generators) c += 0.5 * std::abs(dot(n, h));
    out.push_back({n, c + dot(n, shift)});
    out.push_back({-n, c - dot(n, shift)});
  }
  return out;
}

std::vector<HalfSpace> interval_window(double lo, double hi) {
  return {{{1.0, 0.0}, hi}, {{-1.0, 0.0}, -lo}};
}

CutAndProjectScheme fibonacci_scheme() {
  CutAndProjectScheme s;
  s.name = "fibonacci-cp";
  s.total_dim = 2;
  s.physical_dim = 1;
  s.lattice_basis = {{1.0, 0.0}, {0.0, 1.0}};
  s.physical_projection = {{kPhi, 1.0}};
  s.internal_projection = {{-1.0 / kPhi, 1.0}};
  // Window of length φ (tiles of lengths φ and 1), shifted off the singular position.
  const double shift = 0.0414213562373095;
  s.window = interval_window(-kPhi / 2.0 + shift, kPhi / 2.0 + shift);
  s.r_declared = 0.5;
  s.R_declared = kPhi / 2.0;
  return s;
}

CutAndProjectScheme ammann_beenker_scheme() {
  CutAndProjectScheme s;
  s.name = "ammann-beenker";
  s.total_dim = 4;
  s.physical_dim = 2;
  s.lattice_basis = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  s.physical_projection.assign(2, std::vector<double>(4));
  s.internal_projection.assign(2, std::vector<double>(4));
  std::vector<Vec> gens;
  for (int k = 0; k < 4; ++k) {
    const double a = k * std::numbers::pi / 4.0;
    const double b = 3.0 * k * std::numbers::pi / 4.0;
    s.physical_projection[0][k] = std::cos(a);
    s.physical_projection[1][k] = std::sin(a);
    s.internal_projection[0][k] = std::cos(b);
    s.internal_projection[1][k] = std::sin(b);
    gens.push_back({std::cos(b), std::sin(b)});
  }
  // Regular octagon of edge 1 (projection of the unit 4-cube), generic shift.
  s.window = zonotope_window(gens, {0.0123456789, 0.0271828183});
  s.r_declared = std::sin(std::numbers::pi / 8.0);  // short rhombus diagonal / 2
  s.R_declared = std::numbers::sqrt2 / 2.0;           // square tile half-diagonal
  return s;
}

WindowedDeloneSet generate_cut_and_project(const CutAndProjectScheme& s, double W, double max_box) {
  const int N = s.total_dim, d = s.physical_dim, k = N - d;
  if (d != 1 && d != 2) throw Error(ErrorCode::UnsupportedDimension, "physical dimension must be 1 or 2");
  if (k < 1 || k > 2) throw Error(ErrorCode::InvalidArgument, "internal dimension must be 1 or 2");
  auto check_shape = [](const Matrix& m, std::size_t rows, std::size_t cols, const char* what) {
    bool ok = m.size() == rows;
    for (const auto& r : m) ok = ok && r.size() == cols;
    if (!ok) throw Error(ErrorCode::InvalidArgument, std::string("malformed ") + what);
  };
  const auto uN = static_cast<std::size_t>(N);
  check_shape(s.lattice_basis, uN, uN, "lattice basis");
  check_shape(s.physical_projection, static_cast<std::size_t>(d), uN, "physical projection");
  check_shape(s.internal_projection, static_cast<std::size_t>(k), uN, "internal projection");
  if (s.window.empty()) throw Error(ErrorCode::EmptySet, "acceptance window has no constraints");

  // Bound the window: vertices of the halfspace polytope (k ≤ 2).
  double rho_window = 0.0;
  if (k == 1) {
    double lo = -1e300, hi = 1e300;
    for (const HalfSpace& h : s.window) {
      if (h.normal.x > 0) hi = std::min(hi, h.offset / h.normal.x);
      else if (h.normal.x < 0) lo = std::max(lo, h.offset / h.normal.x);
    }
    if (!(hi - lo > 2.0 * kEta)) throw Error(ErrorCode::EmptySet, "acceptance window is empty");
    if (hi > 1e299 || lo < -1e299) throw Error(ErrorCode::InvalidArgument, "acceptance window is unbounded");
    rho_window = std::max(std::abs(lo), std::abs(hi));
  } else {
    bool any = false;
    for (std::size_t a = 0; a < s.window.size(); ++a)
      for (std::size_t b = a + 1; b < s.window.size(); ++b) {
        const Vec n1 = s.window[a].normal, n2 = s.window[b].normal;
        const double det = cross(n1, n2);
        if (std::abs(det) < 1e-14) continue;
        const Vec v{(s.window[a].offset * n2.y - s.window[b].offset * n1.y) / det,
                    (n1.x * s.window[b].offset - n2.x * s.window[a].offset) / det};
        bool inside = true;
        for (const HalfSpace& h : s.window) inside = inside && dot(h.normal, v) <= h.offset + 1e-12;
        if (inside) {
          any = true;
          rho_window = std::max(rho_window, norm(v));
        }
      }
    if (!any) throw Error(ErrorCode::EmptySet, "acceptance window is empty or unbounded");
  }

  // Joint map z -> (physical, internal) composed with the basis: m -> y.
  Matrix A(uN, std::vector<double>(uN, 0.0));
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) {
      const auto& proj = r < d ? s.physical_projection[static_cast<std::size_t>(r)]
                               : s.internal_projection[static_cast<std::size_t>(r - d)];
      double v = 0.0;
      for (int t = 0; t < N; ++t) v += proj[static_cast<std::size_t>(t)] * s.lattice_basis[static_cast<std::size_t>(c)][static_cast<std::size_t>(t)];
      A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = v;
    }
  const auto Ainv = invert(A);
  if (!Ainv) throw Error(ErrorCode::SingularBasis, "projections are not complementary on the lattice");
  const double rho = std::hypot(W, rho_window);
  std::vector<std::int64_t> bound(uN);
  double box = 1.0;
  for (std::size_t i = 0; i < uN; ++i) {
    double rn = 0.0;
    for (double v : (*Ainv)[i]) rn += v * v;
    bound[i] = static_cast<std::int64_t>(std::ceil(std::sqrt(rn) * rho)) + 1;
    if (i + 1 < uN) box *= static_cast<double>(2 * bound[i] + 1);
  }
  if (box > max_box) {
    std::ostringstream os;
    os << "lattice box of " << box << " cells exceeds the limit " << max_box;
    throw Error(ErrorCode::InfeasibleEnumeration, os.str());
  }

  auto col = [&](std::size_t c) {
    std::vector<double> z(uN);
    for (std::size_t t = 0; t < uN; ++t) z[t] = s.lattice_basis[c][t];
    return z;
  };
  const std::vector<double> last = col(uN - 1);
  const Vec phys_last = project(s.physical_projection, last);
  const Vec int_last = project(s.internal_projection, last);

  std::vector<Vec> pts;
  std::size_t boundary_rejects = 0;
  std::vector<std::int64_t> m(uN - 1);
  for (std::size_t i = 0; i + 1 < uN; ++i) m[i] = -bound[i];
  std::vector<double> z0(uN);
  for (;;) {
    std::fill(z0.begin(), z0.end(), 0.0);
    for (std::size_t i = 0; i + 1 < uN; ++i)
      for (std::size_t t = 0; t < uN; ++t) z0[t] += static_cast<double>(m[i]) * s.lattice_basis[i][t];
    const Vec p0 = project(s.physical_projection, z0);
    const Vec q0 = project(s.internal_projection, z0);
    // Interval of t with ||p0 + t·phys_last|| ≤ W and q0 + t·int_last inside the window.
    double lo = -static_cast<double>(bound[uN - 1]), hi = static_cast<double>(bound[uN - 1]);
    const double a = norm2(phys_last), b = dot(p0, phys_last), c = norm2(p0) - W * W;
    bool feasible = true;
    if (a > 0.0) {
      const double disc = b * b - a * c;
      if (disc < 0.0) feasible = false;
      else {
        const double sq = std::sqrt(disc);
        lo = std::max(lo, (-b - sq) / a - 1e-9);
        hi = std::min(hi, (-b + sq) / a + 1e-9);
      }
    } else if (c > 0.0) {
      feasible = false;
    }
    for (const HalfSpace& h : s.window) {
      if (!feasible) break;
      const double slope = dot(h.normal, int_last), rest = h.offset - dot(h.normal, q0);
      if (slope > 1e-15) hi = std::min(hi, rest / slope + 1e-9);
      else if (slope < -1e-15) lo = std::max(lo, rest / slope - 1e-9);
      else if (rest < -1e-9) feasible = false;
    }
    if (feasible) {
      for (auto t = static_cast<std::int64_t>(std::ceil(lo)); static_cast<double>(t) <= hi; ++t) {
        const double tt = static_cast<double>(t);
        const Vec p = p0 + tt * phys_last;
        if (norm(p) > W) continue;
        const Vec q = q0 + tt * int_last;
        bool inside = true, on_boundary = false;
        for (const HalfSpace& h : s.window) {
          const double slack = (h.offset - dot(h.normal, q)) / norm(h.normal);
          if (std::abs(slack) <= kEta) on_boundary = true;
          else if (slack < 0.0) inside = false;
        }
        if (!inside) continue;
        if (on_boundary) {
          ++boundary_rejects;
          continue;
        }
        pts.push_back(p);
      }
    }
    // Odometer over the first N−1 coefficients.
    std::size_t i = 0;
    while (i + 1 < uN && ++m[i] > bound[i]) {
      m[i] = -bound[i];
      ++i;
    }
    if (i + 1 == uN) break;
  }
  WindowedDeloneSet::Options opt;
  opt.r_declared = s.r_declared;
  opt.R_declared = s.R_declared;
  opt.meta = {{"model", s.name.empty() ? "cut-and-project" : s.name}, {"scheme", scheme_to_json(s)}};
  opt.meta["boundary_rejects"] = boundary_rejects;
  if (boundary_rejects > 0)
    opt.meta["warnings"] = {std::to_string(boundary_rejects) + " lattice points within eta of the acceptance boundary were rejected"};
  return WindowedDeloneSet::build(std::move(pts), d, W, std::move(opt));
}

nlohmann::json scheme_to_json(const CutAndProjectScheme& s) {
  nlohmann::json win = nlohmann::json::array();
  for (const HalfSpace& h : s.window) {
    if (s.total_dim - s.physical_dim == 1) win.push_back({{"normal", {h.normal.x}}, {"offset", h.offset}});
    else win.push_back({{"normal", {h.normal.x, h.normal.y}}, {"offset", h.offset}});
  }
  nlohmann::json j = {{"name", s.name},
                      {"total_dim", s.total_dim},
                      {"physical_dim", s.physical_dim},
                      {"lattice_basis", s.lattice_basis},
                      {"physical_projection", s.physical_projection},
                      {"internal_projection", s.internal_projection},
                      {"window", win}};
  if (s.r_declared) j["r"] = *s.r_declared;
  if (s.R_declared) j["R"] = *s.R_declared;
  return j;
}

CutAndProjectScheme scheme_from_json(const nlohmann::json& j) {
  try {
    CutAndProjectScheme s;
    s.name = j.value("name", "custom");
    s.total_dim = j.at("total_dim").get<int>();
    s.physical_dim = j.at("physical_dim").get<int>();
    s.lattice_basis = j.at("lattice_basis").get<Matrix>();
    s.physical_projection = j.at("physical_projection").get<Matrix>();
    s.internal_projection = j.at("internal_projection").get<Matrix>();
    for (const auto& h : j.at("window")) {
      const auto n = h.at("normal").get<std::vector<double>>();
      if (n.empty() || n.size() > 2) throw Error(ErrorCode::InputError, "window normal must have 1 or 2 entries");
      s.window.push_back({{n[0], n.size() > 1 ? n[1] : 0.0}, h.at("offset").get<double>()});
    }
    if (j.contains("r")) s.r_declared = j.at("r").get<double>();
    if (j.contains("R")) s.R_declared = j.at("R").get<double>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InputError, std::string("scheme JSON: ") + e.what());
  }
}

SubstitutionRule1D substitution_from_json(const nlohmann::json& j) {
  try {
    SubstitutionRule1D r;
    r.name = j.value("name", "custom");
    r.alphabet = j.at("alphabet").get<std::string>();
    for (const auto& [k, v] : j.at("rule").items()) {
      if (k.size() != 1) throw Error(ErrorCode::InputError, "substitution symbols must be single characters");
      r.rule[k[0]] = v.get<std::string>();
    }
    for (const auto& [k, v] : j.at("tile_lengths").items()) {
      if (k.size() != 1) throw Error(ErrorCode::InputError, "substitution symbols must be single characters");
      r.tile_lengths[k[0]] = v.get<double>();
    }
    r.seed_symbol = r.alphabet.empty() ? 0 : r.alphabet.front();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InputError, std::string("substitution JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------- decoration

DecorationRule make_decoration(const WindowedDeloneSet& X, double s,
                               const std::function<int(const Patch&)>& label_of) {
  DecorationRule rule;
  rule.radius = s;
  const WindowedDeloneSet plain = X.unlabeled();
  for (std::size_t k : plain.interior(s)) {
    const Patch p = extract_patch_unchecked(plain, plain.point(k), s);
    const std::size_t before = rule.classes.size();
    const std::size_t id = rule.classes.add(p);
    if (id == before) rule.labels.push_back(label_of(p));
  }
  return rule;
}

DecorationRule forward_gap_decoration(const WindowedDeloneSet& X, double s, const std::vector<double>& gaps,
                                      double tol) {
  if (X.dim() != 1) throw Error(ErrorCode::UnsupportedDimension, "forward-gap decoration is one-dimensional");
  double gmax = 0.0;
  for (double g : gaps) gmax = std::max(gmax, g);
  if (s <= gmax) throw Error(ErrorCode::InvalidArgument, "decoration radius must exceed the largest gap");
  return make_decoration(X, s, [&](const Patch& p) {
    double next = 1e300;
    for (const Vec& o : p.offsets)
      if (o.x > kEta) next = std::min(next, o.x);
    for (std::size_t k = 0; k < gaps.size(); ++k)
      if (std::abs(next - gaps[k]) <= tol) return static_cast<int>(k);
    return kNoLabel;
  });
}

WindowedDeloneSet index_parity_decoration(const WindowedDeloneSet& X) {
  if (X.dim() != 1) throw Error(ErrorCode::UnsupportedDimension, "index parity decoration is one-dimensional");
  if (X.empty()) throw Error(ErrorCode::EmptySet, "nothing to decorate");
  const std::size_t k0 = X.nearest({}).first;
  WindowedDeloneSet::Options opt;
  opt.labels.reserve(X.size());
  for (std::size_t k = 0; k < X.size(); ++k) opt.labels.push_back(static_cast<int>((k > k0 ? k - k0 : k0 - k) % 2));
  opt.r_declared = X.r_declared();
  opt.R_declared = X.R_declared();
  opt.meta = X.meta();
  opt.meta["decoration"] = "index-parity";
  return WindowedDeloneSet::build(std::vector<Vec>(X.points().begin(), X.points().end()), 1, X.window_radius(),
                                  std::move(opt));
}

WindowedDeloneSet decorate(const WindowedDeloneSet& X, const DecorationRule& rule) {
  const double W2 = X.window_radius() - rule.radius;
  if (W2 <= 0.0) throw Error(ErrorCode::InsufficientWindow, "decoration radius exceeds the window");
  const WindowedDeloneSet plain = X.unlabeled();
  std::vector<Vec> pts;
  WindowedDeloneSet::Options opt;
  for (std::size_t k : plain.interior(rule.radius)) {
    const Patch p = extract_patch_unchecked(plain, plain.point(k), rule.radius);
    const auto id = rule.classes.find(p);
    if (!id) {
      std::ostringstream os;
      os.precision(17);
      os << "no label for the " << rule.radius << "-patch at " << p.center.x;
      if (X.dim() == 2) os << ", " << p.center.y;
      os << " (offsets:";
      for (const Vec& o : p.offsets) {
        os << " (" << o.x;
        if (X.dim() == 2) os << ", " << o.y;
        os << ")";
      }
      os << ")";
      throw Error(ErrorCode::UnknownPatchClass, os.str());
    }
    pts.push_back(plain.point(k));
    opt.labels.push_back(rule.labels[*id]);
  }
  opt.r_declared = X.r_declared();
  opt.R_declared = X.R_declared();
  opt.meta = X.meta();
  opt.meta["decoration_radius"] = rule.radius;
  return WindowedDeloneSet::build(std::move(pts), X.dim(), W2, std::move(opt));
}

}  // namespace delone
