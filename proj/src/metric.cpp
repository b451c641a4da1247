#include "delone/metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "delone/error.hpp"

namespace delone {

namespace {

// Distance slack for "z is outside the open ball B_{1/ε}(v′)".
constexpr double kBoundarySlack = 1e-12;

struct Disk {
  Vec c;
  double r;
};

// Points where two circles meet (0, 1 or 2 of them).
void circle_meets(const Disk& a, const Disk& b, std::vector<Vec>& out) {
  const Vec d = b.c - a.c;
  const double L = norm(d);
  if (L <= 0.0 || L > a.r + b.r || L < std::abs(a.r - b.r)) return;
  const double x = (L * L + a.r * a.r - b.r * b.r) / (2.0 * L);
  const double h = std::sqrt(std::max(0.0, a.r * a.r - x * x));
  const Vec u = (1.0 / L) * d;
  const Vec m = a.c + x * u;
  out.push_back(m + h * Vec{-u.y, u.x});
  out.push_back(m - h * Vec{-u.y, u.x});
}

bool clear_of(Vec p, const std::vector<Vec>& Z, double rad) {
  for (const Vec& z : Z)
    if (dist(z, p) < rad - kBoundarySlack * std::max(1.0, rad)) return false;
  return true;
}

// A point v′ in the open lens B_ε(0) ∩ B_ε(−t) outside every open ball B_{1/ε}(z).
std::optional<Vec> free_point(int dim, double eps, Vec t, const std::vector<Vec>& Z) {
  const double rad = 1.0 / eps;
  if (dim == 1) {
    const double lo = std::max(-eps, -eps - t.x), hi = std::min(eps, eps - t.x);
    if (!(lo < hi)) return std::nullopt;
    std::vector<double> cut{lo, hi};
    for (const Vec& z : Z)
      for (double b : {z.x - rad, z.x + rad})
        if (b > lo && b < hi) cut.push_back(b);
    std::sort(cut.begin(), cut.end());
    std::vector<double> cand;
    for (std::size_t k = 0; k + 1 < cut.size(); ++k) cand.push_back(0.5 * (cut[k] + cut[k + 1]));
    cand.insert(cand.end(), cut.begin() + 2, cut.end());
    for (double c : cand)
      if (c > lo && c < hi && clear_of({c, 0.0}, Z, rad)) return Vec{c, 0.0};
    return std::nullopt;
  }
  // d = 2: the free region, if nonempty, has a point among these candidates.
  const double shrink = eps * (1.0 - 1e-9);
  const Disk A{{0.0, 0.0}, shrink}, B{-t, shrink};
  if (norm(t) >= 2.0 * shrink) return std::nullopt;
  std::vector<Vec> cand{0.5 * (A.c + B.c), A.c, B.c};
  circle_meets(A, B, cand);
  std::vector<Disk> forb;
  for (const Vec& z : Z) forb.push_back({z, rad});
  for (const Disk& f : forb) {
    for (const Disk* l : {&A, &B}) {
      circle_meets(*l, f, cand);
      const Vec away = l->c - f.c;
      const double na = norm(away);
      if (na > 0.0) cand.push_back(l->c + (l->r / na) * away);
    }
  }
  for (std::size_t i = 0; i < forb.size(); ++i)
    for (std::size_t j = i + 1; j < forb.size(); ++j) circle_meets(forb[i], forb[j], cand);
  for (const Vec& p : cand)
    if (norm(p - A.c) <= A.r && norm(p - B.c) <= B.r && clear_of(p, Z, rad)) return p;
  return std::nullopt;
}

}  // namespace

std::optional<MetricWitness> metric_match(const WindowedDeloneSet& X, const WindowedDeloneSet& Y, double eps) {
  if (X.dim() != Y.dim()) throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
  if (!(eps > 0.0 && eps < kMetricCap)) throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1/sqrt 2)");
  const double rad = 1.0 / eps;
  const double reach = rad + eps;
  const double W = std::min(X.window_radius(), Y.window_radius());
  if (reach > W + kEta) {
    std::ostringstream os;
    os << "epsilon " << eps << " needs windows of radius " << reach << " (have " << W << ")";
    throw Error(ErrorCode::InsufficientWindow, os.str());
  }
  const auto xs = X.in_ball({}, reach, true);
  const auto ys = Y.in_ball({}, reach, true);

  // Translations t = v − v′ with |t| < 2ε, pinned by a point of Y that every
  // admissible ball B_{1/ε}(v′) must contain.
  std::vector<Vec> ts;
  PointHash seen_t(X.dim());
  auto collect = [&](Vec y) {
    for (std::size_t i : X.in_ball(y, 2.0 * eps, true)) {
      const Vec t = X.point(i) - y;
      if (seen_t.insert(t).second) ts.push_back(t);
    }
  };
  if (!ys.empty()) {
    const auto [j0, d0] = Y.nearest({});
    if (d0 + eps < rad) {
      collect(Y.point(j0));
    } else {
      for (std::size_t j : ys) collect(Y.point(j));
    }
  } else if (xs.empty()) {
    ts.push_back({});
  } else {
    // Y has no point near the origin; X must avoid the ball too.
    ts.push_back({});
    for (std::size_t i : xs)
      if (seen_t.insert(X.point(i)).second) ts.push_back(X.point(i));
  }
  std::sort(ts.begin(), ts.end(), [](Vec a, Vec b) { return norm(a) < norm(b) || (norm(a) == norm(b) && lex_less(a, b)); });

  std::vector<Vec> Z;
  for (const Vec& t : ts) {
    if (norm(t) >= 2.0 * eps) continue;
    Z.clear();
    bool dead = false;
    // A mismatch with |z| + ε <= 1/ε sits inside every admissible ball.
    auto add = [&](Vec z) {
      if (norm(z) + eps <= rad) dead = true;
      Z.push_back(z);
    };
    for (std::size_t i : X.in_ball(t, reach, true)) {
      const Vec z = X.point(i) - t;
      if (norm(z) >= reach) continue;
      if (!Y.find(z)) add(z);
      if (dead) break;
    }
    if (dead) continue;
    for (std::size_t j : ys) {
      const Vec z = Y.point(j);
      if (!X.find(z + t)) add(z);
      if (dead) break;
    }
    if (dead) continue;
    if (auto vp = free_point(X.dim(), eps, t, Z)) return MetricWitness{eps, t + *vp, *vp};
  }
  return std::nullopt;
}

MetricResult delone_distance(const WindowedDeloneSet& X, const WindowedDeloneSet& Y, const MetricConfig& cfg) {
  if (!(cfg.tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  MetricResult out;
  const double W = std::min(X.window_radius(), Y.window_radius());
  if (W < 2.0) throw Error(ErrorCode::InsufficientWindow, "windows below radius 2 decide no epsilon");
  // Root of ε + 1/ε = W in the cancellation-free form.
  out.epsilon_min = 2.0 / (W + std::sqrt(W * W - 4.0)) * (1.0 + 1e-12);
  const double top = kMetricCap * (1.0 - 1e-9);
  if (out.epsilon_min >= top) throw Error(ErrorCode::InsufficientWindow, "windows too small for any epsilon below 1/sqrt 2");

  auto decide = [&](double e) {
    ++out.decisions;
    return metric_match(X, Y, e);
  };
  auto at_top = decide(top);
  if (!at_top) {
    out.lower = out.upper = kMetricCap;
    out.cap_hit = true;
    return out;
  }
  out.witness = at_top;
  double hi = top;
  double lo = out.epsilon_min;
  if (auto w = decide(lo)) {
    // Matches at the smallest decidable scale: the window bounds the bracket.
    out.lower = 0.0;
    out.upper = lo;
    out.witness = w;
    return out;
  }
  for (int it = 0; it < cfg.max_iterations && hi - lo > cfg.tolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (auto w = decide(mid)) {
      hi = mid;
      out.witness = w;
    } else {
      lo = mid;
    }
  }
  out.lower = lo;
  out.upper = hi;
  return out;
}

}  // namespace delone
