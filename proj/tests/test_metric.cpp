#include <cmath>

#include "delone/error.hpp"
#include "delone/generators.hpp"
#include "delone/metric.hpp"
#include "doctest.h"

using namespace delone;

namespace {

WindowedDeloneSet shifted_integers(double shift, double W) {
  std::vector<Vec> pts;
  for (int k = -static_cast<int>(W) - 2; k <= static_cast<int>(W) + 2; ++k) {
    const double x = k + shift;
    if (std::abs(x) <= W) pts.push_back({x, 0.0});
  }
  return WindowedDeloneSet::build(pts, 1, W);
}

std::vector<double> ball(const WindowedDeloneSet& X, double v, double rad) {
  std::vector<double> out;
  for (const Vec& p : X.points())
    if (std::abs(p.x - v) < rad) out.push_back(p.x - v);
  std::sort(out.begin(), out.end());
  return out;
}

// Grid-search oracle: some v on a grid of step h in (−ε, ε), paired with a
// v′ that aligns a point of X with a point of Y, gives equal open-ball sets.
bool brute_in_set(const WindowedDeloneSet& X, const WindowedDeloneSet& Y, double eps, double h) {
  const double rad = 1.0 / eps;
  std::vector<double> shifts;
  for (const Vec& x : X.points())
    for (const Vec& y : Y.points())
      if (std::abs(x.x) < 3.0 && std::abs(y.x) < 3.0 && std::abs(x.x - y.x) < 2.0 * eps) shifts.push_back(x.x - y.x);
  for (double v = -eps + h / 2.0; v < eps; v += h)
    for (double d : shifts) {
      const double vp = v - d;
      if (std::abs(vp) >= eps) continue;
      const auto a = ball(X, v, rad), b = ball(Y, vp, rad);
      if (a.size() != b.size()) continue;
      bool same = true;
      for (std::size_t k = 0; k < a.size() && same; ++k) same = std::abs(a[k] - b[k]) < 1e-9;
      if (same) return true;
    }
  return false;
}

}  // namespace

TEST_CASE("d(Z, Z - 1/2) agrees with the grid-search oracle") {
  const auto Z = shifted_integers(0.0, 40.0), H = shifted_integers(-0.5, 40.0);
  double oracle = -1.0;
  for (double e = 0.2; e < 0.3; e += 1e-4)
    if (brute_in_set(Z, H, e, 1e-4)) {
      oracle = e;
      break;
    }
  REQUIRE(oracle > 0.0);
  const MetricResult r = delone_distance(Z, H);
  CHECK_FALSE(r.cap_hit);
  CHECK(r.upper - r.lower <= 1e-4 + 1e-15);
  CHECK(std::abs(0.5 * (r.lower + r.upper) - oracle) < 1e-3);
  REQUIRE(r.witness.has_value());
  CHECK(std::abs(r.witness->v.x) < r.witness->epsilon);
  CHECK(std::abs(r.witness->v_prime.x) < r.witness->epsilon);
}

TEST_CASE("incompatible sets hit the cap") {
  const auto Z = shifted_integers(0.0, 30.0);
  std::vector<Vec> even;
  for (int k = -15; k <= 15; ++k) even.push_back({2.0 * k, 0.0});
  const auto E = WindowedDeloneSet::build(even, 1, 30.0);
  const MetricResult r = delone_distance(Z, E);
  CHECK(r.cap_hit);
  CHECK(r.lower == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(r.upper == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("a set is at distance at most the window scale from itself") {
  const auto F = generate_substitution_1d(fibonacci_rule(), 200.0).unlabeled();
  const MetricResult r = delone_distance(F, F);
  CHECK(r.lower == 0.0);
  CHECK(r.upper <= r.epsilon_min);
  CHECK(r.epsilon_min == doctest::Approx(1.0 / 200.0).epsilon(1e-3));
}

TEST_CASE("planar half-shift") {
  // v − v′ = (1/2, 1/2) is best split evenly: ε = |(1/2, 1/2)| / 2.
  const auto A = generate_lattice({{1, 0}, {0, 1}}, 12.0);
  std::vector<Vec> pts;
  for (int i = -13; i <= 13; ++i)
    for (int j = -13; j <= 13; ++j) {
      const Vec p{i + 0.5, j + 0.5};
      if (norm(p) <= 12.0) pts.push_back(p);
    }
  const auto B = WindowedDeloneSet::build(pts, 2, 12.0);
  const MetricResult r = delone_distance(A, B);
  CHECK(r.lower <= std::sqrt(2.0) / 4.0 + 1e-12);
  CHECK(r.upper >= std::sqrt(2.0) / 4.0 - 1e-12);
  CHECK(r.upper - r.lower <= 1e-4 + 1e-15);
}

TEST_CASE("metric input errors") {
  const auto Z = shifted_integers(0.0, 1.5);
  CHECK_THROWS_AS(delone_distance(Z, Z), Error);
  const auto Z40 = shifted_integers(0.0, 40.0);
  CHECK_THROWS_AS(metric_match(Z40, Z40, 0.01), Error);
  CHECK_THROWS_AS(metric_match(Z40, Z40, 0.9), Error);
  CHECK_THROWS_AS(delone_distance(Z40, Z40, {0.0, 10}), Error);
}
