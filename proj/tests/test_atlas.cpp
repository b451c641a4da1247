#include <cmath>
#include <map>
#include <set>

#include "delone/atlas.hpp"
#include "delone/error.hpp"
#include "delone/generators.hpp"
#include "delone/repetitivity.hpp"
#include "doctest.h"

using namespace delone;

namespace {

using Key = std::vector<long>;

// Offsets of the open ball around x, rounded to 1e-6, relative to `anchor`.
Key ball_key(const WindowedDeloneSet& X, Vec x, double R, bool centered) {
  std::vector<double> xs;
  for (const Vec& p : X.points())
    if (dist(p, x) < R - kEta) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  const double anchor = centered ? x.x : xs.front();
  Key k;
  for (double v : xs) k.push_back(std::lround((v - anchor) * 1e6));
  return k;
}

WindowedDeloneSet fib(double W) { return generate_substitution_1d(fibonacci_rule(), W).unlabeled(); }

}  // namespace

TEST_CASE("atlas classes match brute-force enumeration") {
  const auto F = fib(600.0);
  for (double R : {1.25, 2.0, 5.0, 9.0}) {
    for (bool centered : {false, true}) {
      std::set<Key> keys;
      for (std::size_t i : F.interior(R)) keys.insert(ball_key(F, F.point(i), R, centered));
      const Atlas A = r_atlas(F, R, centered ? Equivalence::Centered : Equivalence::Translation);
      CHECK(A.size() == keys.size());
      std::size_t total = 0;
      for (const auto& c : A.classes()) total += c.multiplicity;
      CHECK(total == F.interior(R).size());
    }
  }
  CHECK(r_atlas(F, 1.25).size() == 2);
}

TEST_CASE("atlas of the integers has one class with return vectors Z") {
  const auto Z = generate_lattice({{1.0}}, 60.0);
  const Atlas A = r_atlas(Z, 3.0);
  REQUIRE(A.size() == 1);
  const auto rv = return_vectors(Z, A, 0);
  const auto v = rv.vectors();
  REQUIRE(v.size() > 10);
  for (std::size_t k = 0; k + 1 < v.size(); ++k) CHECK(v[k + 1].x - v[k].x == doctest::Approx(1.0));
  const auto p = find_period(Z, 0.5);
  REQUIRE(p.has_value());
  CHECK(norm(*p) == doctest::Approx(1.0));
  try {
    min_return_gap(Z, 3.0, 0.5);
    FAIL("periodic input accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PeriodicInput);
  }
}

TEST_CASE("occurrences of a patch are its return vectors shifted") {
  const auto F = fib(800.0);
  const Atlas A = r_atlas(F, 4.0);
  for (std::size_t c = 0; c < A.size(); ++c) {
    const auto occ = occurrences(F, A[c]);
    CHECK(occ.size() == A[c].multiplicity);
    for (Vec x : occ) {
      const PatchClass pc = canonical_class(extract_patch(F, x, 4.0));
      CHECK(same_class(pc, A[c]));
    }
  }
}

TEST_CASE("return gap matches brute force and the linear bound") {
  const auto F = fib(4000.0);
  const double L = lr_constant(F, {1.5, 2, 3, 5, 8, 13}).L_hat;
  for (double R : {5.0, 10.0, 20.0}) {
    const Atlas A = r_atlas(F, R);
    const ReturnGap g = min_return_gap(F, A);
    // Brute force: occurrences of each translation class, by leftmost point.
    std::map<Key, std::vector<double>> anchors;
    for (std::size_t i : F.interior(R)) {
      const Vec x = F.point(i);
      std::vector<double> xs;
      for (std::size_t j : F.in_ball(x, R, true)) xs.push_back(F.point(j).x);
      anchors[ball_key(F, x, R, false)].push_back(*std::min_element(xs.begin(), xs.end()));
    }
    double brute = 1e300;
    for (auto& [k, v] : anchors) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return std::abs(a - b) < 1e-7; }), v.end());
      for (std::size_t t = 0; t + 1 < v.size(); ++t) brute = std::min(brute, v[t + 1] - v[t]);
    }
    CHECK(g.gap == doctest::Approx(brute).epsilon(1e-9));
    CHECK(g.gap >= R / (11.0 * L));
  }
}

TEST_CASE("extension count matches brute force") {
  const auto F = fib(1500.0);
  std::map<Key, std::set<Key>> ext;
  for (std::size_t i : F.interior(20.0))
    ext[ball_key(F, F.point(i), 5.0, true)].insert(ball_key(F, F.point(i), 20.0, false));
  std::size_t worst = 0;
  for (const auto& [k, s] : ext) worst = std::max(worst, s.size());
  const ExtensionCount e = extension_count(F, 5.0, 20.0);
  CHECK(e.max_extensions == worst);
  CHECK(e.inner_classes == ext.size());
  CHECK_THROWS_AS(extension_count(F, 5.0, 3.0), Error);
}

TEST_CASE("atlas input errors") {
  const auto F = fib(50.0);
  CHECK_THROWS_AS(r_atlas(F, 60.0), Error);
  CHECK_THROWS_AS(min_return_gap(F, 20.0, 0.8), Error);
}
