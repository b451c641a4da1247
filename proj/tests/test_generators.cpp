#include <cmath>
#include <map>
#include <set>

#include "delone/error.hpp"
#include "delone/generators.hpp"
#include "doctest.h"

using namespace delone;

namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

// Independent string rewriting for the Fibonacci substitution.
std::string rewrite(std::string w, int times) {
  for (int t = 0; t < times; ++t) {
    std::string next;
    for (char c : w) next += c == 'a' ? "ab" : "a";
    w = next;
  }
  return w;
}

double min_distance(const WindowedDeloneSet& X) {
  double best = 1e300;
  for (std::size_t i = 0; i < X.size(); ++i) {
    auto nb = X.in_ball(X.point(i), 3.0, true);
    for (std::size_t j : nb)
      if (j != i) best = std::min(best, dist(X.point(i), X.point(j)));
  }
  return best;
}

}  // namespace

TEST_CASE("lattice constants") {
  const auto [r, R] = lattice_delone_constants({{1, 0}, {0, 1}});
  CHECK(r == doctest::Approx(0.5));
  CHECK(R == doctest::Approx(std::sqrt(0.5)));
  const auto [rh, Rh] = lattice_delone_constants({{1, 0}, {0.5, std::sqrt(3.0) / 2.0}});
  CHECK(rh == doctest::Approx(0.5));
  CHECK(Rh == doctest::Approx(1.0 / std::sqrt(3.0)));
  const auto Z2 = generate_lattice({{1, 0}, {0, 1}}, 10.0);
  std::size_t want = 0;
  for (int i = -10; i <= 10; ++i)
    for (int j = -10; j <= 10; ++j) want += i * i + j * j <= 100;
  CHECK(Z2.size() == want);
  CHECK_THROWS_AS(generate_lattice({{1, 2}, {2, 4}}, 5.0), Error);
}

TEST_CASE("Fibonacci tiles follow the fixed point of the substitution") {
  const auto F = generate_substitution_1d(fibonacci_rule(), 500.0);
  const std::string right = rewrite("a", 20);  // σ(a) starts with a
  const std::string left = rewrite("a", 20);   // σ²(a) ends with a; 20 is even
  std::vector<double> xs;
  for (const Vec& p : F.points()) xs.push_back(p.x);
  const auto zero = std::find(xs.begin(), xs.end(), 0.0);
  REQUIRE(zero != xs.end());
  std::size_t k = 0;
  for (auto it = zero; it + 1 != xs.end(); ++it, ++k) {
    const double gap = *(it + 1) - *it;
    CHECK(gap == doctest::Approx(right[k] == 'a' ? kPhi : 1.0));
    CHECK(F.label(static_cast<std::size_t>(it - xs.begin())) == (right[k] == 'a' ? 0 : 1));
  }
  k = 0;
  for (auto it = zero; it != xs.begin(); --it, ++k)
    CHECK(*it - *(it - 1) == doctest::Approx(left[left.size() - 1 - k] == 'a' ? kPhi : 1.0));
  // Tile frequencies 1/φ and 1/φ² give mean spacing 1 + 1/φ².
  CHECK(static_cast<double>(F.size()) == doctest::Approx(1000.0 / (1.0 + 1.0 / (kPhi * kPhi))).epsilon(0.01));
  CHECK(F.r_declared().value() == doctest::Approx(0.5));
  CHECK(F.R_declared().value() == doctest::Approx(kPhi / 2.0));
  CHECK(F.label(F.size() - 1) == kNoLabel);
}

TEST_CASE("period-two substitution gives the integers") {
  const auto P = generate_substitution_1d(period_two_rule(), 50.0);
  for (std::size_t i = 0; i + 1 < P.size(); ++i) CHECK(P.point(i + 1).x - P.point(i).x == doctest::Approx(1.0));
  CHECK(P.size() == 101);
}

TEST_CASE("primitivity and seeds") {
  CHECK(is_primitive(fibonacci_rule()));
  CHECK(is_primitive(silver_rule()));
  SubstitutionRule1D bad{"bad", "ab", {{'a', "a"}, {'b', "ab"}}, {{'a', 1.0}, {'b', 1.0}}, 'a'};
  CHECK_FALSE(is_primitive(bad));
  CHECK_THROWS_AS(find_two_sided_seed(bad), Error);
  const auto seed = find_two_sided_seed(fibonacci_rule());
  CHECK(seed.left == 'a');
  CHECK(seed.right == 'a');
  CHECK(seed.power == 2);
}

TEST_CASE("silver mean tiles") {
  const auto S = generate_substitution_1d(silver_rule(), 300.0);
  std::set<long> gaps;
  for (std::size_t i = 0; i + 1 < S.size(); ++i) gaps.insert(std::lround((S.point(i + 1).x - S.point(i).x) * 1e6));
  CHECK(gaps == std::set<long>{1000000, std::lround((1.0 + std::sqrt(2.0)) * 1e6)});
}

TEST_CASE("Fibonacci by cut and project has the two tile lengths") {
  const auto C = generate_cut_and_project(fibonacci_scheme(), 300.0);
  std::map<long, int> gaps;
  for (std::size_t i = 0; i + 1 < C.size(); ++i) ++gaps[std::lround((C.point(i + 1).x - C.point(i).x) * 1e6)];
  REQUIRE(gaps.size() == 2);
  const double lo = gaps.begin()->first * 1e-6, hi = gaps.rbegin()->first * 1e-6;
  CHECK(hi / lo == doctest::Approx(kPhi));
  // Long tiles are φ times as frequent as short ones.
  CHECK(static_cast<double>(gaps.rbegin()->second) / gaps.begin()->second == doctest::Approx(kPhi).epsilon(0.02));
}

TEST_CASE("Ammann-Beenker vertices") {
  const auto A = generate_cut_and_project(ammann_beenker_scheme(), 15.0);
  CHECK(A.dim() == 2);
  // Shortest distance: the short diagonal of the 45° rhombus with unit edges.
  CHECK(min_distance(A) == doctest::Approx(2.0 * std::sin(M_PI / 8.0)).epsilon(1e-9));
  // The window is symmetric, so the set is invariant under rotation by 45°.
  const double c = std::cos(M_PI / 4.0), s = std::sin(M_PI / 4.0);
  std::size_t missing = 0;
  for (const Vec& p : A.points()) missing += !A.find({c * p.x - s * p.y, s * p.x + c * p.y}, 1e-7).has_value();
  CHECK(missing == 0);
}

TEST_CASE("forward-gap decoration reproduces the tile labels") {
  const auto F = generate_substitution_1d(fibonacci_rule(), 300.0);
  const auto U = F.unlabeled();
  const auto D = decorate(U, forward_gap_decoration(U, 2.5, {kPhi, 1.0}));
  CHECK(D.window_radius() == doctest::Approx(297.5));
  for (std::size_t i = 0; i < D.size(); ++i) {
    const auto j = F.find(D.point(i));
    REQUIRE(j.has_value());
    CHECK(D.label(i) == F.label(*j));
  }
}

TEST_CASE("index parity decoration") {
  const auto F = generate_substitution_1d(fibonacci_rule(), 100.0);
  const auto P = index_parity_decoration(F);
  const std::size_t k0 = P.nearest({}).first;
  CHECK(P.label(k0) == 0);
  for (std::size_t i = 0; i + 1 < P.size(); ++i) CHECK(P.label(i) != P.label(i + 1));
  CHECK(P.meta()["decoration"] == "index-parity");
  CHECK_THROWS_AS(index_parity_decoration(generate_lattice({{1, 0}, {0, 1}}, 4.0)), Error);
}

TEST_CASE("trimming the unlabeled edge point") {
  const auto F = generate_substitution_1d(fibonacci_rule(), 100.0);
  const auto T = trim_unlabeled_edge(F);
  CHECK(T.size() == F.size() - 1);
  for (std::size_t i = 0; i < T.size(); ++i) CHECK(T.label(i) != kNoLabel);
  CHECK(trim_unlabeled_edge(T).size() == T.size());
}

TEST_CASE("scheme JSON round trip") {
  const auto s = ammann_beenker_scheme();
  const auto back = scheme_from_json(scheme_to_json(s));
  const auto A = generate_cut_and_project(s, 8.0), B = generate_cut_and_project(back, 8.0);
  REQUIRE(A.size() == B.size());
  for (std::size_t i = 0; i < A.size(); ++i) CHECK(near(A.point(i), B.point(i), 1e-12));
  CHECK_THROWS_AS(scheme_from_json(nlohmann::json{{"name", "x"}}), Error);
}
