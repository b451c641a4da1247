#include <cmath>
#include <random>

#include "delone/derivation.hpp"
#include "delone/error.hpp"
#include "delone/generators.hpp"
#include "doctest.h"

using namespace delone;

namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

WindowedDeloneSet fib(double W) { return trim_unlabeled_edge(generate_substitution_1d(fibonacci_rule(), W)); }

// Points of A inside B_r(0) are points of B and vice versa.
bool same_on(const WindowedDeloneSet& A, const WindowedDeloneSet& B, double r, double tol = 1e-9) {
  for (const Vec& p : A.points())
    if (norm(p) < r && !B.find(p, tol)) return false;
  for (const Vec& p : B.points())
    if (norm(p) < r && !A.find(p, tol)) return false;
  return true;
}

}  // namespace

TEST_CASE("identity, translated and label-forgetting images") {
  const auto F = fib(400.0);
  const auto id = identity_rule(F, 3.0);
  CHECK(id.labeled);
  CHECK(id.s0() == doctest::Approx(3.0));
  const auto Y = apply_rule(id, F);
  CHECK(Y.window_radius() == doctest::Approx(F.window_radius() - 3.0));
  CHECK(same_on(Y, F, Y.window_radius()));
  for (std::size_t i = 0; i < Y.size(); ++i) CHECK(Y.label(i) == F.label(*F.find(Y.point(i))));

  const auto T = apply_rule(translated_rule(F, 3.0, {0.25, 0.0}), F);
  CHECK(same_on(T, F.translated({-0.25, 0.0}), T.window_radius() - 1.0));

  const auto U = apply_rule(label_forgetting_rule(F, 3.0), F);
  CHECK_FALSE(U.has_labels());
  CHECK(same_on(U, F, U.window_radius()));
}

TEST_CASE("midpoint rule") {
  const auto F = fib(200.0).unlabeled();
  const auto M = apply_rule(midpoint_rule(F, 2.0), F);
  for (std::size_t i = 0; i + 1 < F.size(); ++i) {
    const Vec m = 0.5 * (F.point(i) + F.point(i + 1));
    if (norm(F.point(i)) < M.window_radius() - 2.0) CHECK(M.find(m).has_value());
  }
  CHECK_THROWS_AS(midpoint_rule(F, 0.5), Error);
}

TEST_CASE("rules commute with translations") {
  const auto F = fib(600.0);
  const auto rule = identity_rule(F, 3.0);
  const auto Y = apply_rule(rule, F);
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int k = 0; k < 50; ++k) {
    const Vec v{u(rng), 0.0};
    const auto lhs = apply_rule(rule, F.translated(v));
    const auto rhs = Y.translated(v);
    CHECK(same_on(lhs, rhs, std::min(lhs.window_radius(), rhs.window_radius()) - 1e-6));
  }
}

TEST_CASE("rule JSON round trip and unknown classes") {
  const auto F = fib(300.0);
  const auto rule = label_forgetting_rule(F, 3.0);
  const auto back = rule_from_json(rule_to_json(rule), 1);
  CHECK(back.table.size() == rule.table.size());
  CHECK(same_on(apply_rule(back, F), apply_rule(rule, F), 290.0));
  const auto Z = generate_lattice({{1.0}}, 50.0);
  try {
    apply_rule(identity_rule(F.unlabeled(), 3.0), Z);
    FAIL("foreign patch accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownPatchClass);
  }
  CHECK_THROWS_AS(rule_from_json(nlohmann::json{{"radius", 1}}, 1), Error);
}

TEST_CASE("fiber counts") {
  const auto F = fib(3000.0);
  const double L = 3.12;
  for (double R : {5.0, 10.0, 20.0}) {
    const auto f = fiber_class_count(identity_rule(F, 3.0), F, R, L);
    CHECK(f.count == 1);
    CHECK(f.bound == doctest::Approx(55.0 * L * L));
    // Tile labels are read off the points, so forgetting them loses nothing.
    CHECK(fiber_class_count(label_forgetting_rule(F, 3.0), F, R, L).count == 1);
  }
  const auto P = index_parity_decoration(F.unlabeled());
  for (double R : {5.0, 10.0}) CHECK(fiber_class_count(label_forgetting_rule(P, 3.0), P, R, L).count == 2);
}

TEST_CASE("n condition") {
  CHECK_FALSE(n_condition_holds(1.0, 50));
  CHECK_FALSE(n_condition_holds(2.0, 9));
  CHECK(n_condition_holds(2.0, 10));
}

TEST_CASE("family and relation matrices") {
  const auto P = index_parity_decoration(fib(4000.0).unlabeled());
  const double L = 3.118034;
  const Family fam = build_family_F(P, 5.0, 2, L);
  CHECK(fam.size() > 1);
  CHECK(static_cast<double>(fam.size()) <= fam.bound);
  CHECK(fam.patch_radius == doctest::Approx(L * L * 5.0));
  TheoremHarnessConfig cfg;
  cfg.n = 2;
  cfg.R = 5.0;
  cfg.L = L;
  CHECK_THROWS_AS(relation_Ri(identity_rule(P, 3.0), fam, P, cfg), Error);
  cfg.override_n = true;
  const auto id = relation_Ri(identity_rule(P, 3.0), fam, P, cfg);
  const auto tr = relation_Ri(translated_rule(P, 3.0), fam, P, cfg);
  const auto lf = relation_Ri(label_forgetting_rule(P, 3.0), fam, P, cfg);
  CHECK(id.reflexive());
  CHECK(tr.reflexive());
  CHECK(lf.reflexive());
  CHECK(id.entries == tr.entries);
  CHECK(id.entries != lf.entries);
  const auto cmp = compare_relations({id, tr, lf}, fam.bound);
  REQUIRE(cmp.equal_pairs.size() == 1);
  CHECK(cmp.equal_pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});
  RelationMatrix odd = id;
  odd.entries.pop_back();
  CHECK_THROWS_AS(compare_relations({id, odd}), Error);
  CHECK_THROWS_AS(build_family_F(generate_lattice({{1.0}}, 400.0), 5.0, 2, L), Error);
}
