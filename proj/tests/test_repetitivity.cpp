#include <cmath>

#include "delone/error.hpp"
#include "delone/generators.hpp"
#include "delone/repetitivity.hpp"
#include "doctest.h"

using namespace delone;

TEST_CASE("Delone estimates on lattices and Fibonacci") {
  const auto Z2 = generate_lattice({{1, 0}, {0, 1}}, 15.0);
  const auto e = estimate_delone_params(Z2);
  CHECK(e.r_hat == doctest::Approx(0.5));
  CHECK(e.R_hat <= std::sqrt(0.5) + 1e-12);
  CHECK(e.R_upper >= std::sqrt(0.5) - 1e-12);
  const auto F = generate_substitution_1d(fibonacci_rule(), 2000.0);
  const auto f = estimate_delone_params(F);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(f.r_hat == doctest::Approx(0.5));
  CHECK(f.R_hat <= phi / 2.0 + 1e-12);
  CHECK(f.R_upper >= phi / 2.0 - 1e-12);
  CHECK(f.R_hat == doctest::Approx(phi / 2.0).epsilon(1e-3));
  CHECK_THROWS_AS(estimate_delone_params(WindowedDeloneSet::build({{0, 0}}, 1, 3.0)), Error);
}

TEST_CASE("covering radius of a finite site set") {
  const std::vector<Vec> sites{{-2, 0}, {2, 0}};
  const auto c = covering_radius(sites, 1, 4.0, 0.01);
  CHECK(c.value == doctest::Approx(2.0));
  CHECK(c.upper >= 2.0);
  CHECK_THROWS_AS(covering_radius(std::vector<Vec>{}, 1, 4.0), Error);
}

TEST_CASE("repetitivity function of the integers") {
  // One class; placements are Z (cover 1/2) and the farthest point of the
  // open ball sits at ceil(R) - 1.
  const auto Z = generate_lattice({{1.0}}, 200.0);
  for (double R : {1.5, 2.0, 3.7, 10.0})
    CHECK(repetitivity_function(Z, R, {0.125, true}) == doctest::Approx(0.5 + std::ceil(R) - 1.0));
  CHECK_THROWS_AS(repetitivity_function(Z, 60.0), Error);
}

TEST_CASE("L estimate on Fibonacci is stable and monotone") {
  const auto grid = std::vector<double>{1.5, 2, 3, 5, 8, 13, 20};
  const auto small = lr_constant(generate_substitution_1d(fibonacci_rule(), 1000.0).unlabeled(), grid);
  const auto big = lr_constant(generate_substitution_1d(fibonacci_rule(), 10000.0).unlabeled(), grid);
  CHECK(std::abs(small.L_hat - big.L_hat) / big.L_hat < 0.1);
  CHECK(big.monotone);
  CHECK(big.L_hat > 1.0);
  CHECK(big.L_hat < 10.0);
  for (std::size_t k = 0; k + 1 < big.M_of_R.size(); ++k) CHECK(big.M_of_R[k] <= big.M_of_R[k + 1] + 2 * big.resolution);
  CHECK(big.threshold_radius.has_value());
}

TEST_CASE("factor linear repetitivity on the label-forgetting image") {
  const auto F = generate_substitution_1d(fibonacci_rule(), 5000.0).unlabeled();
  const auto rep = check_factor_lr(F, 3.2, {2, 3, 5, 8});
  CHECK(rep.passed);
  REQUIRE(rep.threshold_diameter.has_value());
  for (const auto& c : rep.classes)
    if (c.diameter >= *rep.threshold_diameter) CHECK(c.passed);
  CHECK_THROWS_AS(check_factor_lr(F, 0.5, {2, 3}), Error);
}
