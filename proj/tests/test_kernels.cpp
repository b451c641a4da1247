// The OpenMP kernels must reproduce the serial reference exactly.
#include "delone/generators.hpp"
#include "delone/kernels.hpp"
#include "delone/voronoi.hpp"
#include "doctest.h"

using namespace delone;

TEST_CASE("serial and parallel kernels agree") {
  for (int dim : {1, 2}) {
    const auto X = dim == 1 ? generate_substitution_1d(fibonacci_rule(), 2000.0)
                            : generate_cut_and_project(ammann_beenker_scheme(), 20.0);
    std::vector<Vec> centers;
    for (std::size_t i : X.interior(4.0)) centers.push_back(X.point(i));
    const auto a = serial::extract_patches(X, centers, 3.0);
    const auto b = parallel::extract_patches(X, centers, 3.0);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      REQUIRE(a[k].offsets.size() == b[k].offsets.size());
      for (std::size_t j = 0; j < a[k].offsets.size(); ++j) CHECK(a[k].offsets[j] == b[k].offsets[j]);
      CHECK(a[k].labels == b[k].labels);
    }
    const double rho = X.window_radius() / 2.0;
    CHECK(serial::grid_cover(X.index(), rho, 0.05) == parallel::grid_cover(X.index(), rho, 0.05));
    CHECK(serial::min_separation(X.index()) == parallel::min_separation(X.index()));
    const auto idx = X.interior(5.0);
    const auto ca = serial::voronoi_cells(X, idx, 4.0);
    const auto cb = parallel::voronoi_cells(X, idx, 4.0);
    REQUIRE(ca.size() == cb.size());
    for (std::size_t k = 0; k < ca.size(); ++k) {
      REQUIRE(ca[k].vertices.size() == cb[k].vertices.size());
      for (std::size_t j = 0; j < ca[k].vertices.size(); ++j) CHECK(ca[k].vertices[j] == cb[k].vertices[j]);
    }
  }
}

TEST_CASE("grid cover of the integers") {
  std::vector<Vec> pts;
  for (int k = -50; k <= 50; ++k) pts.push_back({static_cast<double>(k), 0.0});
  const PointIndex Z(pts, 1);
  // Grid step 1/8 hits every half-integer exactly.
  CHECK(serial::grid_cover(Z, 40.0, 0.125) == doctest::Approx(0.5));
  CHECK(serial::min_separation(Z) == doctest::Approx(1.0));
}
