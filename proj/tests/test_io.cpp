#include <cstdio>
#include <filesystem>
#include <fstream>

#include "delone/atlas.hpp"
#include "delone/error.hpp"
#include "delone/generators.hpp"
#include "delone/io.hpp"
#include "delone/svg.hpp"
#include "doctest.h"

using namespace delone;

namespace {

void require_identical(const WindowedDeloneSet& a, const WindowedDeloneSet& b) {
  REQUIRE(a.size() == b.size());
  CHECK(a.dim() == b.dim());
  CHECK(a.window_radius() == b.window_radius());
  CHECK(a.r_declared() == b.r_declared());
  CHECK(a.R_declared() == b.R_declared());
  CHECK(a.meta() == b.meta());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.point(i) == b.point(i));  // bit-exact
    CHECK(a.label(i) == b.label(i));
  }
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("delone_io_" + name)).string();
}

}  // namespace

TEST_CASE("JSON and CSV round trips are bit-exact") {
  for (const auto& X : {generate_substitution_1d(fibonacci_rule(), 120.0),
                        generate_cut_and_project(ammann_beenker_scheme(), 6.0)}) {
    require_identical(X, point_set_from_json(nlohmann::json::parse(point_set_to_json(X))));
    require_identical(X, point_set_from_csv(point_set_to_csv(X)));
    for (const char* ext : {".json", ".csv"}) {
      const std::string p = temp_path(std::string("rt") + ext);
      write_point_set(p, X);
      require_identical(X, read_point_set(p));
      std::remove(p.c_str());
    }
  }
}

TEST_CASE("malformed files are input errors") {
  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::UsageError;
  };
  CHECK(code_of([] { point_set_from_json(nlohmann::json::array()); }) == ErrorCode::InputError);
  CHECK(code_of([] { point_set_from_json({{"dim", 1}, {"window_radius", 3}}); }) == ErrorCode::InputError);
  CHECK(code_of([] {
          point_set_from_json({{"dim", 1}, {"window_radius", 3}, {"points", {{0.0, 1.0}}}});
        }) == ErrorCode::InputError);
  CHECK(code_of([] { point_set_from_json({{"dim", 3}, {"window_radius", 3}, {"points", nlohmann::json::array()}}); }) ==
        ErrorCode::UnsupportedDimension);
  CHECK(code_of([] { point_set_from_csv("# dim=1\nx\n0\n"); }) == ErrorCode::InputError);
  CHECK(code_of([] { point_set_from_csv("# dim=1\n# window_radius=3\nx\n0,1\n"); }) == ErrorCode::InputError);
  CHECK(code_of([] { point_set_from_csv("# dim=1\n# window_radius=3\nx\nabc\n"); }) == ErrorCode::InputError);
  CHECK(code_of([] { read_point_set("/nonexistent/file.json"); }) == ErrorCode::InputError);
  const std::string p = temp_path("broken.json");
  std::ofstream(p) << "{\"dim\": 1,";
  CHECK(code_of([&] { read_point_set(p); }) == ErrorCode::InputError);
  std::remove(p.c_str());
}

TEST_CASE("atlas JSON report") {
  const auto F = generate_substitution_1d(fibonacci_rule(), 200.0).unlabeled();
  const Atlas A = r_atlas(F, 3.0);
  const auto j = atlas_to_json(A, 1);
  CHECK(j["class_count"] == A.size());
  CHECK(j["classes"].size() == A.size());
  std::size_t total = 0;
  for (const auto& c : j["classes"]) total += c["multiplicity"].get<std::size_t>();
  CHECK(total == F.interior(3.0).size());
}

TEST_CASE("SVG figure") {
  const auto Z2 = generate_lattice({{1, 0}, {0, 1}}, 6.0);
  std::vector<Polytope> cells{voronoi_cell(Z2, Vec{0, 0}, 3.0)};
  std::vector<Vec> sites{{0, 0}};
  const std::string svg = cells_svg(cells, sites, {{}, 2.0, 400});
  CHECK(svg.find("<polygon") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);
  CHECK_THROWS_AS(cells_svg(cells, sites, {{}, 0.0, 400}), Error);
}
