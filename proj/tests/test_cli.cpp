#include <filesystem>
#include <fstream>
#include <sstream>

#include "delone/cli.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace delone;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "delone_cli_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_CASE("generate then verify a return gap") {
  const std::string f = tmp("f.json");
  REQUIRE(run({"generate", "--model", "fibonacci", "--window", "1000", "--out", f}).code == 0);
  const Run r = run({"verify", "--input", f, "--check", "return-gap", "--radius", "10"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["passed"] == true);
  CHECK(j["reports"][0]["check_id"] == "return-gap");
}

TEST_CASE("periodic input fails the check with exit 1") {
  const std::string z = tmp("lattice.json");
  REQUIRE(run({"generate", "--model", "lattice", "--basis", "1", "--window", "300", "--out", z}).code == 0);
  const std::string dir = tmp("out");
  const Run r = run({"--out-dir", dir, "verify", "--input", z, "--check", "return-gap", "--radius", "10"});
  CHECK(r.code == 1);
  CHECK(r.out.find("PeriodicInput") != std::string::npos);
  // The report is written even though the check failed.
  CHECK(std::filesystem::exists(std::filesystem::path(dir) / "verify.json"));
}

TEST_CASE("usage and input errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"generate", "--model", "penrose"}).code == 2);
  CHECK(run({"atlas", "--input", tmp("missing.json")}).code == 2);
  CHECK(run({"--format", "xml", "generate"}).code == 2);
  const std::string bad = tmp("bad.json");
  std::ofstream(bad) << "{\"dim\": 1";
  const Run r = run({"atlas", "--input", bad, "--radius", "2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("InputError") != std::string::npos);
}

TEST_CASE("identical invocations give identical output") {
  const std::string f = tmp("det.json");
  REQUIRE(run({"generate", "--model", "fibonacci", "--window", "800", "--out", f}).code == 0);
  for (std::vector<std::string> cmd :
       {std::vector<std::string>{"atlas", "--input", f, "--radius", "4", "--gap"},
        std::vector<std::string>{"--seed", "3", "verify", "--input", f, "--check", "voronoi-localization"},
        std::vector<std::string>{"repetitivity", "--input", f, "--rmax", "6", "--grid-step", "2"},
        std::vector<std::string>{"fibers", "--input", f, "--rule", "label-forgetting", "--radius", "5", "--L", "3.2"}}) {
    const Run a = run(cmd), b = run(cmd);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
  const Run g1 = run({"generate", "--model", "ammann-beenker", "--window", "6"});
  const Run g2 = run({"generate", "--model", "ammann-beenker", "--window", "6"});
  CHECK(g1.out == g2.out);
}

TEST_CASE("derive, metric and CSV output") {
  const std::string f = tmp("m.json"), y = tmp("y.json"), rule = tmp("rule.json");
  REQUIRE(run({"generate", "--model", "fibonacci", "--window", "300", "--out", f}).code == 0);
  REQUIRE(run({"derive", "--input", f, "--rule", "label-forgetting", "--out", y, "--save-rule", rule}).code == 0);
  CHECK(run({"derive", "--input", f, "--rule", rule, "--out", tmp("y2.json")}).code == 0);
  const Run m = run({"metric", "--a", y, "--b", tmp("y2.json")});
  CHECK(m.code == 0);
  CHECK(nlohmann::json::parse(m.out)["lower"] == 0.0);
  const Run c = run({"--format", "csv", "atlas", "--input", f, "--radius", "3"});
  CHECK(c.code == 0);
  CHECK(c.out.rfind("R,class_count,min_return_gap\n", 0) == 0);
}

TEST_CASE("voronoi writes an SVG for planar sets") {
  const std::string a = tmp("ab.json"), svg = tmp("ab.svg");
  REQUIRE(run({"generate", "--model", "ammann-beenker", "--window", "12", "--out", a}).code == 0);
  const Run r = run({"voronoi", "--input", a, "--svg", svg, "--svg-half-width", "4"});
  CHECK(r.code == 0);
  CHECK(std::filesystem::file_size(svg) > 100);
}
