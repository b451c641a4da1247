// Serial reference kernels against their OpenMP versions.
#include <benchmark/benchmark.h>

#include "delone/atlas.hpp"
#include "delone/generators.hpp"
#include "delone/kernels.hpp"
#include "delone/voronoi.hpp"

using namespace delone;

namespace {

const WindowedDeloneSet& fibonacci() {
  static const auto F = generate_substitution_1d(fibonacci_rule(), 2e4).unlabeled();
  return F;
}

const WindowedDeloneSet& ammann_beenker() {
  static const auto A = generate_cut_and_project(ammann_beenker_scheme(), 30.0);
  return A;
}

std::vector<Vec> interior_points(const WindowedDeloneSet& X, double margin) {
  std::vector<Vec> out;
  for (std::size_t i : X.interior(margin)) out.push_back(X.point(i));
  return out;
}

void BM_ExtractPatches(benchmark::State& st) {
  const auto& F = fibonacci();
  const auto centers = interior_points(F, 10.0);
  const bool par = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(extract_patches(F, centers, 10.0, par));
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * centers.size()));
}

void BM_GridCover(benchmark::State& st) {
  const auto& A = ammann_beenker();
  const bool par = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(grid_cover(A.index(), 20.0, 0.05, par));
}

void BM_VoronoiCells(benchmark::State& st) {
  const auto& A = ammann_beenker();
  const auto idx = A.interior(3.0);
  const bool par = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(voronoi_cells(A, idx, 3.0, par));
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * idx.size()));
}

void BM_MinSeparation(benchmark::State& st) {
  const auto& F = fibonacci();
  const bool par = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(min_separation(F.index(), par));
}

void BM_Atlas(benchmark::State& st) {
  const auto& F = fibonacci();
  const bool par = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(r_atlas(F, 10.0, Equivalence::Translation, par));
}

}  // namespace

// Argument 0 = serial, 1 = OpenMP.
BENCHMARK(BM_ExtractPatches)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridCover)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VoronoiCells)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinSeparation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Atlas)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
