#include <benchmark/benchmark.h>

#include "distlab/density.hpp"
#include "distlab/fourier.hpp"
#include "distlab/oracle.hpp"

using namespace distlab;

static void BM_CircleTransform(benchmark::State& st) {
  ConvexBody b = ConvexBody::ball(2);
  double r = static_cast<double>(st.range(0));
  BoundaryRule rule(b, resolving_level(b, r));
  for (auto _ : st) benchmark::DoNotOptimize(rule.transform({0.6 * r, 0.8 * r, 0.0}));
  st.counters["nodes"] = static_cast<double>(rule.size());
}
BENCHMARK(BM_CircleTransform)->Arg(16)->Arg(64)->Arg(256);

static void BM_SphereTransform(benchmark::State& st) {
  ConvexBody b = ConvexBody::ball(3);
  double r = static_cast<double>(st.range(0));
  BoundaryRule rule(b, resolving_level(b, r));
  for (auto _ : st) benchmark::DoNotOptimize(rule.transform({0.0, 0.6 * r, 0.8 * r}));
  st.counters["nodes"] = static_cast<double>(rule.size());
}
BENCHMARK(BM_SphereTransform)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_MuHatSqBatch(benchmark::State& st) {
  IFSMeasure m = IFSMeasure::cantor_product(2, 0.45);
  std::vector<Vec> xi(4096);
  for (std::size_t i = 0; i < xi.size(); ++i) xi[i] = {0.37 * i, 0.11 * i, 0.0};
  std::vector<double> out(xi.size());
  for (auto _ : st) {
    mu_hat_sq_batch(m, xi.data(), out.data(), xi.size());
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(xi.size()));
}
BENCHMARK(BM_MuHatSqBatch);

static void BM_GridBuild(benchmark::State& st) {
  IFSMeasure m = IFSMeasure::cantor_product(2, 0.45);
  ConvexBody b = ConvexBody::ball(2);
  GridParams p;
  p.j_max = static_cast<int>(st.range(0));
  p.t_max = std::sqrt(2.0);
  for (auto _ : st) benchmark::DoNotOptimize(build_spectral_grid(m, b, p).rho.size());
}
BENCHMARK(BM_GridBuild)->Arg(7)->Arg(9)->Unit(benchmark::kMillisecond);

static void BM_DensityProfile(benchmark::State& st) {
  IFSMeasure m = IFSMeasure::cantor_product(2, 0.45);
  ConvexBody b = ConvexBody::ball(2);
  GridParams p;
  p.j_max = 9;
  p.t_max = std::sqrt(2.0);
  SpectralGrid g = build_spectral_grid(m, b, p);
  auto ts = default_t_grid(m, b);
  for (auto _ : st) benchmark::DoNotOptimize(density_profile(g, ts, {0.0625, 0.015625}).M.data());
}
BENCHMARK(BM_DensityProfile)->Unit(benchmark::kMillisecond);

static void BM_PairDistances(benchmark::State& st) {
  IFSMeasure m = IFSMeasure::cantor_product(2, 0.45);
  ConvexBody b = ConvexBody::ball(2);
  for (auto _ : st) benchmark::DoNotOptimize(pair_distances(m, b, 1 << 16, 3).data());
  st.SetItemsProcessed(st.iterations() * (1 << 16));
}
BENCHMARK(BM_PairDistances)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
