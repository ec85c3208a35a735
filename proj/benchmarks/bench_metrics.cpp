#include <benchmark/benchmark.h>

#include <random>

#include "simdist/anchors.hpp"
#include "simdist/metrics.hpp"

namespace {

using namespace simdist;

std::vector<CBox> random_gts(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.0, 512.0), size(2.0, 16.0);
  std::vector<CBox> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(pos(rng), pos(rng), size(rng), size(rng));
  return out;
}

void BM_SimdMatrix(benchmark::State& state) {
  const auto gts = random_gts(static_cast<std::size_t>(state.range(0)), 1);
  const AnchorGrid grid = build_grid(AnchorSpec::default_spec(), {512, 512});
  const NormParams p = NormParams::manual(18.0, 17.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simd_matrix(gts, grid.anchors, p));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(gts.size() * grid.anchors.size()));
}
BENCHMARK(BM_SimdMatrix)->Arg(1)->Arg(16)->Arg(64);

void BM_Pairwise(benchmark::State& state) {
  const auto gts = random_gts(16, 2);
  const AnchorGrid grid = build_grid(AnchorSpec::default_spec(), {512, 512});
  Metric m;
  m.kind = static_cast<MetricKind>(state.range(0));
  m.dotd_scale = 8.0;
  m.norm = NormParams::manual(18.0, 17.0);
  state.SetLabel(to_string(m.kind));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pairwise(m, gts, grid.anchors));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(gts.size() * grid.anchors.size()));
}
BENCHMARK(BM_Pairwise)->DenseRange(0, 4);

void BM_SimdPairScalar(benchmark::State& state) {
  const CBox g(10, 10, 8, 8), a(12, 11, 9, 7);
  const NormParams p = NormParams::manual(2.0, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simd_pair(g, a, p));
  }
}
BENCHMARK(BM_SimdPairScalar);

}  // namespace
