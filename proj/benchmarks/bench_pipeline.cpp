#include <benchmark/benchmark.h>

#include <random>

#include "simdist/anchors.hpp"
#include "simdist/assigner.hpp"
#include "simdist/calibration.hpp"
#include "simdist/dataset.hpp"
#include "simdist/nms.hpp"

namespace {

using namespace simdist;

AnnotationSet bench_set(std::size_t images) {
  SynthOptions o;
  o.images = images;
  o.scale_min = 2;
  o.scale_max = 16;
  o.seed = 99;
  return synth_dataset(o);
}

void BM_Calibrate(benchmark::State& state) {
  const AnnotationSet set = bench_set(20);
  CalibrationOptions opt;
  opt.threads = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(calibrate(set, AnchorSpec::default_spec(), opt));
  }
}
BENCHMARK(BM_Calibrate)->Arg(1)->Arg(2)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_Assign(benchmark::State& state) {
  const AnnotationSet set = bench_set(1);
  const std::vector<CBox> gts = set.images[0].boxes();
  const AnchorGrid grid = build_grid(AnchorSpec::default_spec(), {512, 512});
  Metric m;
  const MetricMatrix matrix = pairwise(m, gts, grid.anchors);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assign(matrix, {}));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(matrix.values().size()));
}
BENCHMARK(BM_Assign);

void BM_GreedySuppress(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(0.0, 256.0), size(4.0, 40.0), score(0.0, 1.0);
  std::vector<Detection> dets;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    dets.push_back({CBox(pos(rng), pos(rng), size(rng), size(rng)), score(rng), 1});
  }
  Metric m;
  for (auto _ : state) {
    benchmark::DoNotOptimize(greedy_suppress(dets, m, 0.5, true));
  }
}
BENCHMARK(BM_GreedySuppress)->Arg(100)->Arg(1000);

}  // namespace
