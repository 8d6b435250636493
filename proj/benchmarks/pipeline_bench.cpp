// Micro-benchmarks for the stages that dominate a detection run, plus one
// small end-to-end pass. Inputs are generated deterministically so numbers
// are comparable across machines and commits.

#include <benchmark/benchmark.h>

#include "specmcd/classifier.hpp"
#include "specmcd/config.hpp"
#include "specmcd/ctm.hpp"
#include "specmcd/extraction.hpp"
#include "specmcd/fusion.hpp"
#include "specmcd/pipeline.hpp"
#include "specmcd/rng.hpp"
#include "specmcd/synth.hpp"

namespace {

using namespace specmcd;

Grid random_grid(int edge, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Grid g = Grid::zeros(edge, edge);
  for (float& v : g.values) {
    v = static_cast<float>(rng.uniform());
  }
  return g;
}

void BM_TruncatedSvd(benchmark::State& state) {
  const int edge = static_cast<int>(state.range(0));
  const Grid grid = random_grid(edge, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(truncated_svd(grid, 70));
  }
}
BENCHMARK(BM_TruncatedSvd)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_MeanFilter(benchmark::State& state) {
  const Grid grid = random_grid(1024, 12);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mean_filter(grid, 29));
  }
}
BENCHMARK(BM_MeanFilter)->Unit(benchmark::kMillisecond);

void BM_SobelGradient(benchmark::State& state) {
  const Grid grid = random_grid(1024, 13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sobel_gradient(grid));
  }
}
BENCHMARK(BM_SobelGradient)->Unit(benchmark::kMillisecond);

void BM_DistanceTransform(benchmark::State& state) {
  SplitMix64 rng(14);
  BinaryMask mask = BinaryMask::zeros(1024, 1024);
  for (int i = 0; i < 2000; ++i) {
    mask.set(rng.uniform_int(0, 1023), rng.uniform_int(0, 1023), true);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(euclidean_distance_transform(mask));
  }
}
BENCHMARK(BM_DistanceTransform)->Unit(benchmark::kMillisecond);

void BM_DetectSmall(benchmark::State& state) {
  ScenePreset preset;
  preset.kind = SceneKind::Dense;
  preset.width = preset.height = 256;
  preset.seed = 7;
  preset.distractors = 1;
  const SyntheticScene scene = generate_scene(preset);
  const PipelineConfig config;
  const SpectralMockClassifier classifier(config.mock_saturation);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_detect(scene.raster, config, classifier));
  }
}
BENCHMARK(BM_DetectSmall)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
