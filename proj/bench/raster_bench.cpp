// Parallel kernels against their single-threaded references on a 1080p frame.
#include <benchmark/benchmark.h>

#include <omp.h>

#include <random>

#include "ddp/raster_ops.hpp"

using namespace ddp::raster;

namespace {

const Raster& frame() {
  static const Raster img = [] {
    Raster r(1920, 1080);
    std::mt19937 rng(7);
    for (auto& b : r.bytes()) b = static_cast<std::uint8_t>(rng());
    return r;
  }();
  return img;
}

const BinaryMask& half_mask() {
  static const BinaryMask m = BinaryMask::from_rect(1920, 1080, Rect{0, 0, 960, 1080});
  return m;
}

void threads_arg(benchmark::internal::Benchmark* b) {
  for (int t = 1; t <= omp_get_max_threads(); t *= 2) b->Arg(t);
}

}  // namespace

static void BM_SmoothParallel(benchmark::State& s) {
  omp_set_num_threads(static_cast<int>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(gaussian_smooth(frame(), 1.0));
}
BENCHMARK(BM_SmoothParallel)->Apply(threads_arg)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_SmoothReference(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(reference::gaussian_smooth(frame(), 1.0));
}
BENCHMARK(BM_SmoothReference)->Unit(benchmark::kMillisecond);

static void BM_HeavyBlurParallel(benchmark::State& s) {
  omp_set_num_threads(static_cast<int>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(apply_blur_mask(frame(), Rect{800, 400, 300, 200}, 6.0));
}
BENCHMARK(BM_HeavyBlurParallel)->Apply(threads_arg)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_HeavyBlurReference(benchmark::State& s) {
  for (auto _ : s) {
    benchmark::DoNotOptimize(reference::apply_blur_mask(frame(), Rect{800, 400, 300, 200}, 6.0));
  }
}
BENCHMARK(BM_HeavyBlurReference)->Unit(benchmark::kMillisecond);

static void BM_DownsampleParallel(benchmark::State& s) {
  omp_set_num_threads(static_cast<int>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(downsample_max_dim(frame(), 150));
}
BENCHMARK(BM_DownsampleParallel)->Apply(threads_arg)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_DownsampleReference(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(reference::downsample_max_dim(frame(), 150));
}
BENCHMARK(BM_DownsampleReference)->Unit(benchmark::kMillisecond);

static void BM_WhiteMaskParallel(benchmark::State& s) {
  omp_set_num_threads(static_cast<int>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(apply_white_mask(frame(), half_mask()));
}
BENCHMARK(BM_WhiteMaskParallel)->Apply(threads_arg)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_WhiteMaskReference(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(reference::apply_white_mask(frame(), half_mask()));
}
BENCHMARK(BM_WhiteMaskReference)->Unit(benchmark::kMillisecond);

static void BM_ContrastParallel(benchmark::State& s) {
  omp_set_num_threads(static_cast<int>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(enhance_contrast(frame()));
}
BENCHMARK(BM_ContrastParallel)->Apply(threads_arg)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_ContrastReference(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(reference::enhance_contrast(frame(), kDefaultContrastLow, kDefaultContrastHigh));
}
BENCHMARK(BM_ContrastReference)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
