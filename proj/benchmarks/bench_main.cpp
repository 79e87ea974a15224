#include <random>
#include <sstream>
#include <vector>

#include <benchmark/benchmark.h>

#include "roadsafe/hungarian.hpp"
#include "roadsafe/ingest.hpp"
#include "roadsafe/pipeline.hpp"
#include "roadsafe/scenario.hpp"
#include "roadsafe/tracker.hpp"

namespace {

using namespace roadsafe;

void BM_Hungarian(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  CostMatrix cost(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) cost(i, j) = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(hungarian(cost));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hungarian)->RangeMultiplier(2)->Range(4, 64)->Complexity();

ScenarioOutput noisy_city() {
  auto spec = reference_city().front();
  spec.noise.miss_rate = 0.05;
  spec.noise.max_consecutive_misses = 3;
  spec.noise.box_jitter_px = 1.0;
  spec.noise.false_positive_rate = 0.02;
  spec.noise.attribute_flip_prob = 0.1;
  return generate(spec);
}

void BM_TrackerSequence(benchmark::State& state) {
  static const auto sim = noisy_city();
  for (auto _ : state) {
    MultiClassTracker tracker;
    std::size_t i = 0;
    const auto& dets = sim.detections;
    while (i < dets.size()) {
      std::size_t j = i;
      while (j < dets.size() && dets[j].frame == dets[i].frame) ++j;
      tracker.step(dets[i].frame, std::span(dets).subspan(i, j - i));
      i = j;
    }
    benchmark::DoNotOptimize(tracker.all_tracks());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * sim.detections.size()));
}
BENCHMARK(BM_TrackerSequence)->Unit(benchmark::kMillisecond);

void BM_ParseDetectionLog(benchmark::State& state) {
  static const auto sim = noisy_city();
  std::ostringstream text;
  emit_detection_log(text, sim.detections);
  const std::string log = text.str();
  for (auto _ : state) {
    std::istringstream in(log);
    benchmark::DoNotOptimize(parse_detection_log(in, sim.meta));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * sim.detections.size()));
}
BENCHMARK(BM_ParseDetectionLog)->Unit(benchmark::kMillisecond);

void BM_RunSequence(benchmark::State& state) {
  static const auto sim = noisy_city();
  SequenceInput input;
  input.meta = sim.meta;
  input.detections = sim.detections;
  input.gps = sim.gps;
  for (auto _ : state) benchmark::DoNotOptimize(run_sequence(input));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * sim.detections.size()));
}
BENCHMARK(BM_RunSequence)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
