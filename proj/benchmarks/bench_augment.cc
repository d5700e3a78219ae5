// benchmarks/bench_augment.cc

// Copyright 2026  The sedkit authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "sedkit/augment.h"
#include "sedkit/synth.h"

using namespace sedkit;

namespace {

data::SynthConfig DeskSynth() {
  data::SynthConfig cfg;
  cfg.classes = 4;
  cfg.clip_seconds = 8.0;
  cfg.label_frames = 125;
  cfg.label_hop_s = 0.064;
  return cfg;
}

aug::AugmentContext DeskContext() {
  aug::AugmentContext ctx;
  ctx.feature.clip_seconds = 8.0;
  ctx.label_frames = 125;
  ctx.label_hop_s = 0.064;
  return ctx;
}

void BM_SynthClip(benchmark::State &state) {
  auto cfg = DeskSynth();
  uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(data::SynthClip(Rng(seed++), cfg));
}
BENCHMARK(BM_SynthClip)->Unit(benchmark::kMillisecond);

void BM_SingleTransform(benchmark::State &state, aug::TransformId id) {
  auto clip0 = data::SynthClip(Rng(1), DeskSynth());
  auto clip1 = data::SynthClip(Rng(2), DeskSynth());
  std::vector<const data::LabeledClip *> batch = {&clip0, &clip1};
  auto ctx = DeskContext();
  Rng rng(3);
  for (auto _ : state) {
    auto policy = aug::SamplePolicy(
        &rng, 1, {aug::ScaleMode::kRandomUpperBound, 5}, {id});
    benchmark::DoNotOptimize(aug::ApplyPolicy(batch, 0, policy, ctx));
  }
}
BENCHMARK_CAPTURE(BM_SingleTransform, speed, aug::TransformId::kSpeed)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SingleTransform, time_shift, aug::TransformId::kTimeShift)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SingleTransform, time_stretch,
                  aug::TransformId::kTimeStretch)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SingleTransform, pitch_shift,
                  aug::TransformId::kPitchShift)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SingleTransform, drc, aug::TransformId::kDrc)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SingleTransform, time_mask, aug::TransformId::kTimeMask)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SingleTransform, freq_mask, aug::TransformId::kFreqMask)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SingleTransform, mixup, aug::TransformId::kMixup)
    ->Unit(benchmark::kMillisecond);

void BM_RandomPolicy(benchmark::State &state) {
  auto clip0 = data::SynthClip(Rng(1), DeskSynth());
  auto clip1 = data::SynthClip(Rng(2), DeskSynth());
  std::vector<const data::LabeledClip *> batch = {&clip0, &clip1};
  auto ctx = DeskContext();
  Rng rng(4);
  const auto all = aug::AllTransforms();
  for (auto _ : state) {
    auto policy = aug::SamplePolicy(
        &rng, 1, {aug::ScaleMode::kRandomUpperBound, 5}, all);
    benchmark::DoNotOptimize(aug::ApplyPolicy(batch, 0, policy, ctx));
  }
}
BENCHMARK(BM_RandomPolicy)->Unit(benchmark::kMillisecond);

}  // namespace
