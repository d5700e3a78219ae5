// benchmarks/bench_dsp.cc

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

#include <cmath>

#include "sedkit/mel.h"
#include "sedkit/resample.h"
#include "sedkit/rng.h"
#include "sedkit/stft.h"

using namespace sedkit;

namespace {

Waveform NoiseClip(double seconds, int sample_rate) {
  Rng rng(1);
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.resize(static_cast<size_t>(seconds * sample_rate));
  for (auto &s : w.samples) s = static_cast<float>(rng.Uniform(-0.5, 0.5));
  return w;
}

void BM_Stft8s(benchmark::State &state) {
  Waveform w = NoiseClip(8.0, 16000);
  for (auto _ : state)
    benchmark::DoNotOptimize(dsp::Stft(w, 1024, 256));
}
BENCHMARK(BM_Stft8s)->Unit(benchmark::kMillisecond);

void BM_LogMel8s(benchmark::State &state) {
  Waveform w = NoiseClip(8.0, 16000);
  dsp::FeatureConfig cfg;
  cfg.clip_seconds = 8.0;
  for (auto _ : state)
    benchmark::DoNotOptimize(dsp::LogMel(w, cfg));
}
BENCHMARK(BM_LogMel8s)->Unit(benchmark::kMillisecond);

void BM_Resample8s(benchmark::State &state) {
  Waveform w = NoiseClip(8.0, 16000);
  for (auto _ : state)
    benchmark::DoNotOptimize(dsp::Resample(w, 1.0 / 1.25));
}
BENCHMARK(BM_Resample8s)->Unit(benchmark::kMillisecond);

void BM_Istft8s(benchmark::State &state) {
  Waveform w = NoiseClip(8.0, 16000);
  auto spec = dsp::Stft(w, 1024, 256);
  for (auto _ : state)
    benchmark::DoNotOptimize(dsp::Istft(spec, 16000));
}
BENCHMARK(BM_Istft8s)->Unit(benchmark::kMillisecond);

}  // namespace
