// benchmarks/bench_model.cc

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

#include "sedkit/network.h"
#include "sedkit/rng.h"

using namespace sedkit;

namespace {

nn::ModelConfig DeskModel(int ch0, int ch1, int hidden) {
  nn::ModelConfig cfg;
  cfg.conv_blocks = 2;
  cfg.channels = {ch0, ch1};
  cfg.pool_factor = 4;
  cfg.n_mels = 64;
  cfg.recurrent_hidden = hidden;
  cfg.classes = 4;
  return cfg;
}

nn::Tensor<float> DeskInput() {
  Rng rng(9);
  nn::Tensor<float> t({500, 64});
  for (auto &v : t.data) v = static_cast<float>(rng.Uniform(-8.0, 0.0));
  return t;
}

void BM_ForwardOnly(benchmark::State &state) {
  auto cfg = DeskModel(static_cast<int>(state.range(0)),
                       static_cast<int>(state.range(1)),
                       static_cast<int>(state.range(2)));
  auto model = nn::InitModel<float>(cfg, 1);
  auto input = DeskInput();
  for (auto _ : state)
    benchmark::DoNotOptimize(nn::Forward(model, input, false));
}
BENCHMARK(BM_ForwardOnly)
    ->Args({4, 8, 32})
    ->Args({2, 4, 16})
    ->Unit(benchmark::kMillisecond);

void BM_ForwardBackward(benchmark::State &state) {
  auto cfg = DeskModel(static_cast<int>(state.range(0)),
                       static_cast<int>(state.range(1)),
                       static_cast<int>(state.range(2)));
  auto model = nn::InitModel<float>(cfg, 1);
  auto input = DeskInput();
  for (auto _ : state) {
    auto fr = nn::Forward(model, input, true);
    nn::Tensor<float> gs(fr.strong().shape), gw(fr.weak().shape);
    for (auto &v : gs.data) v = 1e-3f;
    for (auto &v : gw.data) v = 1e-3f;
    fr.tape->BackwardSeeded({{fr.strong_var, gs}, {fr.weak_var, gw}});
    benchmark::DoNotOptimize(nn::CollectParamGrad(fr, cfg));
  }
}
BENCHMARK(BM_ForwardBackward)
    ->Args({4, 8, 32})
    ->Args({2, 4, 16})
    ->Unit(benchmark::kMillisecond);

}  // namespace
