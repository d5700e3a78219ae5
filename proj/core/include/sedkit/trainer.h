// core/include/sedkit/trainer.h

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

#ifndef SEDKIT_TRAINER_H_
#define SEDKIT_TRAINER_H_

#include <string>
#include <vector>

#include "sedkit/augment.h"
#include "sedkit/dataset.h"
#include "sedkit/losses.h"
#include "sedkit/metrics.h"
#include "sedkit/network.h"
#include "sedkit/schedule.h"
#include "sedkit/thread_pool.h"

namespace sedkit {
namespace train {

// Exponential moving average of the student's parameters.
template <typename T>
struct TeacherState {
  std::vector<T> params;
  double ema_alpha = 0.999;
};

// teacher <- alpha * teacher + (1 - alpha) * student, per step.
template <typename T>
void EmaUpdate(TeacherState<T> *teacher, const std::vector<T> &student_params);

struct TrainConfig {
  Method method = Method::kMtCrRda;
  uint64_t seed = 1;
  int epochs = 40;
  data::BatchComposition batch;
  aug::ScaleScheme scale;
  int policy_steps = 1;  // P
  std::vector<aug::TransformId> enabled = aug::AllTransforms();
  nn::ModelConfig model;
  dsp::FeatureConfig feature;
  double ema_alpha = 0.999;
  Schedule schedule;  // total_epochs is forced to `epochs` by Train
  bool inherit_labels = false;
  double median_filter_s = 0.45;
  double bce_clamp = 1e-7;
  int checkpoint_every = 0;   // 0 = final checkpoints only
  std::string out_dir;        // empty = nothing written to disk
};

struct EpochLog {
  int epoch = 0;
  double lr = 0, ramp = 0;
  double loss_super = 0, loss_unsuper = 0, loss_cr = 0;
  double val_collar_f1 = 0;
};

struct TrainResult {
  nn::ModelState<float> student;
  TeacherState<float> teacher;
  nn::AdamState<float> opt;
  std::vector<EpochLog> log;
  int64_t sampler_wraps = 0;
};

// Model inputs precomputed for the corpus; reusable across runs because
// featurization does not depend on the training seed.
struct FeatureCache {
  std::vector<nn::Tensor<float>> train;
  std::vector<nn::Tensor<float>> val;

  static FeatureCache Build(const data::Corpus &corpus,
                            const dsp::FeatureConfig &fc,
                            const nn::ModelConfig &mc, ThreadPool *pool);
};

// Runs the full loop: batch composition, per-clip augmentation policies,
// student/teacher forwards, the loss stack, Adam, EMA, per-epoch validation.
// Deterministic for a fixed seed regardless of worker count.
TrainResult Train(const TrainConfig &cfg, const data::Corpus &corpus,
                  ThreadPool *pool = nullptr,
                  const FeatureCache *cache = nullptr);

// Forwards every clip, median-filters, decodes events and accumulates
// global per-class counts against the ground-truth events.
metrics::MetricReport EvaluateModel(
    const nn::ModelState<float> &state, const data::Dataset &ds,
    const dsp::FeatureConfig &fc, double median_filter_s, ThreadPool *pool,
    const std::vector<nn::Tensor<float>> *cached_inputs = nullptr);

// JSON-lines log: one record per epoch with fixed fields
// {epoch, lr, ramp, loss_super, loss_unsuper, loss_cr, val_collar_f1}.
void WriteTrainLog(const std::string &path, const std::vector<EpochLog> &log);

}  // namespace train
}  // namespace sedkit

#endif  // SEDKIT_TRAINER_H_
