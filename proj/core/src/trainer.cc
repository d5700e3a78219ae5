// core/src/trainer.cc

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

#include "sedkit/trainer.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "sedkit/checkpoint.h"
#include "sedkit/common.h"

namespace sedkit {
namespace train {

namespace fs = std::filesystem;

template <typename T>
void EmaUpdate(TeacherState<T> *teacher, const std::vector<T> &student_params) {
  SEDKIT_CHECK(teacher->params.size() == student_params.size(), NumericError,
               "ema: dimension mismatch");
  const double a = teacher->ema_alpha;
  for (size_t i = 0; i < student_params.size(); ++i)
    teacher->params[i] =
        static_cast<T>(a * teacher->params[i] + (1.0 - a) * student_params[i]);
}

template void EmaUpdate<float>(TeacherState<float> *, const std::vector<float> &);
template void EmaUpdate<double>(TeacherState<double> *,
                                const std::vector<double> &);

namespace {

using nn::Tensor;
using Var = nn::Tape<float>::VarId;

Tensor<float> StrongLabelTensor(const data::StrongLabel &s) {
  Tensor<float> t({s.frames, s.classes});
  for (int64_t i = 0; i < t.numel(); ++i)
    t.data[i] = static_cast<float>(s.grid[i]);
  return t;
}

Tensor<float> WeakLabelTensor(const data::WeakLabel &w) {
  Tensor<float> t({static_cast<int>(w.vec.size())});
  for (size_t i = 0; i < w.vec.size(); ++i)
    t.data[i] = static_cast<float>(w.vec[i]);
  return t;
}

// RNG stream tags within a run.
enum RunTag : uint64_t { kTagPolicy = 0x706f6cULL };

}  // namespace

FeatureCache FeatureCache::Build(const data::Corpus &corpus,
                                 const dsp::FeatureConfig &fc,
                                 const nn::ModelConfig &mc, ThreadPool *pool) {
  FeatureCache cache;
  const double floor = fc.floor_log();
  cache.train.resize(corpus.train.clips.size());
  ParallelFor(pool, static_cast<int>(corpus.train.clips.size()), [&](int i) {
    cache.train[i] = nn::PrepareInput<float>(
        dsp::LogMel(corpus.train.clips[i].waveform, fc), mc, floor);
  });
  cache.val.resize(corpus.val.clips.size());
  ParallelFor(pool, static_cast<int>(corpus.val.clips.size()), [&](int i) {
    cache.val[i] = nn::PrepareInput<float>(
        dsp::LogMel(corpus.val.clips[i].waveform, fc), mc, floor);
  });
  return cache;
}

metrics::MetricReport EvaluateModel(
    const nn::ModelState<float> &state, const data::Dataset &ds,
    const dsp::FeatureConfig &fc, double median_filter_s, ThreadPool *pool,
    const std::vector<nn::Tensor<float>> *cached_inputs) {
  const int n = static_cast<int>(ds.clips.size());
  std::vector<EventList> decoded(n);
  const double hop = ds.label_hop_s;
  ParallelFor(pool, n, [&](int i) {
    nn::Tensor<float> input =
        cached_inputs
            ? (*cached_inputs)[i]
            : nn::PrepareInput<float>(dsp::LogMel(ds.clips[i].waveform, fc),
                                      state.config, fc.floor_log());
    auto fr = nn::Forward(state, input, /*with_grad=*/false);
    const nn::Tensor<float> &strong = fr.strong();
    const std::vector<uint8_t> filtered =
        metrics::MedianFilter(strong.ptr(), strong.dim(0), strong.dim(1),
                              median_filter_s, hop);
    decoded[i] =
        metrics::DecodeEvents(filtered.data(), strong.dim(0), strong.dim(1), hop);
  });

  metrics::CollarScorer scorer(ds.classes);
  for (int i = 0; i < n; ++i) {
    SEDKIT_CHECK(ds.clips[i].events.has_value(), DataError,
                 "evaluate: clip has no ground-truth events: " + ds.clips[i].id);
    scorer.Add(*ds.clips[i].events, decoded[i]);
  }
  return scorer.Report();
}

void WriteTrainLog(const std::string &path, const std::vector<EpochLog> &log) {
  std::ofstream os(path);
  SEDKIT_CHECK(os.good(), DataError, "cannot write training log: " + path);
  for (const EpochLog &e : log) {
    nlohmann::json rec{{"epoch", e.epoch},
                       {"lr", e.lr},
                       {"ramp", e.ramp},
                       {"loss_super", e.loss_super},
                       {"loss_unsuper", e.loss_unsuper},
                       {"loss_cr", e.loss_cr},
                       {"val_collar_f1", e.val_collar_f1}};
    os << rec.dump() << "\n";
  }
  SEDKIT_CHECK(os.good(), DataError, "training log write failed: " + path);
}

TrainResult Train(const TrainConfig &cfg, const data::Corpus &corpus,
                  ThreadPool *pool, const FeatureCache *cache) {
  TrainConfig c = cfg;
  c.schedule.total_epochs = c.epochs;
  c.feature.Validate();
  c.model.Validate();
  SEDKIT_CHECK(c.model.classes == corpus.train.classes, ConfigError,
               "model classes do not match the dataset");
  SEDKIT_CHECK(c.model.n_mels == c.feature.n_mels, ConfigError,
               "model n_mels does not match the feature config");
  const int label_frames = c.model.OutputFrames(c.feature.frames());
  SEDKIT_CHECK(label_frames == corpus.train.label_frames, ConfigError,
               "dataset label grid does not match the model output frames");

  const LossWeights weights = WeightsFor(c.method);
  const bool use_rda = UsesRda(c.method);
  const bool use_teacher = UsesTeacher(c.method);
  const int classes = c.model.classes;

  FeatureCache local_cache;
  if (cache == nullptr) {
    local_cache = FeatureCache::Build(corpus, c.feature, c.model, pool);
    cache = &local_cache;
  }

  TrainResult result;
  result.student = nn::InitModel<float>(c.model, c.seed);
  result.teacher.params = result.student.params;
  result.teacher.ema_alpha = c.ema_alpha;

  data::BatchSampler sampler(corpus.train, c.batch, c.seed);
  const int steps_per_epoch = sampler.steps_per_epoch();
  const int batch_size = c.batch.total();

  aug::AugmentContext aug_ctx;
  aug_ctx.feature = c.feature;
  aug_ctx.label_frames = label_frames;
  aug_ctx.label_hop_s = corpus.train.label_hop_s;
  aug_ctx.inherit_labels = c.inherit_labels;

  if (!c.out_dir.empty()) fs::create_directories(c.out_dir);

  for (int epoch = 0; epoch < c.epochs; ++epoch) {
    sampler.StartEpoch(epoch);
    const double lr = c.schedule.LrAt(epoch);
    const double ramp = c.schedule.RampAt(epoch);
    double sum_super = 0, sum_unsuper = 0, sum_cr = 0;

    for (int step = 0; step < steps_per_epoch; ++step) {
      const data::Batch batch = sampler.NextBatch();
      std::vector<const data::LabeledClip *> clips(batch_size);
      for (int i = 0; i < batch_size; ++i)
        clips[i] = &corpus.train.clips[batch.indices[i]];

      // Per-clip augmentation policies, keyed by (seed, epoch, clip index).
      std::vector<aug::AugmentedView> views(use_rda ? batch_size : 0);
      if (use_rda) {
        ParallelFor(pool, batch_size, [&](int i) {
          Rng rng = Rng::Keyed(c.seed, kTagPolicy, epoch,
                               static_cast<uint64_t>(batch.indices[i]));
          aug::AugmentPolicy policy =
              aug::SamplePolicy(&rng, c.policy_steps, c.scale, c.enabled);
          views[i] = aug::ApplyPolicy(clips, i, policy, aug_ctx);
        });
      }

      // Student forwards. The supervised method only needs labeled clips.
      const int fwd_orig_count =
          c.method == Method::kSupervised ? c.batch.n_strong + c.batch.n_weak
                                          : batch_size;
      std::vector<nn::ForwardResult<float>> f_orig(fwd_orig_count);
      ParallelFor(pool, fwd_orig_count, [&](int i) {
        f_orig[i] = nn::Forward(result.student,
                                cache->train[batch.indices[i]], true);
      });
      std::vector<nn::ForwardResult<float>> f_view(use_rda ? batch_size : 0);
      if (use_rda) {
        ParallelFor(pool, batch_size, [&](int i) {
          f_view[i] = nn::Forward(
              result.student,
              nn::PrepareInput<float>(views[i].features, c.model,
                                      c.feature.floor_log()),
              true);
        });
      }

      // Teacher pseudo-labels on the unaugmented originals.
      nn::ModelState<float> teacher_model;
      std::vector<nn::Prediction<float>> teacher_preds(
          use_teacher ? batch_size : 0);
      if (use_teacher) {
        teacher_model.config = c.model;
        teacher_model.params = result.teacher.params;
        ParallelFor(pool, batch_size, [&](int i) {
          auto fr = nn::Forward(teacher_model, cache->train[batch.indices[i]],
                                false);
          teacher_preds[i] = fr.prediction();
        });
      }

      // Master tape over the per-clip outputs.
      nn::Tape<float> master(true);
      std::vector<Var> o_strong(fwd_orig_count), o_weak(fwd_orig_count);
      for (int i = 0; i < fwd_orig_count; ++i) {
        o_strong[i] = master.Leaf(f_orig[i].strong(), true);
        o_weak[i] = master.Leaf(f_orig[i].weak(), true);
      }
      std::vector<Var> v_strong(f_view.size()), v_weak(f_view.size());
      for (size_t i = 0; i < f_view.size(); ++i) {
        v_strong[i] = master.Leaf(f_view[i].strong(), true);
        v_weak[i] = master.Leaf(f_view[i].weak(), true);
      }

      // Eq. 1 items: originals and, under RDA, the augmented views with
      // their transported labels.
      std::vector<std::pair<Var, Tensor<float>>> strong_items, weak_items;
      for (int i = 0; i < batch_size; ++i) {
        const data::LabeledClip &clip = *clips[i];
        if (clip.kind == data::SupervisionKind::kStrong)
          strong_items.push_back({o_strong[i], StrongLabelTensor(*clip.strong)});
        else if (clip.kind == data::SupervisionKind::kWeak &&
                 i < fwd_orig_count)
          weak_items.push_back({o_weak[i], WeakLabelTensor(*clip.weak)});
      }
      for (size_t i = 0; i < f_view.size(); ++i) {
        const aug::AugmentedView &view = views[i];
        if (view.kind == data::SupervisionKind::kStrong)
          strong_items.push_back(
              {v_strong[i], StrongLabelTensor(*view.strong)});
        else if (view.kind == data::SupervisionKind::kWeak)
          weak_items.push_back({v_weak[i], WeakLabelTensor(*view.weak)});
      }
      const Var l_super =
          SupervisedLoss<float>(&master, strong_items, weak_items,
                                static_cast<float>(c.bce_clamp));

      Var l_unsuper = -1;
      if (use_teacher) {
        std::vector<Tensor<float>> t_strong(batch_size), t_weak(batch_size);
        for (int i = 0; i < batch_size; ++i) {
          t_strong[i] = teacher_preds[i].strong;
          t_weak[i] = teacher_preds[i].weak;
        }
        l_unsuper =
            MeanTeacherLoss<float>(&master, o_strong, t_strong, o_weak, t_weak);
      } else {
        l_unsuper = master.Constant(Tensor<float>::Scalar(0));
      }

      Var l_cr = -1;
      if (weights.lambda_cr > 0 && use_rda) {
        std::vector<ConsistencyView<float>> cviews(batch_size);
        for (int i = 0; i < batch_size; ++i) {
          cviews[i] = {o_strong[i],       o_weak[i],       v_strong[i],
                       v_weak[i],         &views[i].transport, &o_strong,
                       &o_weak};
        }
        l_cr = ConsistencyLoss<float>(&master, cviews, label_frames, classes);
      } else {
        l_cr = master.Constant(Tensor<float>::Scalar(0));
      }

      const Var total = master.WeightedSum(
          {{l_super, 1.0f},
           {l_unsuper, static_cast<float>(ramp * weights.lambda_unsuper)},
           {l_cr, static_cast<float>(ramp * weights.lambda_cr)}});

      const double super_v = master.scalar(l_super);
      const double unsuper_v = master.scalar(l_unsuper);
      const double cr_v = master.scalar(l_cr);
      if (!std::isfinite(master.scalar(total)))
        throw NumericError(
            "non-finite loss at epoch " + std::to_string(epoch) + " step " +
            std::to_string(step) + " (super=" + std::to_string(super_v) +
            ", unsuper=" + std::to_string(unsuper_v) +
            ", cr=" + std::to_string(cr_v) + ")");
      sum_super += super_v;
      sum_unsuper += unsuper_v;
      sum_cr += cr_v;

      master.Backward(total);

      // Pull gradients through the per-clip tapes; reduce in batch order.
      std::vector<std::vector<float>> grads(fwd_orig_count + f_view.size());
      ParallelFor(pool, static_cast<int>(grads.size()), [&](int i) {
        const bool is_view = i >= fwd_orig_count;
        nn::ForwardResult<float> &fr =
            is_view ? f_view[i - fwd_orig_count] : f_orig[i];
        const Var sv = is_view ? v_strong[i - fwd_orig_count] : o_strong[i];
        const Var wv = is_view ? v_weak[i - fwd_orig_count] : o_weak[i];
        fr.tape->BackwardSeeded(
            {{fr.strong_var, master.grad(sv)}, {fr.weak_var, master.grad(wv)}});
        grads[i] = nn::CollectParamGrad(fr, c.model);
      });

      std::vector<float> grad(result.student.params.size(), 0.0f);
      for (const auto &g : grads)
        for (size_t k = 0; k < grad.size(); ++k) grad[k] += g[k];

      nn::AdamStep(&result.student, &result.opt, grad, lr);
      if (use_teacher) EmaUpdate(&result.teacher, result.student.params);
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.lr = lr;
    entry.ramp = ramp;
    entry.loss_super = sum_super / steps_per_epoch;
    entry.loss_unsuper = sum_unsuper / steps_per_epoch;
    entry.loss_cr = sum_cr / steps_per_epoch;
    entry.val_collar_f1 =
        EvaluateModel(result.student, corpus.val, c.feature, c.median_filter_s,
                      pool, &cache->val)
            .macro_f1;
    result.log.push_back(entry);

    if (!c.out_dir.empty() && c.checkpoint_every > 0 &&
        (epoch + 1) % c.checkpoint_every == 0) {
      nn::SaveCheckpoint((fs::path(c.out_dir) /
                          ("epoch_" + std::to_string(epoch) + ".ckpt"))
                             .string(),
                         result.student, &result.opt);
    }
  }
  result.sampler_wraps = sampler.wrap_count();

  if (!c.out_dir.empty()) {
    WriteTrainLog((fs::path(c.out_dir) / "train_log.jsonl").string(),
                  result.log);
    nn::SaveCheckpoint((fs::path(c.out_dir) / "student.ckpt").string(),
                       result.student, &result.opt);
    nn::ModelState<float> teacher_model;
    teacher_model.config = c.model;
    teacher_model.params = result.teacher.params;
    nn::SaveCheckpoint((fs::path(c.out_dir) / "teacher.ckpt").string(),
                       teacher_model);
  }
  return result;
}

}  // namespace train
}  // namespace sedkit
