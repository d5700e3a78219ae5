// core/src/transport.cc

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

#include <cmath>

#include "sedkit/augment.h"
#include "sedkit/common.h"

namespace sedkit {
namespace aug {

std::vector<int> TransportIndexMap(TransformId id, const StepDraws &draws,
                                   int frames) {
  std::vector<int> map(frames);
  switch (id) {
    case TransformId::kTimeShift: {
      const int shift =
          static_cast<int>(std::llround(draws.shift_fraction * frames)) %
          std::max(frames, 1);
      for (int j = 0; j < frames; ++j) map[j] = (j + shift) % frames;
      return map;
    }
    case TransformId::kSpeed:
    case TransformId::kTimeStretch: {
      // View frame j holds original content at (j + 0.5) * factor - 0.5;
      // frames beyond the shortened content read the zero padding.
      const double f = draws.factor;
      SEDKIT_CHECK(f > 0, ConfigError, "transport: missing warp factor");
      for (int j = 0; j < frames; ++j) {
        const long src = std::lround((j + 0.5) * f - 0.5);
        map[j] = (src >= 0 && src < frames) ? static_cast<int>(src) : -1;
      }
      return map;
    }
    case TransformId::kPitchShift:
    case TransformId::kDrc:
    case TransformId::kTimeMask:
    case TransformId::kFreqMask:
      for (int j = 0; j < frames; ++j) map[j] = j;
      return map;
    case TransformId::kMixup:
      throw ConfigError("transport: mixup has no index map; pass the partner");
  }
  throw ConfigError("transport: unknown transform id");
}

std::vector<float> Transport(TransformId id, const StepDraws &draws, int frames,
                             int classes, const std::vector<float> &p,
                             const std::vector<float> *mixup_partner) {
  SEDKIT_CHECK(static_cast<int64_t>(p.size()) ==
                   static_cast<int64_t>(frames) * classes,
               DataError, "transport: grid size mismatch");
  if (id == TransformId::kMixup) {
    SEDKIT_CHECK(mixup_partner != nullptr && mixup_partner->size() == p.size(),
                 DataError, "transport: mixup needs a partner grid");
    std::vector<float> out(p.size());
    for (size_t i = 0; i < p.size(); ++i)
      out[i] = (p[i] > 0.5f || (*mixup_partner)[i] > 0.5f) ? 1.0f : 0.0f;
    return out;
  }
  const std::vector<int> map = TransportIndexMap(id, draws, frames);
  std::vector<float> out(p.size(), 0.0f);
  for (int j = 0; j < frames; ++j) {
    if (map[j] < 0) continue;
    for (int c = 0; c < classes; ++c)
      out[size_t(j) * classes + c] = p[size_t(map[j]) * classes + c];
  }
  return out;
}

namespace {

data::StrongLabel TransportStrong(const data::StrongLabel &s,
                                  const std::vector<int> &map) {
  data::StrongLabel out = s;
  for (int j = 0; j < s.frames; ++j) {
    for (int c = 0; c < s.classes; ++c)
      out.at(j, c) = map[j] >= 0 ? s.at(map[j], c) : 0;
  }
  return out;
}

}  // namespace

AugmentedView ApplyPolicy(const std::vector<const data::LabeledClip *> &batch,
                          int pos, const AugmentPolicy &policy,
                          const AugmentContext &ctx) {
  using data::SupervisionKind;
  const data::LabeledClip &parent = *batch[pos];
  const int64_t clip_samples = ctx.feature.clip_samples();

  AugmentedView view;
  view.parent_pos = pos;
  view.policy = policy;
  view.kind = parent.kind;
  view.strong = parent.strong;
  view.weak = parent.weak;

  Waveform wave = PadOrCrop(parent.waveform, clip_samples);

  auto apply_warp = [&](TransformId id, const StepDraws &draws) {
    if (ctx.inherit_labels) return;
    const std::vector<int> map = TransportIndexMap(id, draws, ctx.label_frames);
    if (view.strong) {
      view.strong = TransportStrong(*view.strong, map);
      if (view.kind == SupervisionKind::kStrong)
        view.weak = data::WeakFromStrong(*view.strong);
    }
  };

  // Waveform-domain steps in policy order.
  for (PolicyStep &step : view.policy.steps) {
    if (!IsWaveformTransform(step.id)) continue;
    Rng rng(step.rng_seed);
    StepDraws &d = step.draws;
    switch (step.id) {
      case TransformId::kSpeed: {
        double factor = SpeedFactor(step.scale);
        d.reciprocal = rng.Bernoulli(0.5);
        if (d.reciprocal) factor = 1.0 / factor;
        d.factor = factor;
        wave = Speed(wave, factor, clip_samples);
        apply_warp(step.id, d);
        break;
      }
      case TransformId::kTimeShift: {
        d.shift_fraction = rng.Uniform(0.1, 0.9);
        wave = TimeShiftBy(wave, d.shift_fraction);
        apply_warp(step.id, d);
        break;
      }
      case TransformId::kTimeStretch: {
        double factor = SpeedFactor(step.scale);
        d.reciprocal = rng.Bernoulli(0.5);
        if (d.reciprocal) factor = 1.0 / factor;
        d.factor = factor;
        wave = TimeStretch(wave, factor, ctx.feature, clip_samples);
        apply_warp(step.id, d);
        break;
      }
      case TransformId::kPitchShift: {
        double semitones = PitchSemitones(step.scale);
        d.negate = rng.Bernoulli(0.5);
        if (d.negate) semitones = -semitones;
        d.factor = semitones;
        wave = PitchShiftSemitones(wave, semitones, ctx.feature);
        break;
      }
      case TransformId::kDrc: {
        d.drc_mode = static_cast<int>(rng.UniformInt(0, 3));
        wave = Drc(wave, d.drc_mode);
        break;
      }
      case TransformId::kMixup: {
        SEDKIT_CHECK(batch.size() >= 2, DataError,
                     "mixup needs at least two clips in the batch");
        int64_t r = rng.UniformInt(0, static_cast<int64_t>(batch.size()) - 2);
        d.partner = static_cast<int>(r >= pos ? r + 1 : r);
        const data::LabeledClip &partner = *batch[d.partner];

        data::LabeledClip me;
        me.kind = view.kind;
        me.strong = view.strong;
        me.weak = view.weak;
        me.waveform = wave;
        data::LabeledClip partner_padded = partner;
        partner_padded.waveform = PadOrCrop(partner.waveform, clip_samples);
        data::LabeledClip mixed = Mixup(me, partner_padded);
        wave = std::move(mixed.waveform);
        view.kind = mixed.kind;
        view.strong = std::move(mixed.strong);
        view.weak = std::move(mixed.weak);
        break;
      }
      default:
        break;
    }
    view.transport.push_back({step.id, step.draws,
                              step.id == TransformId::kMixup, step.draws.partner});
  }

  view.features = dsp::LogMel(wave, ctx.feature);
  view.waveform = std::move(wave);

  // Feature-domain steps in policy order.
  for (PolicyStep &step : view.policy.steps) {
    if (IsWaveformTransform(step.id)) continue;
    Rng rng(step.rng_seed);
    const int units = MaskUnits(step.scale);
    if (step.id == TransformId::kTimeMask)
      TimeMask(&view.features, units, ctx.feature.floor_log(), &rng,
               &step.draws.mask_starts);
    else
      FreqMask(&view.features, units, ctx.feature.floor_log(), &rng,
               &step.draws.mask_starts);
    view.transport.push_back({step.id, step.draws, false, -1});
  }

  return view;
}

}  // namespace aug
}  // namespace sedkit
