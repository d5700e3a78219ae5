// core/include/sedkit/augment.h

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

#ifndef SEDKIT_AUGMENT_H_
#define SEDKIT_AUGMENT_H_

#include <optional>
#include <string>
#include <vector>

#include "sedkit/labels.h"
#include "sedkit/mel.h"
#include "sedkit/rng.h"
#include "sedkit/wave.h"

namespace sedkit {
namespace aug {

enum class TransformId {
  kSpeed,
  kTimeShift,
  kTimeStretch,
  kPitchShift,
  kDrc,
  kTimeMask,
  kFreqMask,
  kMixup
};
inline constexpr int kNumTransforms = 8;

std::vector<TransformId> AllTransforms();
const char *ToString(TransformId id);
TransformId TransformIdFromString(const std::string &s);
// Masks act on features; everything else acts on the waveform.
bool IsWaveformTransform(TransformId id);

enum class ScaleMode { kFixed, kRandomUpperBound };

struct ScaleScheme {
  ScaleMode mode = ScaleMode::kRandomUpperBound;
  int global_scale = 5;  // 1..10
};

// Magnitude ladders (10 integer scales per transform).
double SpeedFactor(int scale);      // 1.05 .. 1.50, step 0.05
double PitchSemitones(int scale);   // 0.5 .. 5.0, step 0.5
int MaskUnits(int scale);           // 1 .. 10 masking units
// Generic view of the ladder; returns 0 for the fixed-scale transforms
// (TimeShift, Drc, Mixup) whose distortion does not depend on the scale.
double ScaleToMagnitude(TransformId id, int scale);

// Outcomes of the random draws a step makes, recorded for replay, label
// transport and the policy log.
struct StepDraws {
  bool reciprocal = false;       // speed / time stretch
  bool negate = false;           // pitch shift
  double factor = 0.0;           // effective speed/stretch factor or semitones
  double shift_fraction = 0.0;   // time shift
  int drc_mode = -1;             // drc preset index
  std::vector<int> mask_starts;  // masks
  int partner = -1;              // mixup partner (batch position)
};

struct PolicyStep {
  TransformId id = TransformId::kSpeed;
  int scale = 1;
  uint64_t rng_seed = 0;  // stream all of this step's draws derive from
  StepDraws draws;        // filled when the step is applied
};

// Ordered steps applied to one clip in one epoch. Replaying a policy (same
// seeds) reproduces bit-identical output.
struct AugmentPolicy {
  uint64_t seed = 0;
  std::vector<PolicyStep> steps;
};

// Draws P steps uniformly over `enabled` (pass transforms in canonical
// order for reproducibility); scale per scheme.
AugmentPolicy SamplePolicy(Rng *rng, int p, const ScaleScheme &scheme,
                           const std::vector<TransformId> &enabled);

// --- waveform transforms -------------------------------------------------

// Playback-speed change: resample by 1/factor then pad/crop to clip_samples.
Waveform Speed(const Waveform &w, double factor, int64_t clip_samples);

// Circular roll left by round(fraction * len) samples.
Waveform TimeShiftBy(const Waveform &w, double fraction);

// Phase-vocoder stretch preserving pitch; output padded/cropped to
// clip_samples. Analysis window/hop come from the feature config.
Waveform TimeStretch(const Waveform &w, double factor,
                     const dsp::FeatureConfig &fc, int64_t clip_samples);

// Resample + stretch composition keeping the original length.
Waveform PitchShiftSemitones(const Waveform &w, double semitones,
                             const dsp::FeatureConfig &fc);

struct DrcPreset {
  double threshold_db;
  double ratio;
  double attack_ms;
  double release_ms;
};
// Four presets, gentle to heavy; makeup gain 0 dB.
const DrcPreset &DrcMode(int mode);
Waveform Drc(const Waveform &w, int mode);

// --- feature transforms ---------------------------------------------------

// Masks `units` blocks of round(0.05 * T) frames (at least 1) to `fill`,
// uniform independent starts; records them in starts_out.
void TimeMask(dsp::MelSpectrogram *mel, int units, double fill, Rng *rng,
              std::vector<int> *starts_out);
// Same along the mel axis, blocks of round(0.05 * K) bins.
void FreqMask(dsp::MelSpectrogram *mel, int units, double fill, Rng *rng,
              std::vector<int> *starts_out);

// --- mixup ----------------------------------------------------------------

// Sum of clips (no rescaling), labels OR'd; the output supervision kind is
// the weaker of the parents'.
data::LabeledClip Mixup(const data::LabeledClip &a, const data::LabeledClip &b);

// --- label / prediction transport ------------------------------------------

// Frame index map at the label resolution: out[j] = in[map[j]], map -1 means
// a zero row. Identity for transforms that do not move time.
std::vector<int> TransportIndexMap(TransformId id, const StepDraws &draws,
                                   int frames);

// Maps a frames x classes grid (labels or predictions) through one
// transform. Mixup needs the partner grid: both are binarized at 0.5 and
// OR'd. This is the per-step reference transport of the consistency loss.
std::vector<float> Transport(TransformId id, const StepDraws &draws,
                             int frames, int classes,
                             const std::vector<float> &p,
                             const std::vector<float> *mixup_partner = nullptr);

// --- policy application ----------------------------------------------------

struct AugmentContext {
  dsp::FeatureConfig feature;
  int label_frames = 0;
  double label_hop_s = 0.0;
  // Literal label reading: time-warped views keep their parent's labels
  // unchanged instead of transported ones.
  bool inherit_labels = false;
};

// One entry per applied step, for mapping reference predictions into the
// view's time base.
struct TransportStep {
  TransformId id;
  StepDraws draws;
  bool is_mixup = false;
  int partner_pos = -1;
};

struct AugmentedView {
  Waveform waveform;  // after the waveform-domain steps, at clip length
  dsp::MelSpectrogram features;
  data::SupervisionKind kind = data::SupervisionKind::kUnlabeled;
  std::optional<data::StrongLabel> strong;  // transported
  std::optional<data::WeakLabel> weak;
  AugmentPolicy policy;  // with draws filled
  int parent_pos = -1;
  std::vector<TransportStep> transport;
};

// Applies a policy to batch[pos]: waveform steps in policy order, feature
// extraction, then feature steps. Mixup partners are other batch members
// (un-augmented). Deterministic given the policy seeds.
AugmentedView ApplyPolicy(const std::vector<const data::LabeledClip *> &batch,
                          int pos, const AugmentPolicy &policy,
                          const AugmentContext &ctx);

}  // namespace aug
}  // namespace sedkit

#endif  // SEDKIT_AUGMENT_H_
