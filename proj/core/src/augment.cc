// core/src/augment.cc

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

#include "sedkit/augment.h"

#include <cmath>
#include <complex>

#include "sedkit/common.h"
#include "sedkit/resample.h"
#include "sedkit/stft.h"

namespace sedkit {
namespace aug {

std::vector<TransformId> AllTransforms() {
  return {TransformId::kSpeed,      TransformId::kTimeShift,
          TransformId::kTimeStretch, TransformId::kPitchShift,
          TransformId::kDrc,        TransformId::kTimeMask,
          TransformId::kFreqMask,   TransformId::kMixup};
}

const char *ToString(TransformId id) {
  switch (id) {
    case TransformId::kSpeed:
      return "speed";
    case TransformId::kTimeShift:
      return "time_shift";
    case TransformId::kTimeStretch:
      return "time_stretch";
    case TransformId::kPitchShift:
      return "pitch_shift";
    case TransformId::kDrc:
      return "drc";
    case TransformId::kTimeMask:
      return "time_mask";
    case TransformId::kFreqMask:
      return "freq_mask";
    default:
      return "mixup";
  }
}

TransformId TransformIdFromString(const std::string &s) {
  for (TransformId id : AllTransforms())
    if (s == ToString(id)) return id;
  throw ConfigError("unknown transform: " + s);
}

bool IsWaveformTransform(TransformId id) {
  return id != TransformId::kTimeMask && id != TransformId::kFreqMask;
}

static void CheckScale(int scale) {
  SEDKIT_CHECK(scale >= 1 && scale <= 10, ConfigError,
               "distortion scale out of [1, 10]");
}

double SpeedFactor(int scale) {
  CheckScale(scale);
  return 1.0 + 0.05 * scale;
}

double PitchSemitones(int scale) {
  CheckScale(scale);
  return 0.5 * scale;
}

int MaskUnits(int scale) {
  CheckScale(scale);
  return scale;
}

double ScaleToMagnitude(TransformId id, int scale) {
  CheckScale(scale);
  switch (id) {
    case TransformId::kSpeed:
    case TransformId::kTimeStretch:
      return SpeedFactor(scale);
    case TransformId::kPitchShift:
      return PitchSemitones(scale);
    case TransformId::kTimeMask:
    case TransformId::kFreqMask:
      return MaskUnits(scale);
    default:
      return 0.0;  // fixed-scale transforms ignore the magnitude
  }
}

AugmentPolicy SamplePolicy(Rng *rng, int p, const ScaleScheme &scheme,
                           const std::vector<TransformId> &enabled) {
  SEDKIT_CHECK(!enabled.empty(), ConfigError, "no transforms enabled");
  SEDKIT_CHECK(p >= 1, ConfigError, "policy length must be >= 1");
  SEDKIT_CHECK(scheme.global_scale >= 1 && scheme.global_scale <= 10,
               ConfigError, "global scale out of [1, 10]");
  AugmentPolicy policy;
  policy.seed = rng->NextU64();
  policy.steps.reserve(p);
  for (int i = 0; i < p; ++i) {
    PolicyStep step;
    step.id = enabled[rng->UniformInt(0, static_cast<int>(enabled.size()) - 1)];
    step.scale = scheme.mode == ScaleMode::kFixed
                     ? scheme.global_scale
                     : static_cast<int>(rng->UniformInt(1, scheme.global_scale));
    step.rng_seed = rng->NextU64();
    policy.steps.push_back(std::move(step));
  }
  return policy;
}

Waveform Speed(const Waveform &w, double factor, int64_t clip_samples) {
  return PadOrCrop(dsp::Resample(w, 1.0 / factor), clip_samples);
}

Waveform TimeShiftBy(const Waveform &w, double fraction) {
  const int64_t n = w.size();
  const int64_t shift = std::llround(fraction * n) % std::max<int64_t>(n, 1);
  Waveform out;
  out.sample_rate = w.sample_rate;
  out.samples.resize(n);
  for (int64_t i = 0; i < n; ++i)
    out.samples[i] = w.samples[(i + shift) % n];
  return out;
}

namespace {

// Standard phase vocoder: magnitudes linearly interpolated at read position
// j * rate, phases advanced by the locally estimated instantaneous
// frequency. The phase bookkeeping runs entirely on complex unit vectors:
// the per-frame rotation e^{i(advance + wrapped(dAngle - advance))} equals
// the normalized cross product S[i+1] conj(S[i]), so no trigonometry is
// needed. Input is zero-padded by one window on both sides so the
// overlap-add edges fall outside the content.
Waveform PhaseVocoder(const Waveform &w, double rate, int window, int hop) {
  Waveform padded;
  padded.sample_rate = w.sample_rate;
  padded.samples.assign(w.samples.size() + 2 * window, 0.0f);
  std::copy(w.samples.begin(), w.samples.end(), padded.samples.begin() + window);

  const dsp::ComplexSpectrogram spec = dsp::Stft(padded, window, hop);
  SEDKIT_CHECK(spec.frames >= 2, DataError, "vocoder: too few frames");
  const int bins = spec.bins;
  const int frames = spec.frames;
  const int out_frames = static_cast<int>(std::floor((frames - 2) / rate)) + 1;

  std::vector<float> mag(spec.data.size());
  for (size_t i = 0; i < spec.data.size(); ++i) {
    const auto &c = spec.data[i];
    const float re = static_cast<float>(c.real());
    const float im = static_cast<float>(c.imag());
    mag[i] = std::sqrt(re * re + im * im);
  }

  // Unit rotations between consecutive analysis frames,
  // e^{i(angle(c1) - angle(c0))} with the convention angle(0) = 0 so the
  // accumulator locks onto the signal's phase when a silent bin comes alive.
  std::vector<float> rot_re(size_t(frames - 1) * bins),
      rot_im(size_t(frames - 1) * bins);
  for (int i = 0; i + 1 < frames; ++i) {
    const std::complex<double> *c0 = spec.data.data() + size_t(i) * bins;
    const std::complex<double> *c1 = c0 + bins;
    const float *m0 = mag.data() + size_t(i) * bins;
    float *ur = rot_re.data() + size_t(i) * bins;
    float *ui = rot_im.data() + size_t(i) * bins;
    for (int k = 0; k < bins; ++k) {
      const float n0 = m0[k], n1 = m0[bins + k];
      if (n0 > 1e-30f && n1 > 1e-30f) {
        const float re = static_cast<float>(c1[k].real() * c0[k].real() +
                                            c1[k].imag() * c0[k].imag());
        const float im = static_cast<float>(c1[k].imag() * c0[k].real() -
                                            c1[k].real() * c0[k].imag());
        const float inv = 1.0f / std::sqrt(re * re + im * im);
        ur[k] = re * inv;
        ui[k] = im * inv;
      } else if (n1 > 1e-30f) {
        ur[k] = static_cast<float>(c1[k].real()) / n1;
        ui[k] = static_cast<float>(c1[k].imag()) / n1;
      } else if (n0 > 1e-30f) {
        ur[k] = static_cast<float>(c0[k].real()) / n0;
        ui[k] = static_cast<float>(-c0[k].imag()) / n0;
      } else {
        ur[k] = 1.0f;
        ui[k] = 0.0f;
      }
    }
  }

  dsp::ComplexSpectrogram out;
  out.window = window;
  out.hop = hop;
  out.bins = bins;
  out.frames = out_frames;
  out.data.resize(size_t(out_frames) * bins);

  // Phase accumulators start at the first frame's phases.
  std::vector<float> ph_re(bins), ph_im(bins);
  for (int k = 0; k < bins; ++k) {
    const float m = mag[k];
    if (m > 1e-30f) {
      ph_re[k] = static_cast<float>(spec.data[k].real()) / m;
      ph_im[k] = static_cast<float>(spec.data[k].imag()) / m;
    } else {
      ph_re[k] = 1.0f;
      ph_im[k] = 0.0f;
    }
  }

  for (int j = 0; j < out_frames; ++j) {
    const double tau = j * rate;
    const int i = static_cast<int>(tau);
    const float frac = static_cast<float>(tau - i);
    const float *m0 = mag.data() + size_t(i) * bins;
    const float *ur = rot_re.data() + size_t(i) * bins;
    const float *ui = rot_im.data() + size_t(i) * bins;
    std::complex<double> *dst = out.data.data() + size_t(j) * bins;
    for (int k = 0; k < bins; ++k) {
      const float interp = (1.0f - frac) * m0[k] + frac * m0[bins + k];
      dst[k] = std::complex<double>(interp * ph_re[k], interp * ph_im[k]);
      // Advance and renormalize the unit phase vector.
      const float re = ph_re[k] * ur[k] - ph_im[k] * ui[k];
      const float im = ph_re[k] * ui[k] + ph_im[k] * ur[k];
      const float inv = 1.0f / std::sqrt(re * re + im * im);
      ph_re[k] = re * inv;
      ph_im[k] = im * inv;
    }
  }

  Waveform synth = dsp::Istft(out, w.sample_rate);
  // Excise the content region: the leading pad scales to window / rate.
  const int64_t start = std::llround(window / rate);
  const int64_t want = std::llround(w.samples.size() / rate);
  Waveform result;
  result.sample_rate = w.sample_rate;
  result.samples.reserve(want);
  for (int64_t i = start; i < start + want && i < synth.size(); ++i)
    result.samples.push_back(synth.samples[i]);
  result.samples.resize(want, 0.0f);
  return result;
}

}  // namespace

Waveform TimeStretch(const Waveform &w, double factor,
                     const dsp::FeatureConfig &fc, int64_t clip_samples) {
  const int window = fc.window;
  const int hop = std::max(1, window / 4);
  return PadOrCrop(PhaseVocoder(w, factor, window, hop), clip_samples);
}

Waveform PitchShiftSemitones(const Waveform &w, double semitones,
                             const dsp::FeatureConfig &fc) {
  const double r = std::pow(2.0, semitones / 12.0);
  // Shrink the grid (frequencies scale by r), then stretch back to length.
  const Waveform shifted = dsp::Resample(w, 1.0 / r);
  const int window = fc.window;
  const int hop = std::max(1, window / 4);
  return PadOrCrop(PhaseVocoder(shifted, 1.0 / r, window, hop), w.size());
}

const DrcPreset &DrcMode(int mode) {
  static const DrcPreset kModes[4] = {
      {-20.0, 4.0, 5.0, 50.0},
      {-30.0, 8.0, 2.0, 100.0},
      {-15.0, 2.0, 10.0, 200.0},
      {-25.0, 6.0, 1.0, 30.0},
  };
  SEDKIT_CHECK(mode >= 0 && mode < 4, ConfigError, "drc mode out of range");
  return kModes[mode];
}

Waveform Drc(const Waveform &w, int mode) {
  const DrcPreset &m = DrcMode(mode);
  const double att = 1.0 - std::exp(-1.0 / (m.attack_ms * 1e-3 * w.sample_rate));
  const double rel = 1.0 - std::exp(-1.0 / (m.release_ms * 1e-3 * w.sample_rate));
  const double slope = 1.0 - 1.0 / m.ratio;
  const double thresh_lin = std::pow(10.0, m.threshold_db / 20.0);

  Waveform out;
  out.sample_rate = w.sample_rate;
  out.samples.resize(w.samples.size());
  double env = 0.0;
  double gain = 1.0;
  // The envelope runs per sample; the gain (the expensive transcendental)
  // is refreshed at control rate. (thresh/env)^slope equals the hard-knee
  // dB law 10^((T - env_db) slope / 20).
  constexpr size_t kControl = 16;
  for (size_t block = 0; block < w.samples.size(); block += kControl) {
    gain = env > thresh_lin ? std::pow(thresh_lin / env, slope) : 1.0;
    const size_t end = std::min(w.samples.size(), block + kControl);
    for (size_t i = block; i < end; ++i) {
      const double x = w.samples[i];
      const double level = std::abs(x);
      env += (level > env ? att : rel) * (level - env);
      out.samples[i] = static_cast<float>(x * gain);
    }
  }
  return out;
}

namespace {

int MaskBlock(int extent) {
  return std::max(1, static_cast<int>(std::lround(0.05 * extent)));
}

}  // namespace

void TimeMask(dsp::MelSpectrogram *mel, int units, double fill, Rng *rng,
              std::vector<int> *starts_out) {
  SEDKIT_CHECK(units >= 1 && units <= 10, ConfigError,
               "time mask units out of [1, 10]");
  const int block = MaskBlock(mel->frames);
  for (int u = 0; u < units; ++u) {
    const int start =
        static_cast<int>(rng->UniformInt(0, std::max(0, mel->frames - block)));
    if (starts_out) starts_out->push_back(start);
    for (int t = start; t < std::min(mel->frames, start + block); ++t)
      for (int k = 0; k < mel->bins; ++k)
        mel->at(t, k) = static_cast<float>(fill);
  }
}

void FreqMask(dsp::MelSpectrogram *mel, int units, double fill, Rng *rng,
              std::vector<int> *starts_out) {
  SEDKIT_CHECK(units >= 1 && units <= 10, ConfigError,
               "freq mask units out of [1, 10]");
  const int block = MaskBlock(mel->bins);
  for (int u = 0; u < units; ++u) {
    const int start =
        static_cast<int>(rng->UniformInt(0, std::max(0, mel->bins - block)));
    if (starts_out) starts_out->push_back(start);
    for (int t = 0; t < mel->frames; ++t)
      for (int k = start; k < std::min(mel->bins, start + block); ++k)
        mel->at(t, k) = static_cast<float>(fill);
  }
}

data::LabeledClip Mixup(const data::LabeledClip &a, const data::LabeledClip &b) {
  using data::SupervisionKind;
  SEDKIT_CHECK(a.waveform.size() == b.waveform.size(), DataError,
               "mixup: clip length mismatch");

  data::LabeledClip out;
  out.id = a.id + "+" + b.id;
  out.waveform.sample_rate = a.waveform.sample_rate;
  out.waveform.samples.resize(a.waveform.samples.size());
  // Concurrent events: plain sum, deliberately not rescaled.
  for (size_t i = 0; i < out.waveform.samples.size(); ++i)
    out.waveform.samples[i] = a.waveform.samples[i] + b.waveform.samples[i];

  const auto rank = [](SupervisionKind k) {
    return k == SupervisionKind::kStrong ? 0
           : k == SupervisionKind::kWeak ? 1
                                         : 2;
  };
  out.kind = rank(a.kind) >= rank(b.kind) ? a.kind : b.kind;

  if (out.kind == SupervisionKind::kStrong) {
    data::StrongLabel s = *a.strong;
    for (size_t i = 0; i < s.grid.size(); ++i)
      s.grid[i] = s.grid[i] | b.strong->grid[i];
    out.strong = std::move(s);
  }
  if (out.kind != SupervisionKind::kUnlabeled) {
    data::WeakLabel w = *a.weak;
    for (size_t i = 0; i < w.vec.size(); ++i) w.vec[i] |= b.weak->vec[i];
    out.weak = std::move(w);
  }
  if (a.events && b.events) {
    EventList merged = *a.events;
    for (int c = 0; c < merged.classes(); ++c)
      for (const Interval &e : b.events->by_class[c])
        merged.by_class[c].push_back(e);
    merged.Normalize();
    out.events = std::move(merged);
  }
  return out;
}

}  // namespace aug
}  // namespace sedkit
