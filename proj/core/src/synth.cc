// core/src/synth.cc

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

#include "sedkit/synth.h"

#include <cmath>

#include "sedkit/common.h"

namespace sedkit {
namespace data {

namespace {

constexpr double kTwoPi = 6.283185307179586;

double DbToAmp(double db) { return std::pow(10.0, db / 20.0); }

// Paul Kellet's three-pole pink noise approximation over white gaussian
// input, then normalized to the target RMS.
std::vector<double> PinkNoise(Rng *rng, int64_t n, double target_rms) {
  std::vector<double> out(n);
  double b0 = 0, b1 = 0, b2 = 0;
  for (int64_t i = 0; i < n; ++i) {
    const double white = rng->Gaussian();
    b0 = 0.99765 * b0 + white * 0.0990460;
    b1 = 0.96300 * b1 + white * 0.2965164;
    b2 = 0.57000 * b2 + white * 1.0526913;
    out[i] = b0 + b1 + b2 + white * 0.1848;
  }
  double acc = 0;
  for (double v : out) acc += v * v;
  const double rms = std::sqrt(acc / n);
  const double gain = rms > 0 ? target_rms / rms : 0.0;
  for (double &v : out) v *= gain;
  return out;
}

// Raised-cosine on/off ramps, 10 ms each (shorter for very short events).
double Envelope(int64_t i, int64_t n, int64_t ramp) {
  if (i < ramp) return 0.5 * (1.0 - std::cos(M_PI * i / ramp));
  if (i >= n - ramp)
    return 0.5 * (1.0 - std::cos(M_PI * (n - 1 - i) / ramp));
  return 1.0;
}

// One event's samples before RMS normalization.
std::vector<double> EventSignal(Rng *rng, int cls, int64_t n, int sample_rate) {
  std::vector<double> sig(n);
  if (cls == 0 || cls % 2 == 0) {
    const double freq = 440.0 * std::pow(2.0, cls / 2.0);
    if (cls == 0) {
      const double phase0 = rng->Uniform(0.0, kTwoPi);
      for (int64_t i = 0; i < n; ++i)
        sig[i] = std::sin(phase0 + kTwoPi * freq * i / sample_rate);
    } else {
      // Band-passed noise: RBJ constant-skirt bandpass biquad, Q = 2.
      const double q = 2.0;
      const double w0 = kTwoPi * freq / sample_rate;
      const double alpha = std::sin(w0) / (2.0 * q);
      const double b0 = alpha, b2 = -alpha;
      const double a0 = 1.0 + alpha, a1 = -2.0 * std::cos(w0), a2 = 1.0 - alpha;
      double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
      for (int64_t i = 0; i < n; ++i) {
        const double x = rng->Gaussian();
        const double y = (b0 * x + b2 * x2 - a1 * y1 - a2 * y2) / a0;
        x2 = x1;
        x1 = x;
        y2 = y1;
        y1 = y;
        sig[i] = y;
      }
    }
  } else {
    // Linear upward chirp from f0 to 3*f0.
    const double f0 = 300.0 * std::pow(2.0, (cls - 1) / 2.0);
    const double f1 = 3.0 * f0;
    const double phase0 = rng->Uniform(0.0, kTwoPi);
    const double dur = static_cast<double>(n) / sample_rate;
    for (int64_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / sample_rate;
      const double phase = kTwoPi * (f0 * t + 0.5 * (f1 - f0) * t * t / dur);
      sig[i] = std::sin(phase0 + phase);
    }
  }
  return sig;
}

}  // namespace

void SynthConfig::Validate() const {
  SEDKIT_CHECK(classes >= 1 && classes <= 10, ConfigError,
               "synth: classes must be in [1, 10]");
  SEDKIT_CHECK(clip_seconds > 0 && sample_rate > 0, ConfigError,
               "synth: bad clip geometry");
  SEDKIT_CHECK(min_events >= 1 && max_events >= min_events, ConfigError,
               "synth: bad event count range");
  SEDKIT_CHECK(min_duration_s > 0 && max_duration_s >= min_duration_s,
               ConfigError, "synth: bad duration range");
  SEDKIT_CHECK(max_duration_s <= clip_seconds, ConfigError,
               "synth: events longer than the clip");
  SEDKIT_CHECK(label_frames >= 1 && label_hop_s > 0, ConfigError,
               "synth: bad label grid");
}

LabeledClip SynthClip(Rng rng, const SynthConfig &cfg) {
  cfg.Validate();
  const int64_t n = static_cast<int64_t>(
      std::llround(cfg.clip_seconds * cfg.sample_rate));

  std::vector<double> mix =
      PinkNoise(&rng, n, DbToAmp(cfg.background_dbfs));

  EventList events(cfg.classes);
  const int n_events = static_cast<int>(rng.UniformInt(cfg.min_events,
                                                       cfg.max_events));
  for (int e = 0; e < n_events; ++e) {
    const int cls = static_cast<int>(rng.UniformInt(0, cfg.classes - 1));
    const double dur = rng.Uniform(cfg.min_duration_s, cfg.max_duration_s);
    const double onset = rng.Uniform(0.0, cfg.clip_seconds - dur);
    const double level = DbToAmp(rng.Uniform(cfg.event_dbfs_lo,
                                             cfg.event_dbfs_hi));

    const int64_t start = static_cast<int64_t>(
        std::llround(onset * cfg.sample_rate));
    const int64_t len = std::min<int64_t>(
        static_cast<int64_t>(std::llround(dur * cfg.sample_rate)), n - start);
    std::vector<double> sig = EventSignal(&rng, cls, len, cfg.sample_rate);

    double acc = 0;
    for (double v : sig) acc += v * v;
    const double rms = std::sqrt(acc / len);
    const double gain = rms > 0 ? level / rms : 0.0;
    const int64_t ramp = std::min<int64_t>(len / 2, cfg.sample_rate / 100);
    for (int64_t i = 0; i < len; ++i)
      mix[start + i] += sig[i] * gain * Envelope(i, len, std::max<int64_t>(1, ramp));

    events.Add(cls, onset, onset + dur);
  }
  // Same-class overlaps merge into single ground-truth intervals, matching
  // what any decoder could recover from the grid.
  events.Normalize();

  LabeledClip clip;
  clip.kind = SupervisionKind::kStrong;
  clip.waveform.sample_rate = cfg.sample_rate;
  clip.waveform.samples.resize(n);
  for (int64_t i = 0; i < n; ++i)
    clip.waveform.samples[i] = static_cast<float>(mix[i]);
  clip.events = events;
  clip.strong = RasterizeEvents(events, cfg.label_frames, cfg.label_hop_s);
  clip.weak = WeakFromStrong(*clip.strong);
  return clip;
}

}  // namespace data
}  // namespace sedkit
