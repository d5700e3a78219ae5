// core/include/sedkit/synth.h

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

#ifndef SEDKIT_SYNTH_H_
#define SEDKIT_SYNTH_H_

#include "sedkit/labels.h"
#include "sedkit/rng.h"

namespace sedkit {
namespace data {

// Synthetic clip generator: pink-noise background plus 1-3 labeled events.
// Class timbres (see docs/corpus.md for the full table):
//   class 0           tone burst at 440 Hz
//   odd classes c     upward chirp from 300 * 2^((c-1)/2) Hz to 3x
//   even classes >= 2 band-passed noise centered at 440 * 2^(c/2) Hz
struct SynthConfig {
  int classes = 4;  // at most 10
  double clip_seconds = 8.0;
  int sample_rate = 16000;
  double background_dbfs = -30.0;  // pink-noise RMS
  double event_dbfs_lo = -24.0;    // per-event RMS drawn uniformly
  double event_dbfs_hi = -12.0;
  int min_events = 1;
  int max_events = 3;
  double min_duration_s = 0.5;
  double max_duration_s = 3.0;
  // Label grid geometry (the model's output resolution).
  int label_frames = 125;
  double label_hop_s = 0.064;

  void Validate() const;
};

// Deterministic given the rng stream; returns a strongly-labeled clip whose
// grid, weak vector and event list all come from the generation parameters.
LabeledClip SynthClip(Rng rng, const SynthConfig &cfg);

}  // namespace data
}  // namespace sedkit

#endif  // SEDKIT_SYNTH_H_
