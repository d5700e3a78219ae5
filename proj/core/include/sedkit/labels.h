// core/include/sedkit/labels.h

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

#ifndef SEDKIT_LABELS_H_
#define SEDKIT_LABELS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sedkit/events.h"
#include "sedkit/wave.h"

namespace sedkit {
namespace data {

// T' x C binary grid at the model's output frame resolution.
struct StrongLabel {
  int frames = 0;
  int classes = 0;
  double frame_hop_s = 0.0;
  std::vector<uint8_t> grid;  // row-major frames x classes

  uint8_t &at(int t, int c) { return grid[size_t(t) * classes + c]; }
  uint8_t at(int t, int c) const { return grid[size_t(t) * classes + c]; }
};

// Clip-level binary vector.
struct WeakLabel {
  std::vector<uint8_t> vec;
};

enum class SupervisionKind { kStrong, kWeak, kUnlabeled };

const char *ToString(SupervisionKind k);
SupervisionKind SupervisionKindFromString(const std::string &s);

struct LabeledClip {
  std::string id;
  Waveform waveform;
  SupervisionKind kind = SupervisionKind::kUnlabeled;
  std::optional<StrongLabel> strong;
  std::optional<WeakLabel> weak;
  // Generation ground truth; kept for evaluation even on weakened/stripped
  // clips and never read by training code.
  std::optional<EventList> events;
};

// Any-frame OR of a strong grid.
WeakLabel WeakFromStrong(const StrongLabel &s);

// Frame t is active iff the frame center (t + 0.5) * hop lies inside an
// event interval.
StrongLabel RasterizeEvents(const EventList &events, int frames, double hop_s);

// Drops labels down to the target supervision kind. Ground-truth events are
// retained privately. Inputs must be kind=Strong.
LabeledClip Weaken(const LabeledClip &clip);
LabeledClip Strip(const LabeledClip &clip);

// Checks the kind/label presence invariants; raises DataError on violation.
void ValidateClip(const LabeledClip &clip);

}  // namespace data
}  // namespace sedkit

#endif  // SEDKIT_LABELS_H_
