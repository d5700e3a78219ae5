// core/src/labels.cc

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

#include "sedkit/labels.h"

#include <algorithm>

#include "sedkit/common.h"

namespace sedkit {

void EventList::Normalize() {
  for (auto &events : by_class) {
    std::sort(events.begin(), events.end(),
              [](const Interval &a, const Interval &b) {
                return a.onset < b.onset;
              });
    std::vector<Interval> merged;
    for (const Interval &e : events) {
      if (!merged.empty() && e.onset <= merged.back().offset)
        merged.back().offset = std::max(merged.back().offset, e.offset);
      else
        merged.push_back(e);
    }
    events = std::move(merged);
  }
}

namespace data {

const char *ToString(SupervisionKind k) {
  switch (k) {
    case SupervisionKind::kStrong:
      return "strong";
    case SupervisionKind::kWeak:
      return "weak";
    default:
      return "unlabeled";
  }
}

SupervisionKind SupervisionKindFromString(const std::string &s) {
  if (s == "strong") return SupervisionKind::kStrong;
  if (s == "weak") return SupervisionKind::kWeak;
  if (s == "unlabeled") return SupervisionKind::kUnlabeled;
  throw DataError("unknown supervision kind: " + s);
}

WeakLabel WeakFromStrong(const StrongLabel &s) {
  WeakLabel w;
  w.vec.assign(s.classes, 0);
  for (int t = 0; t < s.frames; ++t)
    for (int c = 0; c < s.classes; ++c)
      if (s.at(t, c)) w.vec[c] = 1;
  return w;
}

StrongLabel RasterizeEvents(const EventList &events, int frames, double hop_s) {
  StrongLabel s;
  s.frames = frames;
  s.classes = events.classes();
  s.frame_hop_s = hop_s;
  s.grid.assign(size_t(frames) * s.classes, 0);
  for (int c = 0; c < s.classes; ++c) {
    for (const Interval &e : events.by_class[c]) {
      for (int t = 0; t < frames; ++t) {
        const double center = (t + 0.5) * hop_s;
        if (center >= e.onset && center < e.offset) s.at(t, c) = 1;
      }
    }
  }
  return s;
}

LabeledClip Weaken(const LabeledClip &clip) {
  SEDKIT_CHECK(clip.kind == SupervisionKind::kStrong, DataError,
               "weaken: input must be strongly labeled");
  LabeledClip out = clip;
  out.kind = SupervisionKind::kWeak;
  out.weak = WeakFromStrong(*clip.strong);
  out.strong.reset();
  return out;
}

LabeledClip Strip(const LabeledClip &clip) {
  SEDKIT_CHECK(clip.kind == SupervisionKind::kStrong, DataError,
               "strip: input must be strongly labeled");
  LabeledClip out = clip;
  out.kind = SupervisionKind::kUnlabeled;
  out.strong.reset();
  out.weak.reset();
  return out;
}

void ValidateClip(const LabeledClip &clip) {
  switch (clip.kind) {
    case SupervisionKind::kStrong: {
      SEDKIT_CHECK(clip.strong && clip.weak && clip.events, DataError,
                   "strong clip missing labels: " + clip.id);
      const WeakLabel derived = WeakFromStrong(*clip.strong);
      SEDKIT_CHECK(derived.vec == clip.weak->vec, DataError,
                   "weak label is not the OR of the strong grid: " + clip.id);
      break;
    }
    case SupervisionKind::kWeak:
      SEDKIT_CHECK(clip.weak && !clip.strong, DataError,
                   "weak clip label mismatch: " + clip.id);
      break;
    case SupervisionKind::kUnlabeled:
      SEDKIT_CHECK(!clip.weak && !clip.strong, DataError,
                   "unlabeled clip carries labels: " + clip.id);
      break;
  }
}

}  // namespace data
}  // namespace sedkit
