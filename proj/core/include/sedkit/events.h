// core/include/sedkit/events.h

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

#ifndef SEDKIT_EVENTS_H_
#define SEDKIT_EVENTS_H_

#include <vector>

namespace sedkit {

struct Interval {
  double onset = 0.0;
  double offset = 0.0;
  double length() const { return offset - onset; }
};

// Per-class (onset, offset) intervals; the currency of evaluation.
struct EventList {
  std::vector<std::vector<Interval>> by_class;

  explicit EventList(int classes = 0) : by_class(classes) {}

  int classes() const { return static_cast<int>(by_class.size()); }
  void Add(int cls, double onset, double offset) {
    by_class[cls].push_back({onset, offset});
  }
  bool empty() const {
    for (const auto &v : by_class)
      if (!v.empty()) return false;
    return true;
  }

  // Sorts each class by onset and merges overlapping/touching intervals.
  void Normalize();
};

}  // namespace sedkit

#endif  // SEDKIT_EVENTS_H_
