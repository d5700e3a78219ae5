// core/include/sedkit/metrics.h

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

#ifndef SEDKIT_METRICS_H_
#define SEDKIT_METRICS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sedkit/events.h"

namespace sedkit {
namespace metrics {

// Kernel length: nearest odd integer to duration/hop, at least 1 (ties go
// up).
int MedianKernel(double duration_s, double frame_hop_s);

// Binarize at 0.5, then per class apply a sliding binary median
// (majority vote) with replicate padding at the edges.
std::vector<uint8_t> MedianFilter(const float *strong, int frames, int classes,
                                  double duration_s, double frame_hop_s);

// Each maximal run of 1s in class c becomes the event
// (start * hop, (end + 1) * hop).
EventList DecodeEvents(const uint8_t *binary, int frames, int classes,
                       double frame_hop_s);

struct ClassCounts {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t fn = 0;
};

struct MetricReport {
  std::vector<ClassCounts> per_class;
  double macro_f1 = 0.0;
  int classes_scored = 0;  // classes with any reference or estimate activity

  double Precision(int c) const;
  double Recall(int c) const;
  double F1(int c) const;  // 2PR/(P+R), 0/0 -> 0
  std::string TextTable() const;
};

// Event-based collar matching: onsets within onset_collar, offsets within
// max(onset_collar, 0.2 * reference length). One-to-one greedy matching in
// ascending reference-onset order, taking the earliest-onset unmatched
// compatible estimate. Accumulates global TP/FP/FN per class across clips.
class CollarScorer {
 public:
  explicit CollarScorer(int classes, double onset_collar = 0.2);
  void Add(const EventList &ref, const EventList &est);
  MetricReport Report() const;

 private:
  int classes_;
  double collar_;
  std::vector<ClassCounts> counts_;
  std::vector<uint8_t> active_;
};

MetricReport CollarF1(const EventList &ref, const EventList &est,
                      double onset_collar = 0.2);

// Cross-check matcher: maximum bipartite matching over the same
// compatibility relation (optimal TP count). Intended for small instances.
MetricReport CollarF1Exhaustive(const EventList &ref, const EventList &est,
                                double onset_collar = 0.2);

}  // namespace metrics
}  // namespace sedkit

#endif  // SEDKIT_METRICS_H_
