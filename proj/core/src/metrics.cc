// core/src/metrics.cc

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

#include "sedkit/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>

#include "sedkit/common.h"

namespace sedkit {
namespace metrics {

int MedianKernel(double duration_s, double frame_hop_s) {
  SEDKIT_CHECK(duration_s > 0 && frame_hop_s > 0, ConfigError,
               "median kernel: durations must be positive");
  const double v = duration_s / frame_hop_s;
  const long k = 2 * std::lround((v - 1.0) / 2.0) + 1;
  return std::max(1L, k);
}

std::vector<uint8_t> MedianFilter(const float *strong, int frames, int classes,
                                  double duration_s, double frame_hop_s) {
  const int k = MedianKernel(duration_s, frame_hop_s);
  const int half = k / 2;
  std::vector<uint8_t> bin(size_t(frames) * classes);
  for (int64_t i = 0; i < int64_t(frames) * classes; ++i)
    bin[i] = strong[i] > 0.5f ? 1 : 0;
  if (k == 1) return bin;

  std::vector<uint8_t> out(size_t(frames) * classes);
  for (int c = 0; c < classes; ++c) {
    for (int t = 0; t < frames; ++t) {
      int ones = 0;
      for (int d = -half; d <= half; ++d) {
        const int idx = std::clamp(t + d, 0, frames - 1);  // replicate pad
        ones += bin[size_t(idx) * classes + c];
      }
      out[size_t(t) * classes + c] = 2 * ones > k ? 1 : 0;
    }
  }
  return out;
}

EventList DecodeEvents(const uint8_t *binary, int frames, int classes,
                       double frame_hop_s) {
  EventList events(classes);
  for (int c = 0; c < classes; ++c) {
    int run_start = -1;
    for (int t = 0; t <= frames; ++t) {
      const bool on = t < frames && binary[size_t(t) * classes + c] != 0;
      if (on && run_start < 0) run_start = t;
      if (!on && run_start >= 0) {
        events.Add(c, run_start * frame_hop_s, t * frame_hop_s);
        run_start = -1;
      }
    }
  }
  return events;
}

double MetricReport::Precision(int c) const {
  const auto &k = per_class[c];
  return k.tp + k.fp > 0 ? static_cast<double>(k.tp) / (k.tp + k.fp) : 0.0;
}

double MetricReport::Recall(int c) const {
  const auto &k = per_class[c];
  return k.tp + k.fn > 0 ? static_cast<double>(k.tp) / (k.tp + k.fn) : 0.0;
}

double MetricReport::F1(int c) const {
  const double p = Precision(c), r = Recall(c);
  return p + r > 0 ? 2.0 * p * r / (p + r) : 0.0;
}

std::string MetricReport::TextTable() const {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof(line), "%-7s %8s %8s %8s %9s %8s %8s\n", "class",
                "TP", "FP", "FN", "precision", "recall", "F1");
  out += line;
  for (size_t c = 0; c < per_class.size(); ++c) {
    std::snprintf(line, sizeof(line),
                  "%-7zu %8lld %8lld %8lld %9.4f %8.4f %8.4f\n", c,
                  static_cast<long long>(per_class[c].tp),
                  static_cast<long long>(per_class[c].fp),
                  static_cast<long long>(per_class[c].fn), Precision(c),
                  Recall(c), F1(c));
    out += line;
  }
  std::snprintf(line, sizeof(line), "macro F1 over %d scored classes: %.4f\n",
                classes_scored, macro_f1);
  out += line;
  return out;
}

namespace {

bool Compatible(const Interval &ref, const Interval &est, double collar) {
  const double offset_collar = std::max(collar, 0.2 * ref.length());
  return std::abs(est.onset - ref.onset) <= collar &&
         std::abs(est.offset - ref.offset) <= offset_collar;
}

std::vector<Interval> SortedByOnset(const std::vector<Interval> &v) {
  const bool sorted = std::is_sorted(
      v.begin(), v.end(),
      [](const Interval &a, const Interval &b) { return a.onset < b.onset; });
  if (sorted) return v;
  std::cerr << "collar_f1: unsorted event list, sorting\n";
  std::vector<Interval> copy = v;
  std::sort(copy.begin(), copy.end(),
            [](const Interval &a, const Interval &b) { return a.onset < b.onset; });
  return copy;
}

// Kuhn's augmenting-path maximum bipartite matching.
bool TryAugment(int r, const std::vector<std::vector<int>> &adj,
                std::vector<int> *match_est, std::vector<uint8_t> *visited) {
  for (int e : adj[r]) {
    if ((*visited)[e]) continue;
    (*visited)[e] = 1;
    if ((*match_est)[e] < 0 ||
        TryAugment((*match_est)[e], adj, match_est, visited)) {
      (*match_est)[e] = r;
      return true;
    }
  }
  return false;
}

}  // namespace

CollarScorer::CollarScorer(int classes, double onset_collar)
    : classes_(classes), collar_(onset_collar), counts_(classes),
      active_(classes, 0) {}

void CollarScorer::Add(const EventList &ref, const EventList &est) {
  SEDKIT_CHECK(ref.classes() == classes_ && est.classes() == classes_,
               DataError, "collar_f1: class count mismatch");
  for (int c = 0; c < classes_; ++c) {
    const std::vector<Interval> refs = SortedByOnset(ref.by_class[c]);
    const std::vector<Interval> ests = SortedByOnset(est.by_class[c]);
    if (!refs.empty() || !ests.empty()) active_[c] = 1;

    std::vector<uint8_t> est_used(ests.size(), 0);
    int64_t tp = 0;
    for (const Interval &r : refs) {
      for (size_t e = 0; e < ests.size(); ++e) {
        if (est_used[e]) continue;
        if (Compatible(r, ests[e], collar_)) {
          est_used[e] = 1;
          ++tp;
          break;
        }
      }
    }
    counts_[c].tp += tp;
    counts_[c].fp += static_cast<int64_t>(ests.size()) - tp;
    counts_[c].fn += static_cast<int64_t>(refs.size()) - tp;
  }
}

MetricReport CollarScorer::Report() const {
  MetricReport report;
  report.per_class = counts_;
  double sum = 0.0;
  int n = 0;
  for (int c = 0; c < classes_; ++c) {
    if (!active_[c]) continue;
    sum += report.F1(c);
    ++n;
  }
  report.classes_scored = n;
  report.macro_f1 = n > 0 ? sum / n : 0.0;
  return report;
}

MetricReport CollarF1(const EventList &ref, const EventList &est,
                      double onset_collar) {
  CollarScorer scorer(ref.classes(), onset_collar);
  scorer.Add(ref, est);
  return scorer.Report();
}

MetricReport CollarF1Exhaustive(const EventList &ref, const EventList &est,
                                double onset_collar) {
  MetricReport report;
  const int classes = ref.classes();
  report.per_class.resize(classes);
  double sum = 0.0;
  int n = 0;
  for (int c = 0; c < classes; ++c) {
    const auto &refs = ref.by_class[c];
    const auto &ests = est.by_class[c];
    std::vector<std::vector<int>> adj(refs.size());
    for (size_t r = 0; r < refs.size(); ++r)
      for (size_t e = 0; e < ests.size(); ++e)
        if (Compatible(refs[r], ests[e], onset_collar))
          adj[r].push_back(static_cast<int>(e));
    std::vector<int> match_est(ests.size(), -1);
    int64_t tp = 0;
    for (size_t r = 0; r < refs.size(); ++r) {
      std::vector<uint8_t> visited(ests.size(), 0);
      if (TryAugment(static_cast<int>(r), adj, &match_est, &visited)) ++tp;
    }
    report.per_class[c].tp = tp;
    report.per_class[c].fp = static_cast<int64_t>(ests.size()) - tp;
    report.per_class[c].fn = static_cast<int64_t>(refs.size()) - tp;
    if (!refs.empty() || !ests.empty()) {
      sum += report.F1(c);
      ++n;
    }
  }
  report.classes_scored = n;
  report.macro_f1 = n > 0 ? sum / n : 0.0;
  return report;
}

}  // namespace metrics
}  // namespace sedkit
