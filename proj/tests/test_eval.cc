// tests/test_eval.cc

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

#include <doctest.h>

#include <cmath>

#include "sedkit/metrics.h"
#include "sedkit/rng.h"

using namespace sedkit;

namespace {

// Brute-force run-length scanner used as the decode oracle.
EventList NaiveDecode(const std::vector<uint8_t> &grid, int frames, int classes,
                      double hop) {
  EventList events(classes);
  for (int c = 0; c < classes; ++c) {
    int t = 0;
    while (t < frames) {
      if (grid[size_t(t) * classes + c]) {
        int end = t;
        while (end < frames && grid[size_t(end) * classes + c]) ++end;
        events.Add(c, t * hop, end * hop);
        t = end;
      } else {
        ++t;
      }
    }
  }
  return events;
}

bool SameEvents(const EventList &a, const EventList &b) {
  if (a.classes() != b.classes()) return false;
  for (int c = 0; c < a.classes(); ++c) {
    if (a.by_class[c].size() != b.by_class[c].size()) return false;
    for (size_t i = 0; i < a.by_class[c].size(); ++i) {
      if (std::abs(a.by_class[c][i].onset - b.by_class[c][i].onset) > 1e-12)
        return false;
      if (std::abs(a.by_class[c][i].offset - b.by_class[c][i].offset) > 1e-12)
        return false;
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("median_filter") {
  TEST_CASE("kernel picks the nearest odd integer") {
    CHECK(metrics::MedianKernel(0.45, 0.064) == 7);   // 7.03
    CHECK(metrics::MedianKernel(0.45, 0.06375) == 7); // paper profile, 7.06
    CHECK(metrics::MedianKernel(0.064, 0.064) == 1);
    CHECK(metrics::MedianKernel(0.41, 0.064) == 7);   // 6.4 -> 7
  }

  TEST_CASE("hand case with kernel 3") {
    const std::vector<float> in = {0, 1, 0, 0, 1, 1, 1, 0};
    auto out = metrics::MedianFilter(in.data(), 8, 1, 3.0, 1.0);
    CHECK(out == std::vector<uint8_t>{0, 0, 0, 0, 1, 1, 1, 0});
  }

  TEST_CASE("all ones stay all ones") {
    const std::vector<float> in(20, 1.0f);
    auto out = metrics::MedianFilter(in.data(), 20, 1, 0.45, 0.064);
    for (uint8_t v : out) CHECK(v == 1);
  }

  TEST_CASE("kernel 1 is pure binarization") {
    const std::vector<float> in = {0.2f, 0.7f, 0.5f, 0.51f};
    auto out = metrics::MedianFilter(in.data(), 4, 1, 1.0, 1.0);
    CHECK(out == std::vector<uint8_t>{0, 1, 0, 1});
  }

  TEST_CASE("idempotence does not hold for adversarial alternating grids") {
    // Counterexample found by brute force: one majority pass over an
    // alternating pattern leaves isolated holes that a second pass fills.
    // The idempotence property is therefore narrowed to event-like grids
    // (next case); see docs/corpus.md.
    const std::vector<float> in = {1, 0, 1, 0, 1};
    auto once = metrics::MedianFilter(in.data(), 5, 1, 3.0, 1.0);
    std::vector<float> f(once.begin(), once.end());
    auto twice = metrics::MedianFilter(f.data(), 5, 1, 3.0, 1.0);
    CHECK(once != twice);
  }

  TEST_CASE("filtering twice equals filtering once on event-like grids") {
    // Narrowed corpus: grids whose runs and gaps span >= 2 frames (every
    // grid this pipeline rasterizes or decodes satisfies this; the minimum
    // event is several output frames long).
    Rng rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
      const int frames = 40;
      std::vector<float> in(frames, 0.0f);
      int t = static_cast<int>(rng.UniformInt(0, 4));
      while (t < frames) {
        const int run = static_cast<int>(rng.UniformInt(2, 9));
        for (int i = t; i < std::min(frames, t + run); ++i) in[i] = 1.0f;
        t += run + static_cast<int>(rng.UniformInt(2, 9));
      }
      auto once = metrics::MedianFilter(in.data(), frames, 1, 3.0, 1.0);
      std::vector<float> f(once.begin(), once.end());
      auto twice = metrics::MedianFilter(f.data(), frames, 1, 3.0, 1.0);
      CHECK(once == twice);
    }
  }
}

TEST_SUITE("decode_events") {
  TEST_CASE("single run maps to (start*hop, (end+1)*hop)") {
    const std::vector<uint8_t> grid = {0, 1, 1, 0};
    auto events = metrics::DecodeEvents(grid.data(), 4, 1, 0.064);
    REQUIRE(events.by_class[0].size() == 1);
    CHECK(events.by_class[0][0].onset == doctest::Approx(0.064));
    CHECK(events.by_class[0][0].offset == doctest::Approx(0.192));
  }

  TEST_CASE("all zeros decode to nothing") {
    const std::vector<uint8_t> grid(40, 0);
    auto events = metrics::DecodeEvents(grid.data(), 10, 4, 0.064);
    CHECK(events.empty());
  }

  TEST_CASE("1000 random grids agree with the brute-force scanner") {
    Rng rng(17);
    for (int trial = 0; trial < 1000; ++trial) {
      const int frames = 30, classes = 3;
      std::vector<uint8_t> grid(frames * classes);
      for (auto &v : grid) v = rng.Bernoulli(0.4) ? 1 : 0;
      auto fast = metrics::DecodeEvents(grid.data(), frames, classes, 0.05);
      auto slow = NaiveDecode(grid, frames, classes, 0.05);
      CHECK(SameEvents(fast, slow));
    }
  }
}

TEST_SUITE("collar_f1") {
  TEST_CASE("match within both collars is a true positive") {
    EventList ref(1), est(1);
    ref.Add(0, 1.0, 2.0);
    est.Add(0, 1.1, 2.1);
    auto report = metrics::CollarF1(ref, est);
    CHECK(report.per_class[0].tp == 1);
    CHECK(report.macro_f1 == doctest::Approx(1.0));
  }

  TEST_CASE("onset off by 0.3 s fails the 200 ms collar") {
    EventList ref(1), est(1);
    ref.Add(0, 1.0, 2.0);
    est.Add(0, 1.3, 2.0);
    auto report = metrics::CollarF1(ref, est);
    CHECK(report.per_class[0].tp == 0);
    CHECK(report.per_class[0].fp == 1);
    CHECK(report.per_class[0].fn == 1);
    CHECK(report.macro_f1 == doctest::Approx(0.0));
  }

  TEST_CASE("long events widen the offset collar to 20% of their length") {
    EventList ref(1), est(1);
    ref.Add(0, 0.0, 5.0);
    est.Add(0, 0.1, 5.9);  // offset diff 0.9 <= max(0.2, 1.0)
    auto report = metrics::CollarF1(ref, est);
    CHECK(report.per_class[0].tp == 1);
    CHECK(report.macro_f1 == doctest::Approx(1.0));
  }

  TEST_CASE("perfect predictions give macro F1 of 1") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
      EventList ref(4);
      for (int c = 0; c < 4; ++c) {
        double t = rng.Uniform(0.0, 2.0);
        const int n = static_cast<int>(rng.UniformInt(0, 3));
        for (int e = 0; e < n; ++e) {
          const double len = rng.Uniform(0.3, 1.5);
          ref.Add(c, t, t + len);
          t += len + rng.Uniform(0.5, 2.0);
        }
      }
      if (ref.empty()) continue;
      auto report = metrics::CollarF1(ref, ref);
      CHECK(report.macro_f1 == doctest::Approx(1.0));
    }
  }

  TEST_CASE("F1 is invariant under uniform time translation") {
    EventList ref(2), est(2);
    ref.Add(0, 1.0, 2.0);
    ref.Add(1, 3.0, 4.5);
    est.Add(0, 1.15, 2.1);
    est.Add(1, 3.4, 4.6);
    auto a = metrics::CollarF1(ref, est);
    EventList ref2(2), est2(2);
    for (int c = 0; c < 2; ++c) {
      for (auto &e : ref.by_class[c]) ref2.Add(c, e.onset + 7.0, e.offset + 7.0);
      for (auto &e : est.by_class[c]) est2.Add(c, e.onset + 7.0, e.offset + 7.0);
    }
    auto b = metrics::CollarF1(ref2, est2);
    CHECK(a.macro_f1 == doctest::Approx(b.macro_f1));
    CHECK(a.per_class[0].tp == b.per_class[0].tp);
    CHECK(a.per_class[1].tp == b.per_class[1].tp);
  }

  TEST_CASE("matching is one-to-one") {
    EventList ref(1), est(1);
    ref.Add(0, 1.0, 2.0);
    est.Add(0, 1.05, 2.05);
    est.Add(0, 1.1, 2.1);  // second candidate must become FP
    auto report = metrics::CollarF1(ref, est);
    CHECK(report.per_class[0].tp == 1);
    CHECK(report.per_class[0].fp == 1);
  }

  TEST_CASE("classes without activity are excluded from the macro average") {
    EventList ref(3), est(3);
    ref.Add(0, 1.0, 2.0);
    est.Add(0, 1.0, 2.0);
    est.Add(2, 4.0, 5.0);  // class 2 active only in the estimate
    auto report = metrics::CollarF1(ref, est);
    CHECK(report.classes_scored == 2);
    CHECK(report.macro_f1 == doctest::Approx(0.5));
  }

  TEST_CASE("greedy matches the exhaustive matcher on 500 small instances") {
    Rng rng(29);
    for (int trial = 0; trial < 500; ++trial) {
      const int classes = 3;
      EventList ref(classes), est(classes);
      for (int c = 0; c < classes; ++c) {
        double t = rng.Uniform(0.0, 1.0);
        const int n = static_cast<int>(rng.UniformInt(0, 5));
        for (int e = 0; e < n; ++e) {
          const double len = rng.Uniform(0.3, 2.0);
          if (t + len > 10.0) break;
          ref.Add(c, t, t + len);
          // Estimate: jittered copy, sometimes dropped, sometimes doubled.
          if (!rng.Bernoulli(0.2)) {
            const double on = t + rng.Uniform(-0.3, 0.3);
            const double off = t + len + rng.Uniform(-0.3, 0.3);
            if (off > on) est.Add(c, on, off);
          }
          if (rng.Bernoulli(0.15)) {
            const double on = rng.Uniform(0.0, 9.0);
            est.Add(c, on, on + rng.Uniform(0.3, 1.0));
          }
          t += len + rng.Uniform(0.5, 1.5);
        }
      }
      ref.Normalize();
      est.Normalize();
      auto greedy = metrics::CollarF1(ref, est);
      auto optimal = metrics::CollarF1Exhaustive(ref, est);
      CHECK(greedy.macro_f1 == doctest::Approx(optimal.macro_f1));
      for (int c = 0; c < classes; ++c)
        CHECK(greedy.per_class[c].tp == optimal.per_class[c].tp);
    }
  }
}
