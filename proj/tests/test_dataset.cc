// tests/test_dataset.cc

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

#include <filesystem>
#include <fstream>
#include <set>

#include "sedkit/common.h"
#include "sedkit/dataset.h"

using namespace sedkit;
namespace fs = std::filesystem;

namespace {

data::CorpusConfig SmallCorpus() {
  data::CorpusConfig cfg;
  cfg.synth.classes = 3;
  cfg.synth.clip_seconds = 1.0;
  cfg.synth.sample_rate = 8000;
  cfg.synth.min_duration_s = 0.2;
  cfg.synth.max_duration_s = 0.6;
  cfg.synth.label_frames = 15;
  cfg.synth.label_hop_s = 1.0 / 15;
  cfg.n_strong = 8;
  cfg.n_weak = 8;
  cfg.n_unlabeled = 16;
  cfg.n_val = 4;
  cfg.n_test = 4;
  return cfg;
}

}  // namespace

TEST_SUITE("synth_clip") {
  TEST_CASE("seeded generation is deterministic") {
    data::SynthConfig cfg = SmallCorpus().synth;
    auto a = data::SynthClip(Rng(42), cfg);
    auto b = data::SynthClip(Rng(42), cfg);
    CHECK(a.waveform.samples == b.waveform.samples);
    CHECK(a.strong->grid == b.strong->grid);
    CHECK(a.weak->vec == b.weak->vec);
  }

  TEST_CASE("every event appears as a run of ones in its class row") {
    data::SynthConfig cfg = SmallCorpus().synth;
    for (uint64_t seed = 0; seed < 50; ++seed) {
      auto clip = data::SynthClip(Rng(seed), cfg);
      for (int c = 0; c < cfg.classes; ++c) {
        for (const Interval &e : clip.events->by_class[c]) {
          // Frames whose center lies inside the event, away from the
          // boundary rounding, must be active.
          for (int t = 0; t < cfg.label_frames; ++t) {
            const double center = (t + 0.5) * cfg.label_hop_s;
            if (center >= e.onset + cfg.label_hop_s &&
                center < e.offset - cfg.label_hop_s)
              CHECK(clip.strong->at(t, c) == 1);
          }
        }
      }
    }
  }

  TEST_CASE("weak label is the column OR of the strong grid") {
    data::SynthConfig cfg = SmallCorpus().synth;
    for (uint64_t seed = 100; seed < 130; ++seed) {
      auto clip = data::SynthClip(Rng(seed), cfg);
      CHECK(clip.weak->vec == data::WeakFromStrong(*clip.strong).vec);
    }
  }

  TEST_CASE("event intervals stay inside the clip") {
    data::SynthConfig cfg = SmallCorpus().synth;
    for (uint64_t seed = 200; seed < 260; ++seed) {
      auto clip = data::SynthClip(Rng(seed), cfg);
      for (int c = 0; c < cfg.classes; ++c)
        for (const Interval &e : clip.events->by_class[c]) {
          CHECK(e.onset >= 0.0);
          CHECK(e.offset <= cfg.clip_seconds + 1e-9);
          CHECK(e.onset < e.offset);
        }
    }
  }
}

TEST_SUITE("weaken_strip") {
  TEST_CASE("weaken keeps the OR of the strong grid") {
    auto clip = data::SynthClip(Rng(7), SmallCorpus().synth);
    auto weak = data::Weaken(clip);
    CHECK(weak.kind == data::SupervisionKind::kWeak);
    CHECK(!weak.strong.has_value());
    CHECK(weak.weak->vec == data::WeakFromStrong(*clip.strong).vec);
    CHECK(weak.waveform.samples == clip.waveform.samples);
    CHECK(weak.events.has_value());  // private ground truth retained
  }

  TEST_CASE("strip removes all labels and keeps the waveform") {
    auto clip = data::SynthClip(Rng(8), SmallCorpus().synth);
    auto bare = data::Strip(clip);
    CHECK(bare.kind == data::SupervisionKind::kUnlabeled);
    CHECK(!bare.strong.has_value());
    CHECK(!bare.weak.has_value());
    CHECK(bare.waveform.samples == clip.waveform.samples);
  }

  TEST_CASE("wrong input kind raises") {
    auto clip = data::Strip(data::SynthClip(Rng(9), SmallCorpus().synth));
    CHECK_THROWS_AS(data::Weaken(clip), DataError);
    CHECK_THROWS_AS(data::Strip(clip), DataError);
  }
}

TEST_SUITE("corpus") {
  TEST_CASE("generation is byte-reproducible") {
    auto cfg = SmallCorpus();
    auto a = data::SynthCorpus(11, cfg);
    auto b = data::SynthCorpus(11, cfg);
    REQUIRE(a.train.clips.size() == b.train.clips.size());
    for (size_t i = 0; i < a.train.clips.size(); ++i) {
      CHECK(a.train.clips[i].waveform.samples ==
            b.train.clips[i].waveform.samples);
      CHECK(a.train.clips[i].kind == b.train.clips[i].kind);
    }
  }

  TEST_CASE("pools have the configured sizes and kinds") {
    auto cfg = SmallCorpus();
    auto corpus = data::SynthCorpus(12, cfg);
    CHECK(corpus.train.IndicesOfKind(data::SupervisionKind::kStrong).size() == 8);
    CHECK(corpus.train.IndicesOfKind(data::SupervisionKind::kWeak).size() == 8);
    CHECK(corpus.train.IndicesOfKind(data::SupervisionKind::kUnlabeled).size() ==
          16);
    CHECK(corpus.val.clips.size() == 4);
    CHECK(corpus.test.clips.size() == 4);
    for (const auto &clip : corpus.train.clips) data::ValidateClip(clip);
  }
}

TEST_SUITE("dataset_io") {
  TEST_CASE("save then load preserves labels and clip counts") {
    const std::string dir = "test_dataset_io";
    fs::remove_all(dir);
    auto cfg = SmallCorpus();
    auto corpus = data::SynthCorpus(21, cfg);
    data::SaveCorpus(dir, corpus, /*use_ssf=*/false);
    auto loaded = data::LoadCorpus(dir);

    REQUIRE(loaded.train.clips.size() == corpus.train.clips.size());
    for (size_t i = 0; i < corpus.train.clips.size(); ++i) {
      const auto &a = corpus.train.clips[i];
      const auto &b = loaded.train.clips[i];
      CHECK(a.id == b.id);
      CHECK(a.kind == b.kind);
      if (a.weak) CHECK(a.weak->vec == b.weak->vec);
      if (a.strong) CHECK(a.strong->grid == b.strong->grid);
      REQUIRE(b.events.has_value());
      for (int c = 0; c < cfg.synth.classes; ++c) {
        REQUIRE(a.events->by_class[c].size() == b.events->by_class[c].size());
        for (size_t e = 0; e < a.events->by_class[c].size(); ++e) {
          CHECK(a.events->by_class[c][e].onset ==
                b.events->by_class[c][e].onset);
          CHECK(a.events->by_class[c][e].offset ==
                b.events->by_class[c][e].offset);
        }
      }
    }
    fs::remove_all(dir);
  }

  TEST_CASE("ssf format round trips waveforms bit-exactly") {
    const std::string dir = "test_dataset_ssf";
    fs::remove_all(dir);
    auto cfg = SmallCorpus();
    cfg.n_strong = 2;
    cfg.n_weak = 2;
    cfg.n_unlabeled = 4;
    cfg.n_val = 1;
    cfg.n_test = 1;
    auto corpus = data::SynthCorpus(22, cfg);
    data::SaveCorpus(dir, corpus, /*use_ssf=*/true);
    auto loaded = data::LoadCorpus(dir);
    for (size_t i = 0; i < corpus.train.clips.size(); ++i)
      CHECK(loaded.train.clips[i].waveform.samples ==
            corpus.train.clips[i].waveform.samples);
    fs::remove_all(dir);
  }

  TEST_CASE("malformed sidecar line reports its line number") {
    const std::string dir = "test_dataset_bad";
    fs::remove_all(dir);
    auto cfg = SmallCorpus();
    cfg.n_strong = 2;
    cfg.n_weak = 2;
    cfg.n_unlabeled = 4;
    cfg.n_val = 1;
    cfg.n_test = 1;
    data::SaveCorpus(dir, data::SynthCorpus(23, cfg), false);
    {
      std::ofstream bad(fs::path(dir) / "train" / "labels.jsonl",
                        std::ios::app);
      bad << "{this is not json\n";
    }
    try {
      data::LoadCorpus(dir);
      FAIL("expected DataError");
    } catch (const DataError &e) {
      CHECK(std::string(e.what()).find("line 9") != std::string::npos);
    }
    fs::remove_all(dir);
  }

  TEST_CASE("checksum mismatch is detected") {
    const std::string dir = "test_dataset_crc";
    fs::remove_all(dir);
    auto cfg = SmallCorpus();
    cfg.n_strong = 2;
    cfg.n_weak = 2;
    cfg.n_unlabeled = 4;
    cfg.n_val = 1;
    cfg.n_test = 1;
    auto corpus = data::SynthCorpus(24, cfg);
    data::SaveCorpus(dir, corpus, false);
    // Corrupt one clip on disk.
    WriteWav((fs::path(dir) / "train" / "clips" / "strong-0000.wav").string(),
             corpus.train.clips[1].waveform);
    CHECK_THROWS_AS(data::LoadCorpus(dir), DataError);
    fs::remove_all(dir);
  }
}

TEST_SUITE("batch_sampler") {
  TEST_CASE("composition (6,6,12) yields batches of 24") {
    auto cfg = SmallCorpus();
    cfg.n_strong = 12;
    cfg.n_weak = 12;
    cfg.n_unlabeled = 24;
    auto corpus = data::SynthCorpus(31, cfg);
    data::BatchSampler sampler(corpus.train, {6, 6, 12}, 1);
    auto batch = sampler.NextBatch();
    CHECK(batch.indices.size() == 24);
    for (int i = 0; i < 6; ++i)
      CHECK(corpus.train.clips[batch.indices[i]].kind ==
            data::SupervisionKind::kStrong);
    for (int i = 6; i < 12; ++i)
      CHECK(corpus.train.clips[batch.indices[i]].kind ==
            data::SupervisionKind::kWeak);
    for (int i = 12; i < 24; ++i)
      CHECK(corpus.train.clips[batch.indices[i]].kind ==
            data::SupervisionKind::kUnlabeled);
  }

  TEST_CASE("desk composition (2,2,4) yields batches of 8") {
    auto corpus = data::SynthCorpus(32, SmallCorpus());
    data::BatchSampler sampler(corpus.train, {2, 2, 4}, 1);
    CHECK(sampler.NextBatch().indices.size() == 8);
  }

  TEST_CASE("each strong clip appears exactly once per epoch") {
    auto corpus = data::SynthCorpus(33, SmallCorpus());  // 8 strong, batch 2
    data::BatchSampler sampler(corpus.train, {2, 2, 4}, 9);
    CHECK(sampler.steps_per_epoch() == 4);
    for (int epoch = 0; epoch < 3; ++epoch) {
      sampler.StartEpoch(epoch);
      std::multiset<int> seen;
      for (int step = 0; step < 4; ++step) {
        auto batch = sampler.NextBatch();
        seen.insert(batch.indices[0]);
        seen.insert(batch.indices[1]);
      }
      CHECK(seen.size() == 8);
      for (int idx : seen) CHECK(seen.count(idx) == 1);
    }
  }

  TEST_CASE("exhausted pool wraps with a reshuffle and is counted") {
    auto cfg = SmallCorpus();
    cfg.n_unlabeled = 5;  // quota 4 -> wraps mid-epoch
    auto corpus = data::SynthCorpus(34, cfg);
    data::BatchSampler sampler(corpus.train, {2, 2, 4}, 3);
    sampler.StartEpoch(0);
    for (int step = 0; step < sampler.steps_per_epoch(); ++step)
      sampler.NextBatch();
    CHECK(sampler.wrap_count() > 0);
  }

  TEST_CASE("pool smaller than its quota raises") {
    auto cfg = SmallCorpus();
    cfg.n_weak = 1;
    auto corpus = data::SynthCorpus(35, cfg);
    CHECK_THROWS_AS(data::BatchSampler(corpus.train, {2, 2, 4}, 1), DataError);
  }
}
