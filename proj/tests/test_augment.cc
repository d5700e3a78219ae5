// tests/test_augment.cc

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
#include <set>

#include "sedkit/augment.h"
#include "sedkit/common.h"
#include "sedkit/resample.h"
#include "sedkit/synth.h"
#include "test_util.h"

using namespace sedkit;
using namespace sedkit::testutil;

namespace {

// Small geometry so waveform transforms stay fast: 2 s at 16 kHz,
// T = 121 -> padded 124, T' = 31.
aug::AugmentContext SmallContext() {
  aug::AugmentContext ctx;
  ctx.feature.sample_rate = 16000;
  ctx.feature.window = 1024;
  ctx.feature.hop = 256;
  ctx.feature.n_mels = 64;
  ctx.feature.clip_seconds = 2.0;
  ctx.label_frames = 31;
  ctx.label_hop_s = 4.0 * 256 / 16000;
  return ctx;
}

data::SynthConfig SmallSynth() {
  data::SynthConfig cfg;
  cfg.classes = 3;
  cfg.clip_seconds = 2.0;
  cfg.min_duration_s = 0.3;
  cfg.max_duration_s = 1.0;
  cfg.label_frames = 31;
  cfg.label_hop_s = 4.0 * 256 / 16000;
  return cfg;
}

std::vector<float> GridToFloats(const data::StrongLabel &s) {
  std::vector<float> out(s.grid.size());
  for (size_t i = 0; i < s.grid.size(); ++i) out[i] = s.grid[i];
  return out;
}

}  // namespace

TEST_SUITE("scale_ladder") {
  TEST_CASE("speed ladder runs 1.05 .. 1.50 in 0.05 steps") {
    for (int s = 1; s <= 10; ++s)
      CHECK(aug::SpeedFactor(s) == doctest::Approx(1.0 + 0.05 * s));
    CHECK(aug::SpeedFactor(1) == doctest::Approx(1.05));
    CHECK(aug::SpeedFactor(10) == doctest::Approx(1.50));
    CHECK(aug::ScaleToMagnitude(aug::TransformId::kSpeed, 1) ==
          doctest::Approx(1.05));
  }

  TEST_CASE("pitch ladder runs 0.5 .. 5.0 semitones") {
    for (int s = 1; s <= 10; ++s)
      CHECK(aug::PitchSemitones(s) == doctest::Approx(0.5 * s));
    CHECK(aug::ScaleToMagnitude(aug::TransformId::kPitchShift, 10) ==
          doctest::Approx(5.0));
  }

  TEST_CASE("mask ladder counts units directly") {
    CHECK(aug::MaskUnits(3) == 3);
    CHECK(aug::ScaleToMagnitude(aug::TransformId::kTimeMask, 3) ==
          doctest::Approx(3.0));
  }

  TEST_CASE("fixed-scale transforms report magnitude 0") {
    CHECK(aug::ScaleToMagnitude(aug::TransformId::kTimeShift, 7) == 0.0);
    CHECK(aug::ScaleToMagnitude(aug::TransformId::kDrc, 7) == 0.0);
    CHECK(aug::ScaleToMagnitude(aug::TransformId::kMixup, 7) == 0.0);
  }

  TEST_CASE("scale outside [1,10] raises") {
    CHECK_THROWS_AS(aug::SpeedFactor(0), ConfigError);
    CHECK_THROWS_AS(aug::SpeedFactor(11), ConfigError);
  }
}

TEST_SUITE("sample_policy") {
  TEST_CASE("seeded draws are deterministic") {
    const auto all = aug::AllTransforms();
    aug::ScaleScheme scheme{aug::ScaleMode::kRandomUpperBound, 5};
    Rng a(123), b(123);
    auto pa = aug::SamplePolicy(&a, 1, scheme, all);
    auto pb = aug::SamplePolicy(&b, 1, scheme, all);
    REQUIRE(pa.steps.size() == 1);
    CHECK(pa.steps[0].id == pb.steps[0].id);
    CHECK(pa.steps[0].scale == pb.steps[0].scale);
    CHECK(pa.steps[0].rng_seed == pb.steps[0].rng_seed);
  }

  TEST_CASE("80000 draws give each transform close to 10000") {
    const auto all = aug::AllTransforms();
    aug::ScaleScheme scheme{aug::ScaleMode::kFixed, 5};
    Rng rng(99);
    std::vector<int64_t> counts(aug::kNumTransforms, 0);
    for (int i = 0; i < 80000; ++i) {
      auto policy = aug::SamplePolicy(&rng, 1, scheme, all);
      counts[static_cast<int>(policy.steps[0].id)]++;
    }
    // Binomial: sd = sqrt(n p (1-p)) ~ 93.5; allow 8 standard deviations.
    const double sd = std::sqrt(80000.0 * (1.0 / 8) * (7.0 / 8));
    for (int64_t c : counts) CHECK(std::abs(c - 10000.0) <= 8 * sd);
  }

  TEST_CASE("fixed scheme pins the scale, random stays within the bound") {
    const auto all = aug::AllTransforms();
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
      auto p = aug::SamplePolicy(&rng, 1, {aug::ScaleMode::kFixed, 5}, all);
      CHECK(p.steps[0].scale == 5);
    }
    std::set<int> seen;
    for (int i = 0; i < 500; ++i) {
      auto p = aug::SamplePolicy(
          &rng, 1, {aug::ScaleMode::kRandomUpperBound, 5}, all);
      CHECK(p.steps[0].scale >= 1);
      CHECK(p.steps[0].scale <= 5);
      seen.insert(p.steps[0].scale);
    }
    CHECK(seen.size() == 5);
  }

  TEST_CASE("empty enabled set raises") {
    Rng rng(1);
    CHECK_THROWS_AS(
        aug::SamplePolicy(&rng, 1, {aug::ScaleMode::kFixed, 5}, {}),
        ConfigError);
  }
}

TEST_SUITE("speed") {
  TEST_CASE("resample lengths match the contract") {
    Waveform w = Silence(1.0, 16000);
    CHECK(dsp::Resample(w, 1.0 / 1.25).size() == 12800);
    CHECK(dsp::Resample(w, 1.25).size() == 20000);
  }

  TEST_CASE("speeding a sine shifts its frequency") {
    Waveform w = Sine(440.0, 2.0, 16000, 0.5);
    Waveform fast = aug::Speed(w, 1.25, w.size());
    CHECK(fast.size() == w.size());
    const double peak = DominantFrequency(fast);
    CHECK(peak == doctest::Approx(440.0 * 1.25).epsilon(0.03));
  }
}

TEST_SUITE("time_shift") {
  TEST_CASE("half rotation of [1,2,3,4]") {
    Waveform w;
    w.sample_rate = 4;
    w.samples = {1, 2, 3, 4};
    Waveform r = aug::TimeShiftBy(w, 0.5);
    CHECK(r.samples == std::vector<float>{3, 4, 1, 2});
  }

  TEST_CASE("energy is preserved exactly") {
    Waveform w = Sine(313.0, 0.5, 16000, 0.4);
    Waveform r = aug::TimeShiftBy(w, 0.37);
    double ea = 0, eb = 0;
    for (float v : w.samples) ea += double(v) * v;
    for (float v : r.samples) eb += double(v) * v;
    CHECK(ea == doctest::Approx(eb).epsilon(1e-12));
  }

  TEST_CASE("shifting by f then 1-f returns the original") {
    Waveform w;
    w.sample_rate = 100;
    w.samples.resize(100);
    for (int i = 0; i < 100; ++i) w.samples[i] = static_cast<float>(i);
    Waveform r = aug::TimeShiftBy(aug::TimeShiftBy(w, 0.3), 0.7);
    CHECK(r.samples == w.samples);
  }
}

TEST_SUITE("time_stretch") {
  TEST_CASE("factor 1 is near identity") {
    Waveform w = Sine(440.0, 1.0, 16000, 0.5);
    aug::AugmentContext ctx = SmallContext();
    Waveform r = aug::TimeStretch(w, 1.0, ctx.feature, w.size());
    double ref = 0;
    for (float v : w.samples) ref += double(v) * v;
    CHECK(RmsDiff(w, r) / std::sqrt(ref / w.size()) < 1e-3);
  }

  TEST_CASE("stretching keeps the pitch and shortens the content") {
    Waveform w = Sine(440.0, 2.0, 16000, 0.5);
    aug::AugmentContext ctx = SmallContext();
    // Raw vocoder output (before pad/crop): expect length ~ len / 1.5.
    Waveform r = aug::TimeStretch(w, 1.5, ctx.feature, w.size());
    // Content now occupies the first 2/3 of the padded clip.
    Waveform head;
    head.sample_rate = r.sample_rate;
    head.samples.assign(r.samples.begin(),
                        r.samples.begin() + static_cast<int64_t>(w.size() / 1.6));
    CHECK(DominantFrequency(head) == doctest::Approx(440.0).epsilon(0.01));
    // The tail beyond len/1.5 is padding.
    double tail = 0;
    for (int64_t i = static_cast<int64_t>(w.size() / 1.5) + ctx.feature.window;
         i < r.size(); ++i)
      tail += std::abs(static_cast<double>(r.samples[i]));
    CHECK(tail == doctest::Approx(0.0));
  }

  TEST_CASE("silence maps to silence") {
    Waveform w = Silence(1.0, 16000);
    aug::AugmentContext ctx = SmallContext();
    Waveform r = aug::TimeStretch(w, 1.3, ctx.feature, w.size());
    for (float v : r.samples) CHECK(std::abs(v) < 1e-9);
  }
}

TEST_SUITE("pitch_shift") {
  TEST_CASE("zero semitones is near identity") {
    Waveform w = Sine(440.0, 1.0, 16000, 0.5);
    aug::AugmentContext ctx = SmallContext();
    Waveform r = aug::PitchShiftSemitones(w, 0.0, ctx.feature);
    double ref = 0;
    for (float v : w.samples) ref += double(v) * v;
    CHECK(RmsDiff(w, r) / std::sqrt(ref / w.size()) < 1e-3);
  }

  TEST_CASE("composed shifts reach +12 semitones = one octave") {
    Waveform w = Sine(440.0, 1.5, 16000, 0.5);
    aug::AugmentContext ctx = SmallContext();
    Waveform r = w;
    for (int i = 0; i < 3; ++i)
      r = aug::PitchShiftSemitones(r, 4.0, ctx.feature);
    CHECK(DominantFrequency(r) == doctest::Approx(880.0).epsilon(0.05));
  }

  TEST_CASE("length is preserved exactly for every ladder value") {
    Waveform w = Sine(330.0, 1.0, 16000, 0.4);
    aug::AugmentContext ctx = SmallContext();
    for (int scale = 1; scale <= 10; ++scale) {
      const double st = aug::PitchSemitones(scale);
      CHECK(aug::PitchShiftSemitones(w, st, ctx.feature).size() == w.size());
      CHECK(aug::PitchShiftSemitones(w, -st, ctx.feature).size() == w.size());
    }
  }
}

TEST_SUITE("drc") {
  TEST_CASE("silence stays silence") {
    Waveform w = Silence(0.5, 16000);
    for (int mode = 0; mode < 4; ++mode) {
      Waveform r = aug::Drc(w, mode);
      for (float v : r.samples) CHECK(v == 0.0f);
    }
  }

  TEST_CASE("signals entirely below threshold pass through") {
    Waveform w = Sine(440.0, 0.5, 16000, 0.01);  // -40 dBFS peak
    for (int mode = 0; mode < 4; ++mode) {
      Waveform r = aug::Drc(w, mode);
      for (int64_t i = 0; i < w.size(); ++i)
        CHECK(std::abs(r.samples[i] - w.samples[i]) < 1e-6);
    }
  }

  TEST_CASE("0 dBFS square wave lands on the static curve") {
    // Mode 0: threshold -20 dB, ratio 4 => steady state -15 dBFS.
    Waveform w;
    w.sample_rate = 16000;
    w.samples.resize(16000);
    for (int64_t i = 0; i < w.size(); ++i)
      w.samples[i] = (i / 40) % 2 == 0 ? 1.0f : -1.0f;
    Waveform r = aug::Drc(w, 0);
    double level = 0;
    int64_t n = 0;
    for (int64_t i = w.size() / 2; i < w.size(); ++i, ++n)
      level += std::abs(static_cast<double>(r.samples[i]));
    const double db = 20.0 * std::log10(level / n);
    CHECK(db == doctest::Approx(-15.0).epsilon(0.07));  // +-1 dB
  }

  TEST_CASE("output peak never exceeds the input peak") {
    Waveform w = Sine(220.0, 0.5, 16000, 0.9);
    for (int mode = 0; mode < 4; ++mode)
      CHECK(PeakAbs(aug::Drc(w, mode)) <= PeakAbs(w) + 1e-9);
  }
}

TEST_SUITE("masks") {
  TEST_CASE("single time mask blanks exactly round(0.05 T) frames") {
    dsp::MelSpectrogram mel;
    mel.frames = 100;
    mel.bins = 8;
    mel.frame_hop_s = 0.016;
    mel.data.assign(800, 1.0f);
    Rng rng(5);
    std::vector<int> starts;
    aug::TimeMask(&mel, 1, -23.0, &rng, &starts);
    REQUIRE(starts.size() == 1);
    int masked = 0;
    for (int t = 0; t < 100; ++t)
      if (mel.at(t, 0) == -23.0f) ++masked;
    CHECK(masked == 5);
    for (int t = starts[0]; t < starts[0] + 5; ++t)
      for (int k = 0; k < 8; ++k) CHECK(mel.at(t, k) == -23.0f);
  }

  TEST_CASE("unmasked region is bit-identical") {
    dsp::MelSpectrogram mel;
    mel.frames = 60;
    mel.bins = 16;
    mel.frame_hop_s = 0.016;
    mel.data.resize(60 * 16);
    Rng fill(3);
    for (auto &v : mel.data) v = static_cast<float>(fill.Uniform(-5, 5));
    dsp::MelSpectrogram orig = mel;
    Rng rng(8);
    std::vector<int> starts;
    aug::TimeMask(&mel, 2, -23.0, &rng, &starts);
    const int block = 3;  // round(0.05 * 60)
    for (int t = 0; t < 60; ++t) {
      bool in_mask = false;
      for (int s : starts) in_mask = in_mask || (t >= s && t < s + block);
      for (int k = 0; k < 16; ++k) {
        if (in_mask)
          CHECK(mel.at(t, k) == -23.0f);
        else
          CHECK(mel.at(t, k) == orig.at(t, k));
      }
    }
  }

  TEST_CASE("freq mask on 64 bins blanks 3-bin bands across all frames") {
    dsp::MelSpectrogram mel;
    mel.frames = 10;
    mel.bins = 64;
    mel.frame_hop_s = 0.016;
    mel.data.assign(640, 2.0f);
    Rng rng(11);
    std::vector<int> starts;
    aug::FreqMask(&mel, 1, -23.0, &rng, &starts);
    REQUIRE(starts.size() == 1);
    for (int t = 0; t < 10; ++t)
      for (int k = 0; k < 64; ++k) {
        const bool in_mask = k >= starts[0] && k < starts[0] + 3;
        CHECK(mel.at(t, k) == (in_mask ? -23.0f : 2.0f));
      }
  }

  TEST_CASE("ten masks cover at most 10 blocks") {
    dsp::MelSpectrogram mel;
    mel.frames = 100;
    mel.bins = 4;
    mel.frame_hop_s = 0.016;
    mel.data.assign(400, 1.0f);
    Rng rng(13);
    aug::TimeMask(&mel, 10, 0.0, &rng, nullptr);
    int masked = 0;
    for (int t = 0; t < 100; ++t)
      if (mel.at(t, 0) == 0.0f) ++masked;
    CHECK(masked <= 50);
    CHECK(masked >= 5);
  }
}

TEST_SUITE("mixup") {
  TEST_CASE("weak labels OR together") {
    data::SynthConfig cfg = SmallSynth();
    auto a = data::SynthClip(Rng(1), cfg);
    auto b = data::SynthClip(Rng(2), cfg);
    a.weak->vec = {1, 0, 1};
    b.weak->vec = {0, 0, 1};
    // Rebuild strong grids consistent with the weak override.
    for (int t = 0; t < a.strong->frames; ++t)
      for (int c = 0; c < 3; ++c) {
        a.strong->at(t, c) = a.weak->vec[c];
        b.strong->at(t, c) = b.weak->vec[c];
      }
    auto m = aug::Mixup(a, b);
    CHECK(m.weak->vec == std::vector<uint8_t>{1, 0, 1});
  }

  TEST_CASE("silence with empty labels is the identity element") {
    data::SynthConfig cfg = SmallSynth();
    auto a = data::SynthClip(Rng(3), cfg);
    data::LabeledClip zero;
    zero.kind = data::SupervisionKind::kStrong;
    zero.waveform = Silence(cfg.clip_seconds, cfg.sample_rate);
    zero.strong = data::StrongLabel{};
    zero.strong->frames = a.strong->frames;
    zero.strong->classes = a.strong->classes;
    zero.strong->frame_hop_s = a.strong->frame_hop_s;
    zero.strong->grid.assign(a.strong->grid.size(), 0);
    zero.weak = data::WeakLabel{std::vector<uint8_t>(3, 0)};
    zero.events = EventList(3);
    auto m = aug::Mixup(a, zero);
    CHECK(m.kind == data::SupervisionKind::kStrong);
    CHECK(m.strong->grid == a.strong->grid);
    CHECK(m.weak->vec == a.weak->vec);
    for (int64_t i = 0; i < a.waveform.size(); ++i)
      CHECK(m.waveform.samples[i] == a.waveform.samples[i]);
  }

  TEST_CASE("no rescaling: peaks may exceed 1") {
    data::LabeledClip a, b;
    a.kind = b.kind = data::SupervisionKind::kUnlabeled;
    a.waveform = Sine(440.0, 0.1, 16000, 0.9);
    b.waveform = Sine(440.0, 0.1, 16000, 0.9);
    auto m = aug::Mixup(a, b);
    CHECK(PeakAbs(m.waveform) > 1.0);
  }

  TEST_CASE("label OR is commutative and idempotent") {
    data::SynthConfig cfg = SmallSynth();
    auto a = data::SynthClip(Rng(4), cfg);
    auto b = data::SynthClip(Rng(5), cfg);
    auto ab = aug::Mixup(a, b);
    auto ba = aug::Mixup(b, a);
    CHECK(ab.strong->grid == ba.strong->grid);
    CHECK(ab.weak->vec == ba.weak->vec);
    auto aa = aug::Mixup(a, a);
    CHECK(aa.strong->grid == a.strong->grid);
    CHECK(aa.weak->vec == a.weak->vec);
  }

  TEST_CASE("supervision kind degrades to the weaker parent") {
    data::SynthConfig cfg = SmallSynth();
    auto s = data::SynthClip(Rng(6), cfg);
    auto w = data::Weaken(data::SynthClip(Rng(7), cfg));
    auto u = data::Strip(data::SynthClip(Rng(8), cfg));
    CHECK(aug::Mixup(s, w).kind == data::SupervisionKind::kWeak);
    CHECK(aug::Mixup(s, u).kind == data::SupervisionKind::kUnlabeled);
    CHECK(aug::Mixup(s, s).kind == data::SupervisionKind::kStrong);
  }

  TEST_CASE("length mismatch raises") {
    data::LabeledClip a, b;
    a.kind = b.kind = data::SupervisionKind::kUnlabeled;
    a.waveform = Silence(1.0, 16000);
    b.waveform = Silence(0.5, 16000);
    CHECK_THROWS_AS(aug::Mixup(a, b), DataError);
  }
}

TEST_SUITE("transport") {
  TEST_CASE("identity transforms return the grid unchanged") {
    std::vector<float> p = {0.1f, 0.9f, 0.4f, 0.7f, 0.2f, 0.5f};
    for (auto id : {aug::TransformId::kPitchShift, aug::TransformId::kDrc,
                    aug::TransformId::kTimeMask, aug::TransformId::kFreqMask}) {
      aug::StepDraws d;
      CHECK(aug::Transport(id, d, 3, 2, p) == p);
    }
  }

  TEST_CASE("time shift rotates rows") {
    std::vector<float> p = {1, 2, 3, 4};  // 4 frames, 1 class
    aug::StepDraws d;
    d.shift_fraction = 0.5;
    auto out = aug::Transport(aug::TransformId::kTimeShift, d, 4, 1, p);
    CHECK(out == std::vector<float>{3, 4, 1, 2});
  }

  TEST_CASE("mixup binarizes at 0.5 then ORs") {
    std::vector<float> a = {0.7f, 0.3f};
    std::vector<float> b = {0.4f, 0.9f};
    aug::StepDraws d;
    auto out = aug::Transport(aug::TransformId::kMixup, d, 1, 2, a, &b);
    CHECK(out == std::vector<float>{1.0f, 1.0f});
  }

  TEST_CASE("speed map compresses and zero-pads the tail") {
    aug::StepDraws d;
    d.factor = 2.0;
    auto map = aug::TransportIndexMap(aug::TransformId::kSpeed, d, 8);
    CHECK(map[0] == 1);  // round(0.5*2 - 0.5)
    CHECK(map[3] == 7);
    for (int j = 4; j < 8; ++j) CHECK(map[j] == -1);
  }
}

TEST_SUITE("policy_pipeline") {
  TEST_CASE("replaying a policy is bit identical") {
    data::SynthConfig scfg = SmallSynth();
    auto clip0 = data::SynthClip(Rng(100), scfg);
    auto clip1 = data::SynthClip(Rng(101), scfg);
    std::vector<const data::LabeledClip *> batch = {&clip0, &clip1};
    aug::AugmentContext ctx = SmallContext();

    const auto all = aug::AllTransforms();
    Rng rng(55);
    for (int trial = 0; trial < 8; ++trial) {
      auto policy = aug::SamplePolicy(
          &rng, 1, {aug::ScaleMode::kRandomUpperBound, 5}, all);
      auto v1 = aug::ApplyPolicy(batch, 0, policy, ctx);
      auto v2 = aug::ApplyPolicy(batch, 0, policy, ctx);
      CHECK(v1.features.data == v2.features.data);
      CHECK(v1.kind == v2.kind);
      if (v1.strong) CHECK(v1.strong->grid == v2.strong->grid);
      if (v1.weak) CHECK(v1.weak->vec == v2.weak->vec);
    }
  }

  TEST_CASE("every view has the configured feature geometry") {
    data::SynthConfig scfg = SmallSynth();
    auto clip0 = data::SynthClip(Rng(200), scfg);
    auto clip1 = data::SynthClip(Rng(201), scfg);
    std::vector<const data::LabeledClip *> batch = {&clip0, &clip1};
    aug::AugmentContext ctx = SmallContext();
    const int expect_frames = ctx.feature.frames();

    Rng rng(77);
    for (int trial = 0; trial < 24; ++trial) {
      auto policy = aug::SamplePolicy(
          &rng, 1, {aug::ScaleMode::kRandomUpperBound, 10},
          aug::AllTransforms());
      auto view = aug::ApplyPolicy(batch, 0, policy, ctx);
      CHECK(view.features.frames == expect_frames);
      CHECK(view.features.bins == ctx.feature.n_mels);
    }
  }

  TEST_CASE("transported labels match transporting the labels directly") {
    // For each warp transform, the view's strong grid must equal
    // Transport() applied to the parent grid with the recorded draws.
    data::SynthConfig scfg = SmallSynth();
    aug::AugmentContext ctx = SmallContext();
    Rng seeder(404);
    for (auto id :
         {aug::TransformId::kSpeed, aug::TransformId::kTimeShift,
          aug::TransformId::kTimeStretch, aug::TransformId::kPitchShift,
          aug::TransformId::kDrc, aug::TransformId::kTimeMask,
          aug::TransformId::kFreqMask, aug::TransformId::kMixup}) {
      for (int draw = 0; draw < 100; ++draw) {
        auto clip0 = data::SynthClip(Rng(seeder.NextU64()), scfg);
        auto clip1 = data::SynthClip(Rng(seeder.NextU64()), scfg);
        std::vector<const data::LabeledClip *> batch = {&clip0, &clip1};

        Rng rng(seeder.NextU64());
        auto policy =
            aug::SamplePolicy(&rng, 1, {aug::ScaleMode::kRandomUpperBound, 10},
                              {id});
        auto view = aug::ApplyPolicy(batch, 0, policy, ctx);
        REQUIRE(view.strong.has_value());

        const std::vector<float> parent = GridToFloats(*clip0.strong);
        const std::vector<float> partner = GridToFloats(*clip1.strong);
        const auto expected = aug::Transport(
            id, view.policy.steps[0].draws, ctx.label_frames, scfg.classes,
            parent, &partner);
        const std::vector<float> got = GridToFloats(*view.strong);
        CHECK(got == expected);
      }
    }
  }
}
