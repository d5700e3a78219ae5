// tests/test_semisup.cc

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
#include <sstream>

#include "sedkit/losses.h"
#include "sedkit/schedule.h"
#include "sedkit/trainer.h"
#include "grad_harness.h"

using namespace sedkit;
using nn::Tensor;
using DTape = nn::Tape<double>;
using DVar = DTape::VarId;

namespace {

// Value-level wrappers over the tape builders for the hand-computed cases.
double SupervisedValue(
    const std::vector<std::pair<Tensor<double>, Tensor<double>>> &strong,
    const std::vector<std::pair<Tensor<double>, Tensor<double>>> &weak) {
  DTape tp(true);
  std::vector<std::pair<DVar, Tensor<double>>> s_items, w_items;
  for (const auto &[pred, label] : strong)
    s_items.push_back({tp.Leaf(pred, true), label});
  for (const auto &[pred, label] : weak)
    w_items.push_back({tp.Leaf(pred, true), label});
  return tp.scalar(train::SupervisedLoss<double>(&tp, s_items, w_items, 1e-7));
}

Tensor<double> Fill(std::vector<int> shape, double v) {
  Tensor<double> t(std::move(shape));
  for (auto &x : t.data) x = v;
  return t;
}

}  // namespace

TEST_SUITE("supervised_loss") {
  TEST_CASE("predicting 0.5 everywhere costs 2 ln 2") {
    // One strong clip (4x2 grid) and one weak clip (2 classes).
    Tensor<double> strong_label({4, 2});
    strong_label.data = {1, 0, 0, 1, 1, 1, 0, 0};
    Tensor<double> weak_label({2});
    weak_label.data = {1, 0};
    const double loss = SupervisedValue(
        {{Fill({4, 2}, 0.5), strong_label}}, {{Fill({2}, 0.5), weak_label}});
    CHECK(std::abs(loss - 2.0 * std::log(2.0)) < 1e-9);
  }

  TEST_CASE("exact labels cost nearly nothing after clamping") {
    Tensor<double> label({2, 2});
    label.data = {1, 0, 0, 1};
    Tensor<double> weak_label({2});
    weak_label.data = {0, 1};
    const double loss =
        SupervisedValue({{label, label}}, {{weak_label, weak_label}});
    CHECK(loss >= 0.0);
    CHECK(loss <= 2.0 * -std::log(1.0 - 1e-7) + 1e-12);
  }

  TEST_CASE("single strong cell with y=1, p=0.25 costs -ln 0.25") {
    Tensor<double> label({1, 1});
    label.data = {1};
    const double loss = SupervisedValue({{Fill({1, 1}, 0.25), label}}, {});
    CHECK(std::abs(loss - (-std::log(0.25))) < 1e-12);
  }
}

TEST_SUITE("meanteacher_loss") {
  TEST_CASE("teacher equal to student gives zero") {
    DTape tp(true);
    Tensor<double> s = Fill({3, 2}, 0.7), w = Fill({2}, 0.4);
    auto loss = train::MeanTeacherLoss<double>(
        &tp, {tp.Leaf(s, true)}, {s}, {tp.Leaf(w, true)}, {w});
    CHECK(tp.scalar(loss) == 0.0);
  }

  TEST_CASE("opposite saturated predictions cost 1 + 1") {
    DTape tp(true);
    auto loss = train::MeanTeacherLoss<double>(
        &tp, {tp.Leaf(Fill({2, 2}, 0.0), true)}, {Fill({2, 2}, 1.0)},
        {tp.Leaf(Fill({2}, 0.0), true)}, {Fill({2}, 1.0)});
    CHECK(tp.scalar(loss) == doctest::Approx(2.0).epsilon(1e-12));
  }

  TEST_CASE("hand case: strong (0.8 vs 0.6), weak (0.2 vs 0.5) -> 0.13") {
    DTape tp(true);
    auto loss = train::MeanTeacherLoss<double>(
        &tp, {tp.Leaf(Fill({1, 1}, 0.8), true)}, {Fill({1, 1}, 0.6)},
        {tp.Leaf(Fill({1}, 0.2), true)}, {Fill({1}, 0.5)});
    CHECK(std::abs(tp.scalar(loss) - 0.13) < 1e-12);
  }

  TEST_CASE("no gradient reaches the teacher side") {
    // The teacher enters as constants; perturbing the teacher changes the
    // value but the student gradient is computed against fixed targets.
    DTape tp(true);
    auto student = tp.Leaf(Fill({1, 1}, 0.8), true);
    auto weak = tp.Leaf(Fill({1}, 0.2), true);
    auto loss = train::MeanTeacherLoss<double>(&tp, {student}, {Fill({1, 1}, 0.6)},
                                               {weak}, {Fill({1}, 0.5)});
    tp.Backward(loss);
    CHECK(tp.grad(student).data[0] == doctest::Approx(2.0 * (0.8 - 0.6)));
    CHECK(tp.grad(weak).data[0] == doctest::Approx(2.0 * (0.2 - 0.5)));
  }
}

TEST_SUITE("consistency_loss") {
  TEST_CASE("identity view gives exactly zero") {
    DTape tp(true);
    auto s = tp.Leaf(Fill({4, 2}, 0.3), true);
    auto w = tp.Leaf(Fill({2}, 0.6), true);
    aug::StepDraws d;
    d.drc_mode = 1;
    std::vector<aug::TransportStep> steps = {
        {aug::TransformId::kDrc, d, false, -1}};
    std::vector<DVar> bs = {s}, bw = {w};
    std::vector<train::ConsistencyView<double>> views = {
        {s, w, s, w, &steps, &bs, &bw}};
    auto loss = train::ConsistencyLoss<double>(&tp, views, 4, 2);
    CHECK(tp.scalar(loss) == 0.0);
  }

  TEST_CASE("weak-only difference: (0.9 - 0.4)^2 = 0.25") {
    DTape tp(true);
    auto os = tp.Leaf(Fill({1, 1}, 0.5), true);
    auto ow = tp.Leaf(Fill({1}, 0.9), true);
    auto vs = tp.Leaf(Fill({1, 1}, 0.5), true);
    auto vw = tp.Leaf(Fill({1}, 0.4), true);
    aug::StepDraws d;
    d.drc_mode = 0;
    std::vector<aug::TransportStep> steps = {
        {aug::TransformId::kDrc, d, false, -1}};
    std::vector<DVar> bs = {os}, bw = {ow};
    std::vector<train::ConsistencyView<double>> views = {
        {os, ow, vs, vw, &steps, &bs, &bw}};
    auto loss = train::ConsistencyLoss<double>(&tp, views, 1, 1);
    CHECK(std::abs(tp.scalar(loss) - 0.25) < 1e-12);
  }

  TEST_CASE("duplicated identical views leave the mean unchanged") {
    DTape tp(true);
    auto os = tp.Leaf(Fill({2, 1}, 0.2), true);
    auto ow = tp.Leaf(Fill({1}, 0.8), true);
    auto vs = tp.Leaf(Fill({2, 1}, 0.6), true);
    auto vw = tp.Leaf(Fill({1}, 0.1), true);
    aug::StepDraws d;
    d.drc_mode = 0;
    std::vector<aug::TransportStep> steps = {
        {aug::TransformId::kDrc, d, false, -1}};
    std::vector<DVar> bs = {os}, bw = {ow};
    train::ConsistencyView<double> one = {os, ow, vs, vw, &steps, &bs, &bw};
    auto l1 = train::ConsistencyLoss<double>(&tp, {one}, 2, 1);
    auto l2 = train::ConsistencyLoss<double>(&tp, {one, one}, 2, 1);
    CHECK(tp.scalar(l1) == doctest::Approx(tp.scalar(l2)).epsilon(1e-12));
  }

  TEST_CASE("mixup references are detached") {
    DTape tp(true);
    auto os = tp.Leaf(Fill({2, 1}, 0.9), true);
    auto ow = tp.Leaf(Fill({1}, 0.9), true);
    auto ps = tp.Leaf(Fill({2, 1}, 0.1), true);  // partner
    auto pw = tp.Leaf(Fill({1}, 0.1), true);
    auto vs = tp.Leaf(Fill({2, 1}, 0.5), true);
    auto vw = tp.Leaf(Fill({1}, 0.5), true);
    aug::StepDraws d;
    d.partner = 1;
    std::vector<aug::TransportStep> steps = {
        {aug::TransformId::kMixup, d, true, 1}};
    std::vector<DVar> bs = {os, ps}, bw = {ow, pw};
    std::vector<train::ConsistencyView<double>> views = {
        {os, ow, vs, vw, &steps, &bs, &bw}};
    auto loss = train::ConsistencyLoss<double>(&tp, views, 2, 1);
    // Reference = OR(binarize(0.9), binarize(0.1)) = 1; loss vs 0.5.
    CHECK(tp.scalar(loss) == doctest::Approx(0.5).epsilon(1e-12));
    tp.Backward(loss);
    CHECK(tp.grad(os).data[0] == 0.0);  // detached reference
    CHECK(tp.grad(ps).data[0] == 0.0);
    CHECK(tp.grad(vs).data[0] != 0.0);  // view side still learns
  }
}

TEST_SUITE("total_loss") {
  TEST_CASE("zero weights reduce to the supervised loss") {
    CHECK(train::TotalLoss({0, 0}, 1.0, 0.37, 5.0, 9.0) == 0.37);
  }

  TEST_CASE("weighted sum hand case") {
    CHECK(std::abs(train::TotalLoss({2, 2}, 1.0, 1.0, 0.5, 0.25) - 2.5) <
          1e-12);
  }

  TEST_CASE("ramp 0 keeps only the supervised part") {
    CHECK(train::TotalLoss({2, 2}, 0.0, 1.25, 7.0, 7.0) == 1.25);
  }

  TEST_CASE("method presets match the experiment grid") {
    CHECK(train::WeightsFor(train::Method::kMt).lambda_unsuper == 2.0);
    CHECK(train::WeightsFor(train::Method::kMt).lambda_cr == 0.0);
    CHECK(train::WeightsFor(train::Method::kMtRda).lambda_unsuper == 2.0);
    CHECK(train::WeightsFor(train::Method::kCrRda).lambda_unsuper == 0.0);
    CHECK(train::WeightsFor(train::Method::kCrRda).lambda_cr == 2.0);
    CHECK(train::WeightsFor(train::Method::kMtCrRda).lambda_unsuper == 2.0);
    CHECK(train::WeightsFor(train::Method::kMtCrRda).lambda_cr == 2.0);
    CHECK(train::WeightsFor(train::Method::kSupervised).lambda_unsuper == 0.0);
    CHECK(train::WeightsFor(train::Method::kSupervised).lambda_cr == 0.0);
  }
}

TEST_SUITE("ema") {
  TEST_CASE("teacher equal to student stays put") {
    train::TeacherState<double> t;
    t.params = {0.5, -1.0};
    t.ema_alpha = 0.999;
    train::EmaUpdate(&t, {0.5, -1.0});
    CHECK(t.params[0] == 0.5);
    CHECK(t.params[1] == -1.0);
  }

  TEST_CASE("one step from 0 toward 1 moves by 1 - alpha") {
    train::TeacherState<double> t;
    t.params = {0.0};
    t.ema_alpha = 0.999;
    train::EmaUpdate(&t, {1.0});
    CHECK(t.params[0] == doctest::Approx(0.001).epsilon(1e-12));
  }

  TEST_CASE("frozen student decays geometrically") {
    train::TeacherState<double> t;
    t.params = {2.0};
    t.ema_alpha = 0.999;
    const double student = 0.5;
    for (int n = 1; n <= 1000; ++n) {
      train::EmaUpdate(&t, {student});
      const double expect = student + std::pow(0.999, n) * (2.0 - student);
      CHECK(std::abs(t.params[0] - expect) < 1e-12);
    }
  }

  TEST_CASE("teacher stays inside the student's historic range") {
    Rng rng(5);
    train::TeacherState<double> t;
    t.params = {0.0};
    t.ema_alpha = 0.99;
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double s = rng.Uniform(-3.0, 3.0);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
      train::EmaUpdate(&t, {s});
      CHECK(t.params[0] >= lo - 1e-12);
      CHECK(t.params[0] <= hi + 1e-12);
    }
  }
}

TEST_SUITE("schedule") {
  TEST_CASE("rampup endpoints") {
    CHECK(train::Rampup(0, 50) == doctest::Approx(std::exp(-5.0)).epsilon(1e-12));
    CHECK(train::Rampup(50, 50) == 1.0);
    CHECK(train::Rampup(80, 50) == 1.0);
    CHECK(train::Rampup(5, 0) == 1.0);
  }

  TEST_CASE("reference milestones at 200 epochs") {
    train::Schedule s;
    s.total_epochs = 200;
    CHECK(s.RampEnd() == 50);
    CHECK(s.LrAt(50) == doctest::Approx(1e-3));
    CHECK(s.LrAt(99) == doctest::Approx(1e-3));
    CHECK(s.LrAt(100) == doctest::Approx(2e-4));
    CHECK(s.LrAt(150) == doctest::Approx(4e-5));
    CHECK(s.LrAt(0) == doctest::Approx(1e-3 * std::exp(-5.0)));
  }

  TEST_CASE("desk schedule scales milestones proportionally") {
    train::Schedule s;
    s.total_epochs = 40;
    CHECK(s.RampEnd() == 10);
    CHECK(s.Decay1() == 20);
    CHECK(s.Decay2() == 30);
    CHECK(s.LrAt(10) == doctest::Approx(1e-3));
    CHECK(s.LrAt(25) == doctest::Approx(2e-4));
    CHECK(s.LrAt(39) == doctest::Approx(4e-5));
  }
}

TEST_SUITE("loss_stack_gradcheck") {
  TEST_CASE("tiny end-to-end total loss matches finite differences") {
    auto c = gradcheck::MakeTinyCase(99, 1);
    auto state = nn::InitModel<double>(c.model, 7);
    REQUIRE(state.params.size() <= 500);
    CHECK(gradcheck::MaxRelError(state, c, gradcheck::WhichLoss::kTotal) <
          1e-3);
  }
}

TEST_SUITE("train_loop") {
  static data::CorpusConfig MicroCorpus() {
    data::CorpusConfig cfg;
    cfg.synth.classes = 2;
    cfg.synth.clip_seconds = 1.0;
    cfg.synth.sample_rate = 8000;
    cfg.synth.min_duration_s = 0.2;
    cfg.synth.max_duration_s = 0.6;
    // Feature geometry below: 8000 Hz, win 256, hop 128 -> 62 frames,
    // padded 64, T' = 16.
    cfg.synth.label_frames = 16;
    cfg.synth.label_hop_s = 4.0 * 128 / 8000;
    cfg.n_strong = 4;
    cfg.n_weak = 4;
    cfg.n_unlabeled = 8;
    cfg.n_val = 2;
    cfg.n_test = 2;
    return cfg;
  }

  static train::TrainConfig MicroTrain() {
    train::TrainConfig cfg;
    cfg.method = train::Method::kMtCrRda;
    cfg.seed = 17;
    cfg.epochs = 2;
    cfg.batch = {1, 1, 2};
    cfg.feature.sample_rate = 8000;
    cfg.feature.window = 256;
    cfg.feature.hop = 128;
    cfg.feature.n_mels = 16;
    cfg.feature.clip_seconds = 1.0;
    cfg.model.conv_blocks = 2;
    cfg.model.channels = {2, 4};
    cfg.model.pool_factor = 4;
    cfg.model.n_mels = 16;
    cfg.model.recurrent_hidden = 4;
    cfg.model.classes = 2;
    return cfg;
  }

  TEST_CASE("identical seeds give identical logs and parameters") {
    auto corpus = data::SynthCorpus(51, MicroCorpus());
    auto cfg = MicroTrain();
    ThreadPool pool(2);
    auto a = train::Train(cfg, corpus, &pool);
    auto b = train::Train(cfg, corpus, &pool);
    CHECK(a.student.params == b.student.params);
    CHECK(a.teacher.params == b.teacher.params);
    REQUIRE(a.log.size() == b.log.size());
    for (size_t i = 0; i < a.log.size(); ++i) {
      CHECK(a.log[i].loss_super == b.log[i].loss_super);
      CHECK(a.log[i].loss_unsuper == b.log[i].loss_unsuper);
      CHECK(a.log[i].loss_cr == b.log[i].loss_cr);
      CHECK(a.log[i].val_collar_f1 == b.log[i].val_collar_f1);
    }
  }

  TEST_CASE("worker count does not change the result") {
    auto corpus = data::SynthCorpus(52, MicroCorpus());
    auto cfg = MicroTrain();
    cfg.epochs = 1;
    ThreadPool pool2(2);
    auto serial = train::Train(cfg, corpus, nullptr);
    auto threaded = train::Train(cfg, corpus, &pool2);
    CHECK(serial.student.params == threaded.student.params);
    CHECK(serial.log[0].loss_super == threaded.log[0].loss_super);
  }

  TEST_CASE("supervised loss drops over a short supervised run") {
    auto corpus = data::SynthCorpus(53, MicroCorpus());
    auto cfg = MicroTrain();
    cfg.method = train::Method::kSupervised;
    cfg.epochs = 8;
    ThreadPool pool(2);
    auto result = train::Train(cfg, corpus, &pool);
    CHECK(result.log.back().loss_super < result.log.front().loss_super);
  }

  TEST_CASE("all four methods run and log every epoch") {
    auto corpus = data::SynthCorpus(54, MicroCorpus());
    ThreadPool pool(2);
    for (auto m : {train::Method::kMt, train::Method::kMtRda,
                   train::Method::kCrRda, train::Method::kMtCrRda}) {
      auto cfg = MicroTrain();
      cfg.method = m;
      cfg.epochs = 1;
      auto result = train::Train(cfg, corpus, &pool);
      REQUIRE(result.log.size() == 1);
      CHECK(std::isfinite(result.log[0].loss_super));
      if (train::UsesTeacher(m)) CHECK(result.log[0].loss_unsuper > 0.0);
      if (train::WeightsFor(m).lambda_cr > 0) CHECK(result.log[0].loss_cr > 0.0);
    }
  }
}
