// tools/sedkit.cc

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

// Command line front end: synth-data, augment, train, evaluate, ablate.
// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "sedkit/checkpoint.h"
#include "sedkit/common.h"
#include "sedkit/dataset.h"
#include "sedkit/metrics.h"
#include "sedkit/trainer.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sedkit;

namespace {

// Flags shared by the commands that extract features or train models.
struct PipelineFlags {
  int sample_rate = 16000;
  int window = 1024;
  int hop = 256;
  int n_mels = 64;
  double clip_seconds = 8.0;
  int pool_factor = 4;
  std::vector<int> channels = {4, 8};
  int hidden = 32;
  std::string activation = "glu";
  std::string pooling_head = "attention";
  int classes = 4;

  dsp::FeatureConfig Feature() const {
    dsp::FeatureConfig fc;
    fc.sample_rate = sample_rate;
    fc.window = window;
    fc.hop = hop;
    fc.n_mels = n_mels;
    fc.clip_seconds = clip_seconds;
    return fc;
  }

  nn::ModelConfig Model() const {
    nn::ModelConfig mc;
    mc.conv_blocks = static_cast<int>(channels.size());
    mc.channels = channels;
    mc.pool_factor = pool_factor;
    mc.n_mels = n_mels;
    mc.recurrent_hidden = hidden;
    mc.classes = classes;
    mc.activation = nn::ActivationFromString(activation);
    mc.pooling_head = nn::PoolingHeadFromString(pooling_head);
    return mc;
  }

  int LabelFrames() const {
    dsp::FeatureConfig fc = Feature();
    const int t = fc.frames();
    return (t + pool_factor - 1) / pool_factor;
  }
  double LabelHop() const {
    return Feature().frame_hop_seconds() * pool_factor;
  }
};

void AddPipelineFlags(CLI::App *cmd, PipelineFlags *f) {
  cmd->add_option("--sample-rate", f->sample_rate, "Sample rate in Hz");
  cmd->add_option("--window", f->window, "STFT window size in samples");
  cmd->add_option("--hop", f->hop, "STFT hop size in samples");
  cmd->add_option("--mels", f->n_mels, "Mel bins");
  cmd->add_option("--clip-seconds", f->clip_seconds, "Clip length in seconds");
  cmd->add_option("--pool-factor", f->pool_factor,
                  "Total time pooling of the model");
  cmd->add_option("--channels", f->channels,
                  "Conv channels per block (comma separated)")
      ->delimiter(',');
  cmd->add_option("--hidden", f->hidden, "Recurrent hidden size");
  cmd->add_option("--activation", f->activation, "Conv activation: glu or cg");
  cmd->add_option("--pooling-head", f->pooling_head,
                  "Weak pooling head: attention or mean");
  cmd->add_option("--classes", f->classes, "Number of event classes");
}

std::vector<aug::TransformId> EnabledTransforms(
    const std::vector<std::string> &exclude) {
  std::vector<aug::TransformId> enabled;
  for (aug::TransformId id : aug::AllTransforms()) {
    bool drop = false;
    for (const std::string &name : exclude)
      drop = drop || (aug::TransformIdFromString(name) == id);
    if (!drop) enabled.push_back(id);
  }
  SEDKIT_CHECK(!enabled.empty(), ConfigError, "all transforms excluded");
  return enabled;
}

json FeatureJson(const dsp::FeatureConfig &fc) {
  return json{{"sample_rate", fc.sample_rate}, {"window", fc.window},
              {"hop", fc.hop},                 {"n_mels", fc.n_mels},
              {"clip_seconds", fc.clip_seconds}};
}

json ModelJson(const nn::ModelConfig &mc) {
  return json{{"conv_blocks", mc.conv_blocks},
              {"channels", mc.channels},
              {"pool_factor", mc.pool_factor},
              {"activation", nn::ToString(mc.activation)},
              {"recurrent_hidden", mc.recurrent_hidden},
              {"classes", mc.classes},
              {"pooling_head", nn::ToString(mc.pooling_head)},
              {"n_mels", mc.n_mels}};
}

json TrainConfigJson(const train::TrainConfig &cfg) {
  json enabled = json::array();
  for (auto id : cfg.enabled) enabled.push_back(aug::ToString(id));
  return json{
      {"method", train::ToString(cfg.method)},
      {"seed", cfg.seed},
      {"epochs", cfg.epochs},
      {"batch",
       {cfg.batch.n_strong, cfg.batch.n_weak, cfg.batch.n_unlabeled}},
      {"scale_mode",
       cfg.scale.mode == aug::ScaleMode::kFixed ? "fixed" : "random"},
      {"global_scale", cfg.scale.global_scale},
      {"policy_steps", cfg.policy_steps},
      {"enabled_transforms", enabled},
      {"inherit_labels", cfg.inherit_labels},
      {"ema_alpha", cfg.ema_alpha},
      {"median_filter_s", cfg.median_filter_s},
      {"feature", FeatureJson(cfg.feature)},
      {"model", ModelJson(cfg.model)}};
}

int WorkerCount(int flag) {
  if (flag > 0) return flag;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 2 : static_cast<int>(hw);
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  uint64_t seed = 1;
  std::string out;
  bool force = false;
  bool ssf = false;
  int n_strong = 200, n_weak = 200, n_unlabeled = 600, n_val = 100,
      n_test = 200;
  double background_dbfs = -30.0;
  double event_dbfs_lo = -24.0, event_dbfs_hi = -12.0;
  double event_min_s = 0.5, event_max_s = 3.0;
  PipelineFlags pipe;
  int workers = 0;
};

void RunSynthData(const SynthArgs &a) {
  if (fs::exists(a.out) && !fs::is_empty(a.out) && !a.force)
    throw ConfigError("output directory exists, pass --force to overwrite: " +
                      a.out);
  data::CorpusConfig cfg;
  cfg.synth.classes = a.pipe.classes;
  cfg.synth.clip_seconds = a.pipe.clip_seconds;
  cfg.synth.sample_rate = a.pipe.sample_rate;
  cfg.synth.background_dbfs = a.background_dbfs;
  cfg.synth.event_dbfs_lo = a.event_dbfs_lo;
  cfg.synth.event_dbfs_hi = a.event_dbfs_hi;
  cfg.synth.min_duration_s = a.event_min_s;
  cfg.synth.max_duration_s = a.event_max_s;
  cfg.synth.label_frames = a.pipe.LabelFrames();
  cfg.synth.label_hop_s = a.pipe.LabelHop();
  cfg.n_strong = a.n_strong;
  cfg.n_weak = a.n_weak;
  cfg.n_unlabeled = a.n_unlabeled;
  cfg.n_val = a.n_val;
  cfg.n_test = a.n_test;

  ThreadPool pool(WorkerCount(a.workers));
  data::Corpus corpus = data::SynthCorpus(a.seed, cfg, &pool);
  fs::remove_all(a.out);
  data::SaveCorpus(a.out, corpus, a.ssf);

  json resolved{{"command", "synth-data"},
                {"seed", a.seed},
                {"counts",
                 {{"strong", a.n_strong},
                  {"weak", a.n_weak},
                  {"unlabeled", a.n_unlabeled},
                  {"val", a.n_val},
                  {"test", a.n_test}}},
                {"background_dbfs", a.background_dbfs},
                {"event_dbfs", {a.event_dbfs_lo, a.event_dbfs_hi}},
                {"feature", FeatureJson(a.pipe.Feature())},
                {"pool_factor", a.pipe.pool_factor},
                {"label_frames", cfg.synth.label_frames},
                {"label_hop_s", cfg.synth.label_hop_s}};
  std::ofstream(fs::path(a.out) / "run.json") << resolved.dump(2) << "\n";
  std::cout << "wrote " << corpus.train.clips.size() << " train, "
            << corpus.val.clips.size() << " val, " << corpus.test.clips.size()
            << " test clips to " << a.out << "\n";
}

// ---------------------------------------------------------------------------

struct AugmentArgs {
  std::string data, out, split = "train";
  uint64_t seed = 1;
  std::string scale_mode = "random";
  int global_scale = 5;
  int policy_steps = 1;
  std::vector<std::string> exclude;
  bool inherit_labels = false;
  bool force = false;
  PipelineFlags pipe;
  int workers = 0;
};

void RunAugment(const AugmentArgs &a) {
  if (fs::exists(a.out) && !fs::is_empty(a.out) && !a.force)
    throw ConfigError("output directory exists, pass --force to overwrite: " +
                      a.out);
  data::Corpus corpus = data::LoadCorpus(a.data);
  const data::Dataset &ds = a.split == "train"  ? corpus.train
                            : a.split == "val"  ? corpus.val
                            : a.split == "test" ? corpus.test
                                                : throw ConfigError(
                                                      "unknown split: " +
                                                      a.split);

  aug::AugmentContext ctx;
  ctx.feature = a.pipe.Feature();
  ctx.feature.sample_rate = ds.sample_rate;
  ctx.feature.clip_seconds = ds.clip_seconds;
  ctx.label_frames = ds.label_frames;
  ctx.label_hop_s = ds.label_hop_s;
  ctx.inherit_labels = a.inherit_labels;

  aug::ScaleScheme scheme{a.scale_mode == "fixed"
                              ? aug::ScaleMode::kFixed
                              : aug::ScaleMode::kRandomUpperBound,
                          a.global_scale};
  const auto enabled = EnabledTransforms(a.exclude);

  std::vector<const data::LabeledClip *> batch;
  for (const auto &clip : ds.clips) batch.push_back(&clip);

  const int n = static_cast<int>(ds.clips.size());
  std::vector<aug::AugmentedView> views(n);
  ThreadPool pool(WorkerCount(a.workers));
  ParallelFor(&pool, n, [&](int i) {
    Rng rng = Rng::Keyed(a.seed, 0x617567ULL, 0, i);
    auto policy = aug::SamplePolicy(&rng, a.policy_steps, scheme, enabled);
    views[i] = aug::ApplyPolicy(batch, i, policy, ctx);
  });

  fs::remove_all(a.out);
  fs::create_directories(fs::path(a.out) / "clips");
  std::ofstream labels(fs::path(a.out) / "labels.jsonl");
  std::ofstream policies(fs::path(a.out) / "policies.jsonl");
  for (int i = 0; i < n; ++i) {
    const aug::AugmentedView &view = views[i];
    const std::string id = ds.clips[i].id + "-aug";
    WriteWav((fs::path(a.out) / "clips" / (id + ".wav")).string(),
             view.waveform);

    json weak = json::array();
    if (view.weak)
      for (uint8_t v : view.weak->vec) weak.push_back(static_cast<int>(v));
    json events = json::array();
    if (view.strong) {
      // Transported grids serialize as decoded (class, onset, offset) runs.
      EventList runs = metrics::DecodeEvents(view.strong->grid.data(),
                                             view.strong->frames,
                                             view.strong->classes,
                                             view.strong->frame_hop_s);
      for (int c = 0; c < runs.classes(); ++c)
        for (const Interval &e : runs.by_class[c])
          events.push_back(
              {{"class", c}, {"onset", e.onset}, {"offset", e.offset}});
    }
    labels << json{{"id", id},
                   {"kind", data::ToString(view.kind)},
                   {"weak", weak},
                   {"events", events}}
                  .dump()
           << "\n";

    json steps = json::array();
    for (const auto &step : view.policy.steps) {
      json draws{{"reciprocal", step.draws.reciprocal},
                 {"negate", step.draws.negate},
                 {"factor", step.draws.factor},
                 {"shift_fraction", step.draws.shift_fraction},
                 {"drc_mode", step.draws.drc_mode},
                 {"mask_starts", step.draws.mask_starts},
                 {"partner", step.draws.partner}};
      steps.push_back({{"transform", aug::ToString(step.id)},
                       {"scale", step.scale},
                       {"seed", step.rng_seed},
                       {"draws", draws}});
    }
    policies << json{{"id", id}, {"parent", ds.clips[i].id}, {"steps", steps}}
                    .dump()
             << "\n";
  }
  std::cout << "augmented " << n << " clips into " << a.out << "\n";
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string data, out;
  std::string method = "mt_cr_rda";
  uint64_t seed = 1;
  int epochs = 40;
  std::vector<int> batch = {2, 2, 4};
  std::string scale_mode = "random";
  int global_scale = 5;
  int policy_steps = 1;
  std::vector<std::string> exclude;
  bool inherit_labels = false;
  double ema_alpha = 0.999;
  double median_s = 0.45;
  int checkpoint_every = 0;
  PipelineFlags pipe;
  int workers = 0;
};

train::TrainConfig BuildTrainConfig(const TrainArgs &a,
                                    const data::Corpus &corpus) {
  SEDKIT_CHECK(a.batch.size() == 3, ConfigError,
               "--batch needs three counts: strong,weak,unlabeled");
  train::TrainConfig cfg;
  cfg.method = train::MethodFromString(a.method);
  cfg.seed = a.seed;
  cfg.epochs = a.epochs;
  cfg.batch = {a.batch[0], a.batch[1], a.batch[2]};
  cfg.scale = {a.scale_mode == "fixed" ? aug::ScaleMode::kFixed
                                       : aug::ScaleMode::kRandomUpperBound,
               a.global_scale};
  cfg.policy_steps = a.policy_steps;
  cfg.enabled = EnabledTransforms(a.exclude);
  cfg.feature = a.pipe.Feature();
  cfg.feature.sample_rate = corpus.train.sample_rate;
  cfg.feature.clip_seconds = corpus.train.clip_seconds;
  cfg.model = a.pipe.Model();
  cfg.model.classes = corpus.train.classes;
  cfg.inherit_labels = a.inherit_labels;
  cfg.ema_alpha = a.ema_alpha;
  cfg.median_filter_s = a.median_s;
  cfg.checkpoint_every = a.checkpoint_every;
  cfg.out_dir = a.out;
  return cfg;
}

void RunTrain(const TrainArgs &a) {
  data::Corpus corpus = data::LoadCorpus(a.data);
  train::TrainConfig cfg = BuildTrainConfig(a, corpus);
  ThreadPool pool(WorkerCount(a.workers));
  train::TrainResult result = train::Train(cfg, corpus, &pool);

  metrics::MetricReport test = train::EvaluateModel(
      result.student, corpus.test, cfg.feature, cfg.median_filter_s, &pool);

  if (!a.out.empty()) {
    json run{{"command", "train"},
             {"config", TrainConfigJson(cfg)},
             {"sampler_wraps", result.sampler_wraps},
             {"val_collar_f1", result.log.back().val_collar_f1},
             {"test_collar_f1", test.macro_f1}};
    std::ofstream(fs::path(a.out) / "run.json") << run.dump(2) << "\n";
  }
  std::cout << "final val collar F1 " << result.log.back().val_collar_f1
            << ", test collar F1 " << test.macro_f1 << "\n";
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string checkpoint, data, split = "test", out;
  bool use_teacher = false;
  double median_s = 0.45;
  PipelineFlags pipe;
  int workers = 0;
};

void RunEvaluate(const EvaluateArgs &a) {
  std::string path = a.checkpoint;
  if (fs::is_directory(path))
    path = (fs::path(path) / (a.use_teacher ? "teacher.ckpt" : "student.ckpt"))
               .string();
  nn::Checkpoint ckpt = nn::LoadCheckpoint(path);

  data::Corpus corpus = data::LoadCorpus(a.data);
  const data::Dataset &ds = a.split == "train"  ? corpus.train
                            : a.split == "val"  ? corpus.val
                            : a.split == "test" ? corpus.test
                                                : throw ConfigError(
                                                      "unknown split: " +
                                                      a.split);
  dsp::FeatureConfig fc = a.pipe.Feature();
  fc.sample_rate = ds.sample_rate;
  fc.clip_seconds = ds.clip_seconds;
  fc.n_mels = ckpt.state.config.n_mels;

  ThreadPool pool(WorkerCount(a.workers));
  metrics::MetricReport report =
      train::EvaluateModel(ckpt.state, ds, fc, a.median_s, &pool);

  json out{{"command", "evaluate"},
           {"checkpoint", path},
           {"split", a.split},
           {"median_filter_s", a.median_s},
           {"macro_f1", report.macro_f1},
           {"classes_scored", report.classes_scored},
           {"per_class", json::array()}};
  for (size_t c = 0; c < report.per_class.size(); ++c)
    out["per_class"].push_back({{"class", c},
                                {"tp", report.per_class[c].tp},
                                {"fp", report.per_class[c].fp},
                                {"fn", report.per_class[c].fn},
                                {"precision", report.Precision(c)},
                                {"recall", report.Recall(c)},
                                {"f1", report.F1(c)}});
  if (!a.out.empty()) {
    std::ofstream os(a.out);
    SEDKIT_CHECK(os.good(), DataError, "cannot write report: " + a.out);
    os << out.dump(2) << "\n";
  }
  std::cout << report.TextTable();
}

// ---------------------------------------------------------------------------

struct AblateArgs {
  std::string data, out;
  std::string table = "methods";  // methods | scale | transforms
  std::vector<uint64_t> seeds = {1, 2, 3};
  int epochs = 40;
  std::vector<int> batch = {2, 2, 4};
  std::vector<std::string> exclude;  // applied to every cell
  double median_s = 0.45;
  PipelineFlags pipe;
  int workers = 0;
};

struct AblateCell {
  std::string name;
  train::TrainConfig cfg;
};

void RunAblate(const AblateArgs &a) {
  data::Corpus corpus = data::LoadCorpus(a.data);
  ThreadPool pool(WorkerCount(a.workers));

  TrainArgs base;
  base.data = a.data;
  base.epochs = a.epochs;
  base.batch = a.batch;
  base.exclude = a.exclude;
  base.median_s = a.median_s;
  base.pipe = a.pipe;

  std::vector<AblateCell> cells;
  if (a.table == "methods") {
    for (const std::string act : {"glu", "cg"}) {
      for (const std::string method :
           {"mt", "mt_rda", "cr_rda", "mt_cr_rda"}) {
        TrainArgs args = base;
        args.method = method;
        args.pipe.activation = act;
        cells.push_back({act + "_" + method, BuildTrainConfig(args, corpus)});
      }
    }
  } else if (a.table == "scale") {
    for (const std::string mode : {"fixed", "random"}) {
      for (int scale : {3, 4, 5, 6}) {
        TrainArgs args = base;
        args.method = "mt_cr_rda";
        args.pipe.activation = "cg";
        args.scale_mode = mode;
        args.global_scale = scale;
        cells.push_back({mode + "_" + std::to_string(scale),
                         BuildTrainConfig(args, corpus)});
      }
    }
  } else if (a.table == "transforms") {
    TrainArgs args = base;
    args.method = "cr_rda";
    args.pipe.activation = "glu";
    cells.push_back({"all", BuildTrainConfig(args, corpus)});
    for (aug::TransformId id : aug::AllTransforms()) {
      TrainArgs minus = args;
      minus.exclude.push_back(aug::ToString(id));
      cells.push_back({std::string("minus_") + aug::ToString(id),
                       BuildTrainConfig(minus, corpus)});
    }
  } else {
    throw ConfigError("unknown table: " + a.table);
  }

  fs::create_directories(a.out);
  train::FeatureCache cache = train::FeatureCache::Build(
      corpus, cells[0].cfg.feature, cells[0].cfg.model, &pool);

  json results = json::array();
  for (const AblateCell &cell : cells) {
    std::vector<double> f1s;
    for (uint64_t seed : a.seeds) {
      train::TrainConfig cfg = cell.cfg;
      cfg.seed = seed;
      cfg.out_dir =
          (fs::path(a.out) / cell.name / ("seed_" + std::to_string(seed)))
              .string();
      train::TrainResult result = train::Train(cfg, corpus, &pool, &cache);
      const double f1 =
          train::EvaluateModel(result.student, corpus.test, cfg.feature,
                               cfg.median_filter_s, &pool)
              .macro_f1;
      f1s.push_back(f1);
      json run{{"command", "ablate-cell"},
               {"cell", cell.name},
               {"config", TrainConfigJson(cfg)},
               {"sampler_wraps", result.sampler_wraps},
               {"val_collar_f1", result.log.back().val_collar_f1},
               {"test_collar_f1", f1}};
      std::ofstream(fs::path(cfg.out_dir) / "run.json") << run.dump(2) << "\n";
      std::cout << cell.name << " seed " << seed << ": test collar F1 " << f1
                << "\n";
    }
    double mean = 0;
    for (double f : f1s) mean += f;
    mean /= f1s.size();
    double var = 0;
    for (double f : f1s) var += (f - mean) * (f - mean);
    const double stddev = f1s.size() > 1 ? std::sqrt(var / (f1s.size() - 1))
                                         : 0.0;
    results.push_back({{"cell", cell.name},
                       {"seeds", a.seeds},
                       {"f1", f1s},
                       {"mean", mean},
                       {"std", stddev}});
  }

  std::ofstream(fs::path(a.out) / "results.json") << results.dump(2) << "\n";
  std::ofstream table(fs::path(a.out) / "results.txt");
  char line[160];
  std::snprintf(line, sizeof(line), "%-24s %10s %10s\n", "cell", "mean F1",
                "std");
  table << line;
  std::cout << line;
  for (const auto &row : results) {
    std::snprintf(line, sizeof(line), "%-24s %10.4f %10.4f\n",
                  row["cell"].get<std::string>().c_str(),
                  row["mean"].get<double>(), row["std"].get<double>());
    table << line;
    std::cout << line;
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"sound event detection toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file");
  app.allow_config_extras(false);

  SynthArgs synth;
  CLI::App *synth_cmd =
      app.add_subcommand("synth-data", "Generate the synthetic corpus");
  synth_cmd->add_option("--seed", synth.seed, "Generation seed");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_flag("--force", synth.force, "Overwrite existing output");
  synth_cmd->add_flag("--ssf", synth.ssf, "Write float32 SSF0 instead of WAV");
  synth_cmd->add_option("--strong", synth.n_strong, "Strong train clips");
  synth_cmd->add_option("--weak", synth.n_weak, "Weak train clips");
  synth_cmd->add_option("--unlabeled", synth.n_unlabeled,
                        "Unlabeled train clips");
  synth_cmd->add_option("--val", synth.n_val, "Validation clips");
  synth_cmd->add_option("--test", synth.n_test, "Test clips");
  synth_cmd->add_option("--background-dbfs", synth.background_dbfs,
                        "Pink-noise background RMS level");
  synth_cmd->add_option("--event-dbfs-lo", synth.event_dbfs_lo,
                        "Lower event RMS level");
  synth_cmd->add_option("--event-dbfs-hi", synth.event_dbfs_hi,
                        "Upper event RMS level");
  synth_cmd->add_option("--event-min-s", synth.event_min_s,
                        "Minimum event duration in seconds");
  synth_cmd->add_option("--event-max-s", synth.event_max_s,
                        "Maximum event duration in seconds");
  synth_cmd->add_option("--workers", synth.workers, "Worker threads");
  AddPipelineFlags(synth_cmd, &synth.pipe);

  AugmentArgs augment;
  CLI::App *aug_cmd = app.add_subcommand(
      "augment", "Apply random policies to a dataset split");
  aug_cmd->add_option("--data", augment.data, "Dataset directory")->required();
  aug_cmd->add_option("--out", augment.out, "Output directory")->required();
  aug_cmd->add_option("--split", augment.split, "Split to augment");
  aug_cmd->add_option("--seed", augment.seed, "Policy seed");
  aug_cmd->add_option("--scale-mode", augment.scale_mode,
                      "fixed or random (upper bound)");
  aug_cmd->add_option("--scale", augment.global_scale, "Global scale 1..10");
  aug_cmd->add_option("--p", augment.policy_steps, "Transforms per clip");
  aug_cmd->add_option("--exclude", augment.exclude,
                      "Transforms to leave out")
      ->delimiter(',');
  aug_cmd->add_flag("--inherit-labels", augment.inherit_labels,
                    "Keep parent labels instead of transporting them");
  aug_cmd->add_flag("--force", augment.force, "Overwrite existing output");
  aug_cmd->add_option("--workers", augment.workers, "Worker threads");
  AddPipelineFlags(aug_cmd, &augment.pipe);

  TrainArgs train_args;
  CLI::App *train_cmd = app.add_subcommand("train", "Train one model");
  train_cmd->add_option("--data", train_args.data, "Dataset directory")
      ->required();
  train_cmd->add_option("--out", train_args.out, "Run output directory")
      ->required();
  train_cmd->add_option("--method", train_args.method,
                        "supervised|mt|mt_rda|cr_rda|mt_cr_rda");
  train_cmd->add_option("--seed", train_args.seed, "Training seed");
  train_cmd->add_option("--epochs", train_args.epochs, "Training epochs");
  train_cmd->add_option("--batch", train_args.batch,
                        "Batch composition strong,weak,unlabeled")
      ->delimiter(',');
  train_cmd->add_option("--scale-mode", train_args.scale_mode,
                        "fixed or random (upper bound)");
  train_cmd->add_option("--scale", train_args.global_scale,
                        "Global scale 1..10");
  train_cmd->add_option("--p", train_args.policy_steps, "Transforms per clip");
  train_cmd->add_option("--exclude", train_args.exclude,
                        "Transforms to leave out")
      ->delimiter(',');
  train_cmd->add_flag("--inherit-labels", train_args.inherit_labels,
                      "Keep parent labels instead of transporting them");
  train_cmd->add_option("--ema-alpha", train_args.ema_alpha,
                        "Teacher EMA coefficient");
  train_cmd->add_option("--median", train_args.median_s,
                        "Median filter duration in seconds");
  train_cmd->add_option("--checkpoint-every", train_args.checkpoint_every,
                        "Checkpoint period in epochs (0 = final only)");
  train_cmd->add_option("--workers", train_args.workers, "Worker threads");
  AddPipelineFlags(train_cmd, &train_args.pipe);

  EvaluateArgs eval_args;
  CLI::App *eval_cmd =
      app.add_subcommand("evaluate", "Score a checkpoint on a split");
  eval_cmd->add_option("--checkpoint", eval_args.checkpoint,
                       "Checkpoint file or run directory")
      ->required();
  eval_cmd->add_option("--data", eval_args.data, "Dataset directory")
      ->required();
  eval_cmd->add_option("--split", eval_args.split, "Split to score");
  eval_cmd->add_option("--out", eval_args.out, "JSON report path");
  eval_cmd->add_flag("--use-teacher", eval_args.use_teacher,
                     "Score teacher.ckpt from a run directory");
  eval_cmd->add_option("--median", eval_args.median_s,
                       "Median filter duration in seconds");
  eval_cmd->add_option("--workers", eval_args.workers, "Worker threads");
  AddPipelineFlags(eval_cmd, &eval_args.pipe);

  AblateArgs ablate_args;
  CLI::App *ablate_cmd =
      app.add_subcommand("ablate", "Run an experiment grid");
  ablate_cmd->add_option("--data", ablate_args.data, "Dataset directory")
      ->required();
  ablate_cmd->add_option("--out", ablate_args.out, "Output directory")
      ->required();
  ablate_cmd->add_option("--table", ablate_args.table,
                         "methods | scale | transforms");
  ablate_cmd->add_option("--seeds", ablate_args.seeds, "Seeds per cell")
      ->delimiter(',');
  ablate_cmd->add_option("--epochs", ablate_args.epochs, "Training epochs");
  ablate_cmd->add_option("--batch", ablate_args.batch,
                         "Batch composition strong,weak,unlabeled")
      ->delimiter(',');
  ablate_cmd->add_option("--exclude", ablate_args.exclude,
                         "Transforms excluded from every cell")
      ->delimiter(',');
  ablate_cmd->add_option("--median", ablate_args.median_s,
                         "Median filter duration in seconds");
  ablate_cmd->add_option("--workers", ablate_args.workers, "Worker threads");
  AddPipelineFlags(ablate_cmd, &ablate_args.pipe);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  try {
    if (synth_cmd->parsed()) RunSynthData(synth);
    if (aug_cmd->parsed()) RunAugment(augment);
    if (train_cmd->parsed()) RunTrain(train_args);
    if (eval_cmd->parsed()) RunEvaluate(eval_args);
    if (ablate_cmd->parsed()) RunAblate(ablate_args);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError &e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError &e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
