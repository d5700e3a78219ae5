// core/src/dataset.cc

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

#include "sedkit/dataset.h"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "sedkit/common.h"

namespace sedkit {
namespace data {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<int> Dataset::IndicesOfKind(SupervisionKind k) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(clips.size()); ++i)
    if (clips[i].kind == k) out.push_back(i);
  return out;
}

namespace {

// Split tags keep clip streams independent of pool sizes.
enum SplitTag : uint64_t {
  kTagStrong = 1,
  kTagWeak = 2,
  kTagUnlabeled = 3,
  kTagVal = 4,
  kTagTest = 5
};

Dataset MakeSplit(uint64_t seed, const CorpusConfig &cfg, SplitTag tag,
                  int count, SupervisionKind kind, const std::string &prefix,
                  ThreadPool *pool) {
  Dataset ds;
  ds.classes = cfg.synth.classes;
  ds.sample_rate = cfg.synth.sample_rate;
  ds.clip_seconds = cfg.synth.clip_seconds;
  ds.label_frames = cfg.synth.label_frames;
  ds.label_hop_s = cfg.synth.label_hop_s;
  ds.clips.resize(count);
  ParallelFor(pool, count, [&](int i) {
    LabeledClip clip = SynthClip(Rng::Keyed(seed, tag, i), cfg.synth);
    if (kind == SupervisionKind::kWeak)
      clip = Weaken(clip);
    else if (kind == SupervisionKind::kUnlabeled)
      clip = Strip(clip);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d", i);
    clip.id = prefix + buf;
    ds.clips[i] = std::move(clip);
  });
  return ds;
}

json EventsToJson(const EventList &events) {
  json arr = json::array();
  for (int c = 0; c < events.classes(); ++c)
    for (const Interval &e : events.by_class[c])
      arr.push_back({{"class", c}, {"onset", e.onset}, {"offset", e.offset}});
  return arr;
}

EventList EventsFromJson(const json &arr, int classes) {
  EventList events(classes);
  for (const auto &e : arr) {
    const int c = e.at("class").get<int>();
    SEDKIT_CHECK(c >= 0 && c < classes, DataError, "event class out of range");
    events.Add(c, e.at("onset").get<double>(), e.at("offset").get<double>());
  }
  events.Normalize();
  return events;
}

}  // namespace

Corpus SynthCorpus(uint64_t seed, const CorpusConfig &cfg, ThreadPool *pool) {
  cfg.synth.Validate();
  Corpus corpus;
  corpus.train = MakeSplit(seed, cfg, kTagStrong, cfg.n_strong,
                           SupervisionKind::kStrong, "strong-", pool);
  Dataset weak = MakeSplit(seed, cfg, kTagWeak, cfg.n_weak,
                           SupervisionKind::kWeak, "weak-", pool);
  Dataset unlabeled = MakeSplit(seed, cfg, kTagUnlabeled, cfg.n_unlabeled,
                                SupervisionKind::kUnlabeled, "unlab-", pool);
  for (auto &c : weak.clips) corpus.train.clips.push_back(std::move(c));
  for (auto &c : unlabeled.clips) corpus.train.clips.push_back(std::move(c));
  corpus.val = MakeSplit(seed, cfg, kTagVal, cfg.n_val,
                         SupervisionKind::kStrong, "val-", pool);
  corpus.test = MakeSplit(seed, cfg, kTagTest, cfg.n_test,
                          SupervisionKind::kStrong, "test-", pool);
  return corpus;
}

void SaveDataset(const std::string &dir, const Dataset &ds, bool use_ssf) {
  fs::create_directories(fs::path(dir) / "clips");
  std::ofstream sidecar(fs::path(dir) / "labels.jsonl");
  SEDKIT_CHECK(sidecar.good(), DataError, "cannot write sidecar in " + dir);
  for (const LabeledClip &clip : ds.clips) {
    const std::string ext = use_ssf ? ".ssf" : ".wav";
    const fs::path file = fs::path(dir) / "clips" / (clip.id + ext);
    if (use_ssf)
      WriteSsf(file.string(), clip.waveform);
    else
      WriteWav(file.string(), clip.waveform);
    // The checksum covers the samples as re-read from disk.
    const Waveform reread =
        use_ssf ? ReadSsf(file.string()) : ReadWav(file.string());

    json rec;
    rec["id"] = clip.id;
    rec["kind"] = ToString(clip.kind);
    json weak = json::array();
    if (clip.weak)
      for (uint8_t v : clip.weak->vec) weak.push_back(static_cast<int>(v));
    rec["weak"] = weak;
    rec["events"] = clip.events ? EventsToJson(*clip.events) : json::array();
    rec["crc32"] = WaveformCrc32(reread);
    sidecar << rec.dump() << "\n";
  }
  SEDKIT_CHECK(sidecar.good(), DataError, "sidecar write failed in " + dir);
}

Dataset LoadDataset(const std::string &dir, const std::string &format,
                    int classes) {
  Dataset ds;
  ds.classes = classes;
  const fs::path sidecar_path = fs::path(dir) / "labels.jsonl";
  std::ifstream sidecar(sidecar_path);
  SEDKIT_CHECK(sidecar.good(), DataError,
               "missing sidecar: " + sidecar_path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(sidecar, line)) {
    ++lineno;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception &e) {
      throw DataError(sidecar_path.string() + " line " +
                      std::to_string(lineno) + ": " + e.what());
    }
    LabeledClip clip;
    try {
      clip.id = rec.at("id").get<std::string>();
      clip.kind = SupervisionKindFromString(rec.at("kind").get<std::string>());
      const auto weak_vec = rec.at("weak").get<std::vector<int>>();
      if (!weak_vec.empty()) {
        WeakLabel w;
        for (int v : weak_vec) w.vec.push_back(static_cast<uint8_t>(v));
        clip.weak = std::move(w);
      }
      clip.events = EventsFromJson(rec.at("events"), classes);
    } catch (const json::exception &e) {
      throw DataError(sidecar_path.string() + " line " +
                      std::to_string(lineno) + ": " + e.what());
    }

    const std::string ext = format == "ssf" ? ".ssf" : ".wav";
    const fs::path file = fs::path(dir) / "clips" / (clip.id + ext);
    clip.waveform = format == "ssf" ? ReadSsf(file.string())
                                    : ReadWav(file.string());
    if (rec.contains("crc32")) {
      SEDKIT_CHECK(WaveformCrc32(clip.waveform) == rec["crc32"].get<uint32_t>(),
                   DataError, "checksum mismatch: " + file.string());
    }
    ds.clips.push_back(std::move(clip));
  }
  return ds;
}

void SaveCorpus(const std::string &dir, const Corpus &corpus, bool use_ssf) {
  fs::create_directories(dir);
  const Dataset &t = corpus.train;
  json manifest{{"classes", t.classes},
                {"sample_rate", t.sample_rate},
                {"clip_seconds", t.clip_seconds},
                {"label_frames", t.label_frames},
                {"label_hop_s", t.label_hop_s},
                {"format", use_ssf ? "ssf" : "wav"},
                {"splits", {"train", "val", "test"}}};
  std::ofstream mf(fs::path(dir) / "dataset.json");
  SEDKIT_CHECK(mf.good(), DataError, "cannot write manifest in " + dir);
  mf << manifest.dump(2) << "\n";
  SaveDataset((fs::path(dir) / "train").string(), corpus.train, use_ssf);
  SaveDataset((fs::path(dir) / "val").string(), corpus.val, use_ssf);
  SaveDataset((fs::path(dir) / "test").string(), corpus.test, use_ssf);
}

Corpus LoadCorpus(const std::string &dir) {
  const fs::path manifest_path = fs::path(dir) / "dataset.json";
  std::ifstream mf(manifest_path);
  SEDKIT_CHECK(mf.good(), DataError,
               "missing manifest: " + manifest_path.string());
  json manifest;
  try {
    mf >> manifest;
  } catch (const json::exception &e) {
    throw DataError(manifest_path.string() + ": " + e.what());
  }
  const int classes = manifest.at("classes").get<int>();
  const std::string format = manifest.at("format").get<std::string>();

  Corpus corpus;
  for (auto [name, ds] : {std::pair<const char *, Dataset *>{"train", &corpus.train},
                          {"val", &corpus.val},
                          {"test", &corpus.test}}) {
    *ds = LoadDataset((fs::path(dir) / name).string(), format, classes);
    ds->classes = classes;
    ds->sample_rate = manifest.at("sample_rate").get<int>();
    ds->clip_seconds = manifest.at("clip_seconds").get<double>();
    ds->label_frames = manifest.at("label_frames").get<int>();
    ds->label_hop_s = manifest.at("label_hop_s").get<double>();
    // Strong grids are regenerated from events at the manifest geometry.
    for (LabeledClip &clip : ds->clips) {
      if (clip.kind == SupervisionKind::kStrong && clip.events) {
        clip.strong = RasterizeEvents(*clip.events, ds->label_frames,
                                      ds->label_hop_s);
        if (!clip.weak) clip.weak = WeakFromStrong(*clip.strong);
      }
      ValidateClip(clip);
    }
  }
  return corpus;
}

BatchSampler::BatchSampler(const Dataset &ds, BatchComposition comp,
                           uint64_t seed)
    : ds_(ds), comp_(comp), seed_(seed) {
  strong_.order = ds.IndicesOfKind(SupervisionKind::kStrong);
  weak_.order = ds.IndicesOfKind(SupervisionKind::kWeak);
  unlabeled_.order = ds.IndicesOfKind(SupervisionKind::kUnlabeled);
  SEDKIT_CHECK(static_cast<int>(strong_.order.size()) >= comp.n_strong &&
                   static_cast<int>(weak_.order.size()) >= comp.n_weak &&
                   static_cast<int>(unlabeled_.order.size()) >= comp.n_unlabeled,
               DataError, "batch sampler: a pool is smaller than its quota");
  steps_per_epoch_ = comp.n_strong > 0
                         ? static_cast<int>((strong_.order.size() +
                                             comp.n_strong - 1) /
                                            comp.n_strong)
                         : 1;
  StartEpoch(0);
}

void BatchSampler::StartEpoch(int epoch) {
  epoch_ = epoch;
  int tag = 0;
  for (Pool *pool : {&strong_, &weak_, &unlabeled_}) {
    Rng rng = Rng::Keyed(seed_, 0x7368756666ULL, epoch, tag++);
    rng.Shuffle(&pool->order);
    pool->cursor = 0;
  }
}

int BatchSampler::Draw(Pool *pool) {
  if (pool->cursor >= pool->order.size()) {
    // Mid-epoch wrap: reshuffle and continue without replacement.
    Rng rng = Rng::Keyed(seed_, 0x77726170ULL, epoch_, ++wraps_);
    rng.Shuffle(&pool->order);
    pool->cursor = 0;
  }
  return pool->order[pool->cursor++];
}

Batch BatchSampler::NextBatch() {
  Batch batch;
  batch.composition = comp_;
  batch.indices.reserve(comp_.total());
  for (int i = 0; i < comp_.n_strong; ++i) batch.indices.push_back(Draw(&strong_));
  for (int i = 0; i < comp_.n_weak; ++i) batch.indices.push_back(Draw(&weak_));
  for (int i = 0; i < comp_.n_unlabeled; ++i)
    batch.indices.push_back(Draw(&unlabeled_));
  return batch;
}

}  // namespace data
}  // namespace sedkit
