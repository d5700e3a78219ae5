// core/include/sedkit/dataset.h

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

#ifndef SEDKIT_DATASET_H_
#define SEDKIT_DATASET_H_

#include <string>
#include <vector>

#include "sedkit/labels.h"
#include "sedkit/rng.h"
#include "sedkit/synth.h"
#include "sedkit/thread_pool.h"

namespace sedkit {
namespace data {

// An immutable set of clips sharing one geometry.
struct Dataset {
  int classes = 0;
  int sample_rate = 16000;
  double clip_seconds = 0.0;
  int label_frames = 0;
  double label_hop_s = 0.0;
  std::vector<LabeledClip> clips;

  std::vector<int> IndicesOfKind(SupervisionKind k) const;
};

// Train pools plus held-out strong splits.
struct Corpus {
  Dataset train;  // strong + weak + unlabeled
  Dataset val;    // strong
  Dataset test;   // strong
};

struct CorpusConfig {
  SynthConfig synth;
  int n_strong = 200;
  int n_weak = 200;
  int n_unlabeled = 600;
  int n_val = 100;
  int n_test = 200;
};

// Deterministic per (seed, split, clip ordinal); generation is parallel per
// clip when a pool is given.
Corpus SynthCorpus(uint64_t seed, const CorpusConfig &cfg,
                   ThreadPool *pool = nullptr);

// On-disk layout: <dir>/dataset.json manifest plus one subdirectory per
// split holding clips/<id>.{wav,ssf} and labels.jsonl. Sidecar records are
// {"id", "kind", "weak", "events", "crc32"}.
void SaveCorpus(const std::string &dir, const Corpus &corpus,
                bool use_ssf = false);
Corpus LoadCorpus(const std::string &dir);

void SaveDataset(const std::string &dir, const Dataset &ds, bool use_ssf);
Dataset LoadDataset(const std::string &dir, const std::string &format,
                    int classes);

struct BatchComposition {
  int n_strong = 2;
  int n_weak = 2;
  int n_unlabeled = 4;
  int total() const { return n_strong + n_weak + n_unlabeled; }
};

struct Batch {
  // Indices into the dataset's clips: strong quota first, then weak, then
  // unlabeled.
  std::vector<int> indices;
  BatchComposition composition;
};

// Without-replacement sampling per pool; a pool exhausted mid-epoch wraps
// with a reshuffle (counted). One epoch is one pass over the strong pool.
class BatchSampler {
 public:
  BatchSampler(const Dataset &ds, BatchComposition comp, uint64_t seed);

  void StartEpoch(int epoch);
  Batch NextBatch();
  int steps_per_epoch() const { return steps_per_epoch_; }
  int64_t wrap_count() const { return wraps_; }

 private:
  struct Pool {
    std::vector<int> order;
    size_t cursor = 0;
  };
  int Draw(Pool *pool);

  const Dataset &ds_;
  BatchComposition comp_;
  uint64_t seed_;
  int epoch_ = 0;
  Pool strong_, weak_, unlabeled_;
  int steps_per_epoch_ = 0;
  int64_t wraps_ = 0;
};

}  // namespace data
}  // namespace sedkit

#endif  // SEDKIT_DATASET_H_
