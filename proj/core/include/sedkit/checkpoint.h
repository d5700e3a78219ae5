// core/include/sedkit/checkpoint.h

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

#ifndef SEDKIT_CHECKPOINT_H_
#define SEDKIT_CHECKPOINT_H_

#include <optional>
#include <string>

#include "sedkit/network.h"

namespace sedkit {
namespace nn {

// Versioned binary checkpoint, magic "SEDM1": config header, float32
// little-endian parameter vector, then Adam moments when present.
void SaveCheckpoint(const std::string &path, const ModelState<float> &state,
                    const AdamState<float> *opt = nullptr);

struct Checkpoint {
  ModelState<float> state;
  std::optional<AdamState<float>> opt;
};

Checkpoint LoadCheckpoint(const std::string &path);

}  // namespace nn
}  // namespace sedkit

#endif  // SEDKIT_CHECKPOINT_H_
