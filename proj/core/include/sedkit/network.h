// core/include/sedkit/network.h

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

#ifndef SEDKIT_NETWORK_H_
#define SEDKIT_NETWORK_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sedkit/mel.h"
#include "sedkit/tape.h"
#include "sedkit/tensor.h"

namespace sedkit {
namespace nn {

enum class Activation { kGlu, kCg };
enum class PoolingHead { kAttention, kMean };

Activation ActivationFromString(const std::string &s);
PoolingHead PoolingHeadFromString(const std::string &s);
std::string ToString(Activation a);
std::string ToString(PoolingHead p);

// Gated CRNN: conv blocks with 2x2 average pooling, one bidirectional GRU,
// per-frame sigmoid dense head, weak head by attention or mean pooling.
struct ModelConfig {
  int conv_blocks = 2;
  std::vector<int> channels = {4, 8};  // output channels per block
  int pool_factor = 4;                 // total time pooling; 2 per conv block
  Activation activation = Activation::kGlu;
  int recurrent_hidden = 32;
  int classes = 4;
  PoolingHead pooling_head = PoolingHead::kAttention;
  int n_mels = 64;

  void Validate() const;
  // Frame count after padding t frames up to a pool_factor multiple.
  int PaddedFrames(int t) const;
  int OutputFrames(int t) const { return PaddedFrames(t) / pool_factor; }
};

// Named slices of the flat parameter vector.
struct ParamLayout {
  struct Entry {
    std::string name;
    std::vector<int> shape;
    int64_t offset = 0;
    int fan_in = 0;   // 0 disables the uniform init (biases start at zero)
    int fan_out = 0;
  };
  std::vector<Entry> entries;
  int64_t total = 0;

  static ParamLayout FromConfig(const ModelConfig &cfg);
};

template <typename T>
struct ModelState {
  ModelConfig config;
  std::vector<T> params;
};

// Uniform(-a, a) with a = sqrt(6 / (fan_in + fan_out)); biases zero.
template <typename T>
ModelState<T> InitModel(const ModelConfig &cfg, uint64_t seed);

// Plain prediction values; entries lie strictly inside (0, 1).
template <typename T>
struct Prediction {
  Tensor<T> strong;  // T' x C
  Tensor<T> weak;    // C
};

// Forward pass over one clip. Holds the tape so callers can run losses on
// the outputs and pull parameter gradients back out.
template <typename T>
struct ForwardResult {
  std::shared_ptr<Tape<T>> tape;
  typename Tape<T>::VarId strong_var = -1;
  typename Tape<T>::VarId weak_var = -1;
  std::vector<typename Tape<T>::VarId> param_vars;

  const Tensor<T> &strong() const { return tape->value(strong_var); }
  const Tensor<T> &weak() const { return tape->value(weak_var); }
  Prediction<T> prediction() const { return {strong(), weak()}; }
};

// input: T x n_mels log-mel frames (T already padded to a pool_factor
// multiple, see PrepareInput). with_grad=false skips tape bookkeeping.
template <typename T>
ForwardResult<T> Forward(const ModelState<T> &state, const Tensor<T> &input,
                         bool with_grad);

// After the result's tape was walked backward, copies parameter gradients
// into one flat vector matching the params layout.
template <typename T>
std::vector<T> CollectParamGrad(const ForwardResult<T> &fr,
                                const ModelConfig &cfg);

// Converts a mel spectrogram into a model input tensor, padding trailing
// frames with the mel floor so pool_factor divides T.
template <typename T>
Tensor<T> PrepareInput(const dsp::MelSpectrogram &mel, const ModelConfig &cfg,
                       double floor_log);

// Adam with bias correction; moments live beside the model state.
template <typename T>
struct AdamState {
  std::vector<T> m, v;
  int64_t t = 0;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
};

// Raises NumericError naming the first offending index if grad is not finite.
template <typename T>
void AdamStep(ModelState<T> *state, AdamState<T> *opt, const std::vector<T> &grad,
              double lr);

}  // namespace nn
}  // namespace sedkit

#endif  // SEDKIT_NETWORK_H_
