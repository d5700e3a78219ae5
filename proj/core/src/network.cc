// core/src/network.cc

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

#include "sedkit/network.h"

#include <cmath>

#include "sedkit/common.h"
#include "sedkit/rng.h"

namespace sedkit {
namespace nn {

Activation ActivationFromString(const std::string &s) {
  if (s == "glu") return Activation::kGlu;
  if (s == "cg") return Activation::kCg;
  throw ConfigError("unknown activation: " + s);
}

PoolingHead PoolingHeadFromString(const std::string &s) {
  if (s == "attention") return PoolingHead::kAttention;
  if (s == "mean") return PoolingHead::kMean;
  throw ConfigError("unknown pooling head: " + s);
}

std::string ToString(Activation a) {
  return a == Activation::kGlu ? "glu" : "cg";
}
std::string ToString(PoolingHead p) {
  return p == PoolingHead::kAttention ? "attention" : "mean";
}

void ModelConfig::Validate() const {
  SEDKIT_CHECK(conv_blocks >= 1, ConfigError, "conv_blocks must be >= 1");
  SEDKIT_CHECK(static_cast<int>(channels.size()) == conv_blocks, ConfigError,
               "channels must list one entry per conv block");
  for (int c : channels)
    SEDKIT_CHECK(c >= 1, ConfigError, "channel counts must be >= 1");
  SEDKIT_CHECK(pool_factor == (1 << conv_blocks), ConfigError,
               "pool_factor must equal 2^conv_blocks");
  SEDKIT_CHECK(n_mels % pool_factor == 0, ConfigError,
               "n_mels must be divisible by 2^conv_blocks");
  SEDKIT_CHECK(recurrent_hidden >= 1, ConfigError,
               "recurrent_hidden must be >= 1");
  SEDKIT_CHECK(classes >= 1, ConfigError, "classes must be >= 1");
}

int ModelConfig::PaddedFrames(int t) const {
  return (t + pool_factor - 1) / pool_factor * pool_factor;
}

ParamLayout ParamLayout::FromConfig(const ModelConfig &cfg) {
  cfg.Validate();
  ParamLayout layout;
  auto add = [&layout](const std::string &name, std::vector<int> shape,
                       int fan_in, int fan_out) {
    Entry e;
    e.name = name;
    e.shape = std::move(shape);
    e.offset = layout.total;
    e.fan_in = fan_in;
    e.fan_out = fan_out;
    layout.total += Tensor<float>::NumelOf(e.shape);
    layout.entries.push_back(std::move(e));
  };

  int cin = 1;
  for (int b = 0; b < cfg.conv_blocks; ++b) {
    const int cout = cfg.channels[b];
    const int conv_out = cfg.activation == Activation::kGlu ? 2 * cout : cout;
    add("conv" + std::to_string(b) + ".w", {conv_out, cin * 9}, cin * 9,
        conv_out * 9);
    add("conv" + std::to_string(b) + ".b", {conv_out}, 0, 0);
    if (cfg.activation == Activation::kCg) {
      add("cg" + std::to_string(b) + ".w", {cout, cout}, cout, cout);
      add("cg" + std::to_string(b) + ".b", {cout}, 0, 0);
    }
    cin = cout;
  }

  const int feat = cin * (cfg.n_mels / cfg.pool_factor);
  const int h = cfg.recurrent_hidden;
  for (const char *dir : {"f", "b"}) {
    add(std::string("gru.") + dir + ".w", {3 * h, feat}, feat, h);
    add(std::string("gru.") + dir + ".u", {3 * h, h}, h, h);
    add(std::string("gru.") + dir + ".b", {3 * h}, 0, 0);
  }

  add("strong.w", {2 * h, cfg.classes}, 2 * h, cfg.classes);
  add("strong.b", {cfg.classes}, 0, 0);
  if (cfg.pooling_head == PoolingHead::kAttention) {
    add("att.w", {2 * h, cfg.classes}, 2 * h, cfg.classes);
    add("att.b", {cfg.classes}, 0, 0);
  }
  return layout;
}

template <typename T>
ModelState<T> InitModel(const ModelConfig &cfg, uint64_t seed) {
  const ParamLayout layout = ParamLayout::FromConfig(cfg);
  ModelState<T> state;
  state.config = cfg;
  state.params.assign(layout.total, T(0));
  Rng rng = Rng::Keyed(seed, 0x6d6f64656cULL);  // independent init stream
  for (const auto &e : layout.entries) {
    const int64_t n = Tensor<T>::NumelOf(e.shape);
    if (e.fan_in == 0) continue;  // bias
    const double a = std::sqrt(6.0 / (e.fan_in + e.fan_out));
    for (int64_t i = 0; i < n; ++i)
      state.params[e.offset + i] = static_cast<T>(rng.Uniform(-a, a));
  }
  return state;
}

template <typename T>
Tensor<T> PrepareInput(const dsp::MelSpectrogram &mel, const ModelConfig &cfg,
                       double floor_log) {
  SEDKIT_CHECK(mel.bins == cfg.n_mels, ConfigError,
               "mel bins do not match model n_mels");
  const int t_pad = cfg.PaddedFrames(mel.frames);
  Tensor<T> input({t_pad, cfg.n_mels});
  for (int t = 0; t < mel.frames; ++t)
    for (int k = 0; k < cfg.n_mels; ++k)
      input.data[int64_t(t) * cfg.n_mels + k] = static_cast<T>(mel.at(t, k));
  for (int t = mel.frames; t < t_pad; ++t)
    for (int k = 0; k < cfg.n_mels; ++k)
      input.data[int64_t(t) * cfg.n_mels + k] = static_cast<T>(floor_log);
  return input;
}

template <typename T>
ForwardResult<T> Forward(const ModelState<T> &state, const Tensor<T> &input,
                         bool with_grad) {
  const ModelConfig &cfg = state.config;
  const ParamLayout layout = ParamLayout::FromConfig(cfg);
  SEDKIT_CHECK(static_cast<int64_t>(state.params.size()) == layout.total,
               ConfigError, "parameter vector does not match config");
  SEDKIT_CHECK(input.rank() == 2 && input.dim(1) == cfg.n_mels &&
                   input.dim(0) % cfg.pool_factor == 0,
               ConfigError, "model input must be padded T x n_mels");

  ForwardResult<T> fr;
  fr.tape = std::make_shared<Tape<T>>(with_grad);
  Tape<T> &tp = *fr.tape;

  // One leaf per parameter tensor, viewing the flat vector.
  std::vector<typename Tape<T>::VarId> pv;
  pv.reserve(layout.entries.size());
  for (const auto &e : layout.entries) {
    Tensor<T> t(e.shape);
    std::copy(state.params.begin() + e.offset,
              state.params.begin() + e.offset + t.numel(), t.data.begin());
    pv.push_back(tp.Leaf(std::move(t), true));
  }
  fr.param_vars = pv;

  const int t_pad = input.dim(0);
  Tensor<T> x0 = input;
  x0.shape = {1, t_pad, cfg.n_mels};
  auto x = tp.Leaf(std::move(x0), false);

  int p = 0;
  for (int b = 0; b < cfg.conv_blocks; ++b) {
    auto conv = tp.Conv3x3(x, pv[p], pv[p + 1]);
    p += 2;
    if (cfg.activation == Activation::kGlu) {
      x = tp.Glu(conv);
    } else {
      auto gate = tp.Sigmoid(tp.Conv1x1(conv, pv[p], pv[p + 1]));
      p += 2;
      x = tp.Mul(conv, gate);
    }
    x = tp.AvgPool2x2(x);
  }

  auto frames = tp.FlattenTime(x);  // T' x feat
  auto rnn = tp.BiGru(frames, pv[p], pv[p + 1], pv[p + 2], pv[p + 3],
                      pv[p + 4], pv[p + 5]);
  p += 6;

  auto strong_logits = tp.AddRowBias(tp.MatMul(rnn, pv[p]), pv[p + 1]);
  p += 2;
  fr.strong_var = tp.Sigmoid(strong_logits);

  if (cfg.pooling_head == PoolingHead::kAttention) {
    auto att_logits = tp.AddRowBias(tp.MatMul(rnn, pv[p]), pv[p + 1]);
    p += 2;
    auto alpha = tp.SoftmaxTime(att_logits);
    fr.weak_var = tp.SumTime(tp.Mul(alpha, fr.strong_var));
  } else {
    fr.weak_var = tp.MeanTime(fr.strong_var);
  }
  return fr;
}

template <typename T>
std::vector<T> CollectParamGrad(const ForwardResult<T> &fr,
                                const ModelConfig &cfg) {
  const ParamLayout layout = ParamLayout::FromConfig(cfg);
  std::vector<T> grad(layout.total, T(0));
  for (size_t i = 0; i < layout.entries.size(); ++i) {
    const auto &e = layout.entries[i];
    const Tensor<T> &g = fr.tape->grad(fr.param_vars[i]);
    std::copy(g.data.begin(), g.data.end(), grad.begin() + e.offset);
  }
  return grad;
}

template <typename T>
void AdamStep(ModelState<T> *state, AdamState<T> *opt, const std::vector<T> &grad,
              double lr) {
  const size_t n = state->params.size();
  SEDKIT_CHECK(grad.size() == n, ConfigError, "adam: gradient size mismatch");
  for (size_t i = 0; i < n; ++i) {
    if (!std::isfinite(static_cast<double>(grad[i])))
      throw NumericError("adam: non-finite gradient at index " +
                         std::to_string(i));
  }
  if (opt->m.empty()) {
    opt->m.assign(n, T(0));
    opt->v.assign(n, T(0));
  }
  SEDKIT_CHECK(opt->m.size() == n && opt->v.size() == n, ConfigError,
               "adam: moment size mismatch");
  opt->t += 1;
  const double b1 = opt->beta1, b2 = opt->beta2;
  const double mhat_c = 1.0 / (1.0 - std::pow(b1, static_cast<double>(opt->t)));
  const double vhat_c = 1.0 / (1.0 - std::pow(b2, static_cast<double>(opt->t)));
  for (size_t i = 0; i < n; ++i) {
    const double g = grad[i];
    const double m = b1 * opt->m[i] + (1.0 - b1) * g;
    const double v = b2 * opt->v[i] + (1.0 - b2) * g * g;
    opt->m[i] = static_cast<T>(m);
    opt->v[i] = static_cast<T>(v);
    state->params[i] -= static_cast<T>(
        lr * (m * mhat_c) / (std::sqrt(v * vhat_c) + opt->eps));
  }
}

template ModelState<float> InitModel<float>(const ModelConfig &, uint64_t);
template ModelState<double> InitModel<double>(const ModelConfig &, uint64_t);
template Tensor<float> PrepareInput<float>(const dsp::MelSpectrogram &,
                                           const ModelConfig &, double);
template Tensor<double> PrepareInput<double>(const dsp::MelSpectrogram &,
                                             const ModelConfig &, double);
template ForwardResult<float> Forward<float>(const ModelState<float> &,
                                             const Tensor<float> &, bool);
template ForwardResult<double> Forward<double>(const ModelState<double> &,
                                               const Tensor<double> &, bool);
template std::vector<float> CollectParamGrad<float>(
    const ForwardResult<float> &, const ModelConfig &);
template std::vector<double> CollectParamGrad<double>(
    const ForwardResult<double> &, const ModelConfig &);
template void AdamStep<float>(ModelState<float> *, AdamState<float> *,
                              const std::vector<float> &, double);
template void AdamStep<double>(ModelState<double> *, AdamState<double> *,
                               const std::vector<double> &, double);

}  // namespace nn
}  // namespace sedkit
