// core/include/sedkit/tape.h

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

#ifndef SEDKIT_TAPE_H_
#define SEDKIT_TAPE_H_

#include <functional>
#include <utility>
#include <vector>

#include "sedkit/tensor.h"

namespace sedkit {
namespace nn {

// Reverse-mode tape over tensor-level operations. Each op records its value
// and a closure that scatters the output gradient back to its inputs.
// A tape may be walked backward exactly once.
template <typename T>
class Tape {
 public:
  using VarId = int;

  explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}
  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  bool grad_enabled() const { return grad_enabled_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  VarId Leaf(Tensor<T> value, bool needs_grad);
  VarId Constant(Tensor<T> value) { return Leaf(std::move(value), false); }
  // Re-enters a value as a gradient-free constant.
  VarId Detach(VarId x) { return Constant(value(x)); }

  const Tensor<T> &value(VarId id) const { return nodes_[id].value; }
  const Tensor<T> &grad(VarId id) const { return nodes_[id].grad; }
  T scalar(VarId id) const { return nodes_[id].value.data[0]; }

  // Elementwise; shapes must match.
  VarId Add(VarId a, VarId b);
  VarId Sub(VarId a, VarId b);
  VarId Mul(VarId a, VarId b);
  VarId Sigmoid(VarId x);

  // y = x * c for a plain constant.
  VarId Scale(VarId x, T c);

  // a: M x K, b: K x N -> M x N.
  VarId MatMul(VarId a, VarId b);
  // x: M x N, bias: N (broadcast over rows).
  VarId AddRowBias(VarId x, VarId bias);

  // x: Cin x H x W, w: Cout x (Cin*9), bias: Cout; 3x3 kernel, same padding.
  VarId Conv3x3(VarId x, VarId w, VarId bias);
  // x: Cin x H x W, w: Cout x Cin, bias: Cout.
  VarId Conv1x1(VarId x, VarId w, VarId bias);
  // x: C x H x W with even H, W -> C x H/2 x W/2.
  VarId AvgPool2x2(VarId x);
  // x: 2C x H x W -> first half gated by sigmoid of second half.
  VarId Glu(VarId x);
  // x: C x H x W -> H x (C*W), one row per time frame.
  VarId FlattenTime(VarId x);

  // x: T x D; per-direction params w: 3H x D, u: 3H x H, b: 3H
  // (gate order r, z, n). Output T x 2H, forward direction first.
  VarId BiGru(VarId x, VarId wf, VarId uf, VarId bf, VarId wb, VarId ub,
              VarId bb);

  // Column-wise softmax over rows (time axis) of a T x C matrix.
  VarId SoftmaxTime(VarId x);
  // T x C -> C.
  VarId SumTime(VarId x);
  VarId MeanTime(VarId x);

  // out[i] = x[map[i]] rows; map entry -1 produces a zero row and drops
  // gradient. x: T x C -> len(map) x C.
  VarId GatherRows(VarId x, std::vector<int> map);

  // Scalars.
  VarId MeanAll(VarId x);
  // mean of squared entries.
  VarId SquareMean(VarId x);
  // Binary cross-entropy against constant targets, predictions clamped to
  // [clamp, 1-clamp]; mean over all cells.
  VarId BceMean(VarId pred, Tensor<T> target, T clamp);
  // sum_i coeff_i * scalar_i.
  VarId WeightedSum(const std::vector<std::pair<VarId, T>> &terms);

  // Seeds d(loss)/d(loss) = 1 and walks the tape backward.
  void Backward(VarId loss);
  // Seeds the given output gradients instead (two-level tapes).
  void BackwardSeeded(const std::vector<std::pair<VarId, Tensor<T>>> &seeds);

 private:
  struct Node {
    Tensor<T> value;
    Tensor<T> grad;
    std::function<void(Tape &)> back;
    bool needs_grad = false;
  };

  VarId Emit(Tensor<T> value, bool needs_grad, std::function<void(Tape &)> back);
  Tensor<T> &grad_mut(VarId id) { return nodes_[id].grad; }
  bool NeedsGrad(VarId id) const { return nodes_[id].needs_grad; }
  void RunBackward(VarId from);

  std::vector<Node> nodes_;
  bool grad_enabled_;
  bool consumed_ = false;
};

}  // namespace nn
}  // namespace sedkit

#endif  // SEDKIT_TAPE_H_
