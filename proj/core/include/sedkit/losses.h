// core/include/sedkit/losses.h

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

#ifndef SEDKIT_LOSSES_H_
#define SEDKIT_LOSSES_H_

#include <string>
#include <utility>
#include <vector>

#include "sedkit/augment.h"
#include "sedkit/tape.h"

namespace sedkit {
namespace train {

enum class Method { kSupervised, kMt, kMtRda, kCrRda, kMtCrRda };

Method MethodFromString(const std::string &s);
const char *ToString(Method m);

struct LossWeights {
  double lambda_unsuper = 2.0;
  double lambda_cr = 2.0;
};

// MT methods: (2, 0); CR: (0, 2); MT+CR: (2, 2); plain supervised: (0, 0).
LossWeights WeightsFor(Method m);
bool UsesRda(Method m);       // every method except supervised and plain MT
bool UsesTeacher(Method m);   // lambda_unsuper > 0

// Weighted sum with the epoch's ramp factor applied to both lambdas.
double TotalLoss(const LossWeights &w, double ramp, double l_super,
                 double l_unsuper, double l_cr);

template <typename T>
using VarOf = typename nn::Tape<T>::VarId;

// Supervised classification loss: mean binary cross-entropy over the strong
// items' cells plus mean BCE over the weak items' cells. Either list may be
// empty (that term contributes 0).
template <typename T>
VarOf<T> SupervisedLoss(
    nn::Tape<T> *tp,
    const std::vector<std::pair<VarOf<T>, nn::Tensor<T>>> &strong_items,
    const std::vector<std::pair<VarOf<T>, nn::Tensor<T>>> &weak_items,
    T clamp = T(1e-7));

// Mean squared error against the teacher's pseudo-labels (constants; no
// gradient reaches the teacher), over all clips, strong grids plus weak
// vectors.
template <typename T>
VarOf<T> MeanTeacherLoss(nn::Tape<T> *tp,
                         const std::vector<VarOf<T>> &student_strong,
                         const std::vector<nn::Tensor<T>> &teacher_strong,
                         const std::vector<VarOf<T>> &student_weak,
                         const std::vector<nn::Tensor<T>> &teacher_weak);

// One (clip, view) pair of the consistency term.
template <typename T>
struct ConsistencyView {
  VarOf<T> orig_strong = -1;
  VarOf<T> orig_weak = -1;
  VarOf<T> view_strong = -1;
  VarOf<T> view_weak = -1;
  // The view's transport program; mixup steps need the partner's original
  // prediction vars, indexed by batch position.
  const std::vector<aug::TransportStep> *steps = nullptr;
  const std::vector<VarOf<T>> *batch_strong = nullptr;
  const std::vector<VarOf<T>> *batch_weak = nullptr;
};

// Squared error between the transported original predictions and the view
// predictions, mean over strong cells plus mean over weak cells. Gradients
// flow through both sides except mixup references, which are binarized OR's
// and enter detached.
template <typename T>
VarOf<T> ConsistencyLoss(nn::Tape<T> *tp,
                         const std::vector<ConsistencyView<T>> &views,
                         int label_frames, int classes);

}  // namespace train
}  // namespace sedkit

#endif  // SEDKIT_LOSSES_H_
