// core/src/losses.cc

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

#include "sedkit/losses.h"

#include "sedkit/common.h"

namespace sedkit {
namespace train {

Method MethodFromString(const std::string &s) {
  if (s == "supervised") return Method::kSupervised;
  if (s == "mt") return Method::kMt;
  if (s == "mt_rda") return Method::kMtRda;
  if (s == "cr_rda") return Method::kCrRda;
  if (s == "mt_cr_rda") return Method::kMtCrRda;
  throw ConfigError("unknown method: " + s);
}

const char *ToString(Method m) {
  switch (m) {
    case Method::kSupervised:
      return "supervised";
    case Method::kMt:
      return "mt";
    case Method::kMtRda:
      return "mt_rda";
    case Method::kCrRda:
      return "cr_rda";
    default:
      return "mt_cr_rda";
  }
}

LossWeights WeightsFor(Method m) {
  switch (m) {
    case Method::kSupervised:
      return {0.0, 0.0};
    case Method::kMt:
    case Method::kMtRda:
      return {2.0, 0.0};
    case Method::kCrRda:
      return {0.0, 2.0};
    default:
      return {2.0, 2.0};
  }
}

bool UsesRda(Method m) {
  return m == Method::kMtRda || m == Method::kCrRda || m == Method::kMtCrRda;
}

bool UsesTeacher(Method m) { return WeightsFor(m).lambda_unsuper > 0.0; }

double TotalLoss(const LossWeights &w, double ramp, double l_super,
                 double l_unsuper, double l_cr) {
  return l_super + ramp * w.lambda_unsuper * l_unsuper +
         ramp * w.lambda_cr * l_cr;
}

template <typename T>
VarOf<T> SupervisedLoss(
    nn::Tape<T> *tp,
    const std::vector<std::pair<VarOf<T>, nn::Tensor<T>>> &strong_items,
    const std::vector<std::pair<VarOf<T>, nn::Tensor<T>>> &weak_items,
    T clamp) {
  std::vector<std::pair<VarOf<T>, T>> terms;
  if (!strong_items.empty()) {
    const T inv = T(1) / T(strong_items.size());
    for (const auto &[pred, label] : strong_items)
      terms.push_back({tp->BceMean(pred, label, clamp), inv});
  }
  if (!weak_items.empty()) {
    const T inv = T(1) / T(weak_items.size());
    for (const auto &[pred, label] : weak_items)
      terms.push_back({tp->BceMean(pred, label, clamp), inv});
  }
  if (terms.empty()) return tp->Constant(nn::Tensor<T>::Scalar(0));
  return tp->WeightedSum(terms);
}

template <typename T>
VarOf<T> MeanTeacherLoss(nn::Tape<T> *tp,
                         const std::vector<VarOf<T>> &student_strong,
                         const std::vector<nn::Tensor<T>> &teacher_strong,
                         const std::vector<VarOf<T>> &student_weak,
                         const std::vector<nn::Tensor<T>> &teacher_weak) {
  SEDKIT_CHECK(student_strong.size() == teacher_strong.size() &&
                   student_weak.size() == teacher_weak.size() &&
                   student_strong.size() == student_weak.size(),
               NumericError, "meanteacher loss: clip count mismatch");
  const size_t n = student_strong.size();
  if (n == 0) return tp->Constant(nn::Tensor<T>::Scalar(0));
  std::vector<std::pair<VarOf<T>, T>> terms;
  const T inv = T(1) / T(n);
  for (size_t i = 0; i < n; ++i) {
    auto ds = tp->Sub(student_strong[i], tp->Constant(teacher_strong[i]));
    terms.push_back({tp->SquareMean(ds), inv});
    auto dw = tp->Sub(student_weak[i], tp->Constant(teacher_weak[i]));
    terms.push_back({tp->SquareMean(dw), inv});
  }
  return tp->WeightedSum(terms);
}

template <typename T>
VarOf<T> ConsistencyLoss(nn::Tape<T> *tp,
                         const std::vector<ConsistencyView<T>> &views,
                         int label_frames, int classes) {
  if (views.empty()) return tp->Constant(nn::Tensor<T>::Scalar(0));
  std::vector<std::pair<VarOf<T>, T>> terms;
  const T inv = T(1) / T(views.size());

  for (const ConsistencyView<T> &v : views) {
    VarOf<T> ref_strong = v.orig_strong;
    VarOf<T> ref_weak = v.orig_weak;
    for (const aug::TransportStep &step : *v.steps) {
      if (step.is_mixup) {
        // Binarized OR of the two parents' predictions; non-differentiable,
        // so it enters as a constant.
        const nn::Tensor<T> &mine = tp->value(ref_strong);
        const nn::Tensor<T> &partner =
            tp->value((*v.batch_strong)[step.partner_pos]);
        nn::Tensor<T> merged({label_frames, classes});
        for (int64_t i = 0; i < merged.numel(); ++i)
          merged.data[i] =
              (mine.data[i] > T(0.5) || partner.data[i] > T(0.5)) ? T(1) : T(0);
        ref_strong = tp->Constant(std::move(merged));

        const nn::Tensor<T> &mw = tp->value(ref_weak);
        const nn::Tensor<T> &pw = tp->value((*v.batch_weak)[step.partner_pos]);
        nn::Tensor<T> merged_w({classes});
        for (int c = 0; c < classes; ++c)
          merged_w.data[c] =
              (mw.data[c] > T(0.5) || pw.data[c] > T(0.5)) ? T(1) : T(0);
        ref_weak = tp->Constant(std::move(merged_w));
      } else if (step.id == aug::TransformId::kSpeed ||
                 step.id == aug::TransformId::kTimeStretch ||
                 step.id == aug::TransformId::kTimeShift) {
        ref_strong = tp->GatherRows(
            ref_strong,
            aug::TransportIndexMap(step.id, step.draws, label_frames));
      }
      // Pitch shift, DRC and the masks leave the reference unchanged.
    }
    terms.push_back({tp->SquareMean(tp->Sub(ref_strong, v.view_strong)), inv});
    terms.push_back({tp->SquareMean(tp->Sub(ref_weak, v.view_weak)), inv});
  }
  return tp->WeightedSum(terms);
}

#define SEDKIT_INSTANTIATE_LOSSES(T)                                         \
  template VarOf<T> SupervisedLoss<T>(                                       \
      nn::Tape<T> *, const std::vector<std::pair<VarOf<T>, nn::Tensor<T>>> &, \
      const std::vector<std::pair<VarOf<T>, nn::Tensor<T>>> &, T);           \
  template VarOf<T> MeanTeacherLoss<T>(                                      \
      nn::Tape<T> *, const std::vector<VarOf<T>> &,                          \
      const std::vector<nn::Tensor<T>> &, const std::vector<VarOf<T>> &,     \
      const std::vector<nn::Tensor<T>> &);                                   \
  template VarOf<T> ConsistencyLoss<T>(                                      \
      nn::Tape<T> *, const std::vector<ConsistencyView<T>> &, int, int);

SEDKIT_INSTANTIATE_LOSSES(float)
SEDKIT_INSTANTIATE_LOSSES(double)

#undef SEDKIT_INSTANTIATE_LOSSES

}  // namespace train
}  // namespace sedkit
