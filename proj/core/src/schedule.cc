// core/src/schedule.cc

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

#include "sedkit/schedule.h"

#include <algorithm>
#include <cmath>

namespace sedkit {
namespace train {

double Rampup(double epoch, double end_epoch) {
  if (end_epoch <= 0.0) return 1.0;
  const double x = std::min(epoch / end_epoch, 1.0);
  return std::exp(-5.0 * (1.0 - x) * (1.0 - x));
}

int Schedule::Milestone(int reference_epoch) const {
  const double scale = static_cast<double>(total_epochs) / reference_epochs;
  return std::max(1, static_cast<int>(std::lround(reference_epoch * scale)));
}

double Schedule::LrAt(int epoch) const {
  if (epoch >= Decay2()) return decay2_lr;
  if (epoch >= Decay1()) return decay1_lr;
  return base_lr * Rampup(epoch, RampEnd());
}

double Schedule::RampAt(int epoch) const { return Rampup(epoch, RampEnd()); }

}  // namespace train
}  // namespace sedkit
