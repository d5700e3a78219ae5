// core/include/sedkit/schedule.h

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

#ifndef SEDKIT_SCHEDULE_H_
#define SEDKIT_SCHEDULE_H_

namespace sedkit {
namespace train {

// Sigmoid-shaped ramp exp(-5 (1 - min(epoch/end, 1))^2); end <= 0 gives 1.
double Rampup(double epoch, double end_epoch);

// Learning-rate and loss-weight schedule. Milestones are defined on a
// 200-epoch reference (ramp to base_lr at 50, decay at 100 and 150) and
// scale proportionally with total_epochs.
struct Schedule {
  int total_epochs = 40;
  int reference_epochs = 200;
  double base_lr = 1e-3;
  double decay1_lr = 2e-4;
  double decay2_lr = 4e-5;

  int RampEnd() const { return Milestone(50); }
  int Decay1() const { return Milestone(100); }
  int Decay2() const { return Milestone(150); }

  double LrAt(int epoch) const;
  // Loss-weight ramp: rises until RampEnd, then constant.
  double RampAt(int epoch) const;

 private:
  int Milestone(int reference_epoch) const;
};

}  // namespace train
}  // namespace sedkit

#endif  // SEDKIT_SCHEDULE_H_
