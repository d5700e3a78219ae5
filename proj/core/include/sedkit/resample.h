// core/include/sedkit/resample.h

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

#ifndef SEDKIT_RESAMPLE_H_
#define SEDKIT_RESAMPLE_H_

#include "sedkit/wave.h"

namespace sedkit {
namespace dsp {

// Band-limited resampling onto a grid of round(len * factor) samples:
// out[i] = x(i / factor), windowed-sinc interpolated (Kaiser beta=8,
// 32 taps at the cutoff rate). The sample_rate field is left unchanged, so
// the result plays back speed-changed. factor must lie in [0.1, 10].
Waveform Resample(const Waveform &w, double factor);

}  // namespace dsp
}  // namespace sedkit

#endif  // SEDKIT_RESAMPLE_H_
