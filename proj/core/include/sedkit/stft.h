// core/include/sedkit/stft.h

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

#ifndef SEDKIT_STFT_H_
#define SEDKIT_STFT_H_

#include <complex>
#include <vector>

#include "sedkit/wave.h"

namespace sedkit {
namespace dsp {

// frames x bins, row-major. bins = window/2 + 1.
struct ComplexSpectrogram {
  int frames = 0;
  int bins = 0;
  int window = 0;
  int hop = 0;
  std::vector<std::complex<double>> data;

  std::complex<double> &at(int t, int f) { return data[size_t(t) * bins + f]; }
  const std::complex<double> &at(int t, int f) const {
    return data[size_t(t) * bins + f];
  }
};

// Number of analysis frames for a signal of len samples: 1 + (len - win)/hop.
int64_t StftFrameCount(int64_t len, int window, int hop);

// Periodic Hann window of length n.
std::vector<double> HannWindow(int n);

// Hann-windowed STFT without centering or padding. The signal must hold at
// least one full window; callers pad shorter clips first.
ComplexSpectrogram Stft(const Waveform &w, int window, int hop);

// Weighted overlap-add inverse with the same periodic Hann window. Output has
// (frames - 1) * hop + window samples.
Waveform Istft(const ComplexSpectrogram &spec, int sample_rate);

}  // namespace dsp
}  // namespace sedkit

#endif  // SEDKIT_STFT_H_
