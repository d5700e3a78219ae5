// core/include/sedkit/mel.h

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

#ifndef SEDKIT_MEL_H_
#define SEDKIT_MEL_H_

#include <cmath>
#include <cstdint>
#include <vector>

#include "sedkit/wave.h"

namespace sedkit {
namespace dsp {

// Feature extraction settings. The fast profile (16 kHz, 1024/256, 64 mels)
// is the default; 2048/255/128 remains selectable for the full-size setup.
struct FeatureConfig {
  int sample_rate = 16000;
  int window = 1024;
  int hop = 256;
  int n_mels = 64;
  double clip_seconds = 10.0;
  double eps_floor = 1e-10;

  int64_t clip_samples() const {
    return static_cast<int64_t>(std::llround(clip_seconds * sample_rate));
  }
  // Frames produced by log_mel after the clip is padded/cropped.
  int frames() const {
    return static_cast<int>(1 + (clip_samples() - window) / hop);
  }
  double frame_hop_seconds() const {
    return static_cast<double>(hop) / sample_rate;
  }
  double floor_log() const { return std::log(eps_floor); }

  void Validate() const;
};

// T x K log-magnitude matrix, row-major.
struct MelSpectrogram {
  int frames = 0;
  int bins = 0;
  double frame_hop_s = 0.0;
  std::vector<float> data;

  float &at(int t, int k) { return data[size_t(t) * bins + k]; }
  const float &at(int t, int k) const { return data[size_t(t) * bins + k]; }
};

// Triangular filters on the HTK mel scale, stored sparsely as per-row
// (first bin, weights) runs.
struct MelFilterbank {
  int n_mels = 0;
  int n_bins = 0;
  std::vector<int> first_bin;
  std::vector<std::vector<double>> weights;

  static MelFilterbank Make(int n_fft_bins, int n_mels, int sample_rate);

  // Applies the bank to one power-spectrum row.
  void Apply(const double *power, double *mel_out) const;
};

double HzToMel(double hz);
double MelToHz(double mel);

// Dense n_mels x n_fft_bins matrix view of the filterbank (row-major).
std::vector<double> MelMatrix(int n_fft_bins, int n_mels, int sample_rate);

// Peak frequency (Hz) of each filter, in filter order.
std::vector<double> MelCenterFrequencies(int n_mels, int sample_rate);

// log(mel . |stft|^2 + eps_floor) after padding/cropping the clip to
// cfg.clip_samples().
MelSpectrogram LogMel(const Waveform &w, const FeatureConfig &cfg);

}  // namespace dsp
}  // namespace sedkit

#endif  // SEDKIT_MEL_H_
