// core/src/mel.cc

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

#include "sedkit/mel.h"

#include <algorithm>

#include "sedkit/common.h"
#include "sedkit/stft.h"

namespace sedkit {
namespace dsp {

void FeatureConfig::Validate() const {
  SEDKIT_CHECK(sample_rate > 0, ConfigError, "sample_rate must be > 0");
  SEDKIT_CHECK(window > 0 && hop > 0, ConfigError, "window and hop must be > 0");
  SEDKIT_CHECK(n_mels > 0 && n_mels < window / 2 + 1, ConfigError,
               "n_mels must be in (0, fft bins)");
  SEDKIT_CHECK(clip_samples() >= window, ConfigError,
               "clip shorter than one analysis window");
  SEDKIT_CHECK(eps_floor > 0, ConfigError, "eps_floor must be > 0");
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterbank MelFilterbank::Make(int n_fft_bins, int n_mels, int sample_rate) {
  SEDKIT_CHECK(n_mels < n_fft_bins, ConfigError,
               "mel filterbank needs n_mels < n_fft_bins");
  MelFilterbank fb;
  fb.n_mels = n_mels;
  fb.n_bins = n_fft_bins;
  fb.first_bin.resize(n_mels);
  fb.weights.resize(n_mels);

  const double nyquist = sample_rate / 2.0;
  const double mel_max = HzToMel(nyquist);
  std::vector<double> edges(n_mels + 2);
  for (int i = 0; i < n_mels + 2; ++i)
    edges[i] = MelToHz(mel_max * i / (n_mels + 1));

  // The fft window that produced n_fft_bins bins had 2*(n_fft_bins-1) points.
  const double hz_per_bin = nyquist / (n_fft_bins - 1);
  for (int m = 0; m < n_mels; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    std::vector<double> row;
    int first = -1;
    for (int k = 0; k < n_fft_bins; ++k) {
      const double f = k * hz_per_bin;
      double v = 0.0;
      if (f > lo && f < hi)
        v = f <= mid ? (f - lo) / (mid - lo) : (hi - f) / (hi - mid);
      if (v > 0.0) {
        if (first < 0) first = k;
        row.push_back(v);
      } else if (first >= 0) {
        break;
      }
    }
    if (first < 0) {
      // Triangle narrower than the bin spacing; pin it to the nearest bin so
      // every filter keeps coverage.
      first = std::clamp(static_cast<int>(std::lround(mid / hz_per_bin)), 0,
                         n_fft_bins - 1);
      row.assign(1, 1.0);
    }
    fb.first_bin[m] = first;
    fb.weights[m] = std::move(row);
  }
  return fb;
}

void MelFilterbank::Apply(const double *power, double *mel_out) const {
  for (int m = 0; m < n_mels; ++m) {
    const auto &row = weights[m];
    const double *p = power + first_bin[m];
    double acc = 0.0;
    for (size_t i = 0; i < row.size(); ++i) acc += row[i] * p[i];
    mel_out[m] = acc;
  }
}

std::vector<double> MelMatrix(int n_fft_bins, int n_mels, int sample_rate) {
  MelFilterbank fb = MelFilterbank::Make(n_fft_bins, n_mels, sample_rate);
  std::vector<double> mat(size_t(n_mels) * n_fft_bins, 0.0);
  for (int m = 0; m < n_mels; ++m)
    for (size_t i = 0; i < fb.weights[m].size(); ++i)
      mat[size_t(m) * n_fft_bins + fb.first_bin[m] + i] = fb.weights[m][i];
  return mat;
}

std::vector<double> MelCenterFrequencies(int n_mels, int sample_rate) {
  const double mel_max = HzToMel(sample_rate / 2.0);
  std::vector<double> centers(n_mels);
  for (int m = 0; m < n_mels; ++m)
    centers[m] = MelToHz(mel_max * (m + 1) / (n_mels + 1));
  return centers;
}

MelSpectrogram LogMel(const Waveform &w, const FeatureConfig &cfg) {
  cfg.Validate();
  const Waveform padded = PadOrCrop(w, cfg.clip_samples());
  const ComplexSpectrogram spec = Stft(padded, cfg.window, cfg.hop);
  const MelFilterbank fb = MelFilterbank::Make(spec.bins, cfg.n_mels,
                                               cfg.sample_rate);

  MelSpectrogram mel;
  mel.frames = spec.frames;
  mel.bins = cfg.n_mels;
  mel.frame_hop_s = cfg.frame_hop_seconds();
  mel.data.resize(size_t(mel.frames) * mel.bins);

  std::vector<double> power(spec.bins), row(cfg.n_mels);
  for (int t = 0; t < spec.frames; ++t) {
    for (int f = 0; f < spec.bins; ++f) power[f] = std::norm(spec.at(t, f));
    fb.Apply(power.data(), row.data());
    for (int m = 0; m < cfg.n_mels; ++m)
      mel.at(t, m) = static_cast<float>(std::log(row[m] + cfg.eps_floor));
  }
  return mel;
}

}  // namespace dsp
}  // namespace sedkit
