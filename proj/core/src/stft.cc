// core/src/stft.cc

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

#include "sedkit/stft.h"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

#include "sedkit/common.h"

namespace sedkit {
namespace dsp {

namespace {

// FFTW plan creation is not thread safe; execution on caller-owned buffers is.
// Plans are created once per size with FFTW_ESTIMATE (deterministic plan
// selection) and FFTW_UNALIGNED so new-array execution accepts any buffer.
class PlanCache {
 public:
  static PlanCache &Instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan Forward(int n) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = fwd_.find(n);
    if (it != fwd_.end()) return it->second;
    std::vector<double> in(n, 0.0);
    std::vector<fftw_complex> out(n / 2 + 1);
    fftw_plan p = fftw_plan_dft_r2c_1d(n, in.data(), out.data(),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
    SEDKIT_CHECK(p != nullptr, NumericError, "fftw forward plan failed");
    fwd_[n] = p;
    return p;
  }

  fftw_plan Inverse(int n) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = inv_.find(n);
    if (it != inv_.end()) return it->second;
    std::vector<fftw_complex> in(n / 2 + 1);
    std::vector<double> out(n, 0.0);
    fftw_plan p = fftw_plan_dft_c2r_1d(n, in.data(), out.data(),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
    SEDKIT_CHECK(p != nullptr, NumericError, "fftw inverse plan failed");
    inv_[n] = p;
    return p;
  }

 private:
  std::mutex mu_;
  std::map<int, fftw_plan> fwd_, inv_;
};

}  // namespace

int64_t StftFrameCount(int64_t len, int window, int hop) {
  if (len < window) return 0;
  return 1 + (len - window) / hop;
}

std::vector<double> HannWindow(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i)
    w[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / n));
  return w;
}

ComplexSpectrogram Stft(const Waveform &w, int window, int hop) {
  SEDKIT_CHECK(window > 0 && hop > 0, ConfigError, "stft: window, hop must be > 0");
  SEDKIT_CHECK(w.size() >= window, DataError,
               "stft: signal shorter than one window");

  ComplexSpectrogram spec;
  spec.window = window;
  spec.hop = hop;
  spec.bins = window / 2 + 1;
  spec.frames = static_cast<int>(StftFrameCount(w.size(), window, hop));
  spec.data.resize(size_t(spec.frames) * spec.bins);

  const std::vector<double> win = HannWindow(window);
  fftw_plan plan = PlanCache::Instance().Forward(window);

  std::vector<double> buf(window);
  std::vector<fftw_complex> out(spec.bins);
  for (int t = 0; t < spec.frames; ++t) {
    const float *src = w.samples.data() + size_t(t) * hop;
    for (int i = 0; i < window; ++i) buf[i] = win[i] * src[i];
    fftw_execute_dft_r2c(plan, buf.data(), out.data());
    for (int f = 0; f < spec.bins; ++f)
      spec.at(t, f) = std::complex<double>(out[f][0], out[f][1]);
  }
  return spec;
}

Waveform Istft(const ComplexSpectrogram &spec, int sample_rate) {
  SEDKIT_CHECK(spec.frames > 0, DataError, "istft: empty spectrogram");
  const int window = spec.window, hop = spec.hop;
  const int64_t length = int64_t(spec.frames - 1) * hop + window;

  const std::vector<double> win = HannWindow(window);
  fftw_plan plan = PlanCache::Instance().Inverse(window);

  std::vector<double> acc(length, 0.0), wsum(length, 0.0);
  std::vector<fftw_complex> in(spec.bins);
  std::vector<double> frame(window);
  for (int t = 0; t < spec.frames; ++t) {
    for (int f = 0; f < spec.bins; ++f) {
      in[f][0] = spec.at(t, f).real();
      in[f][1] = spec.at(t, f).imag();
    }
    fftw_execute_dft_c2r(plan, in.data(), frame.data());
    const int64_t off = int64_t(t) * hop;
    // FFTW's c2r is unnormalized; fold 1/window into the synthesis window.
    for (int i = 0; i < window; ++i) {
      acc[off + i] += frame[i] * win[i] / window;
      wsum[off + i] += win[i] * win[i];
    }
  }

  Waveform out;
  out.sample_rate = sample_rate;
  out.samples.resize(length);
  for (int64_t i = 0; i < length; ++i)
    out.samples[i] =
        static_cast<float>(wsum[i] > 1e-12 ? acc[i] / wsum[i] : 0.0);
  return out;
}

}  // namespace dsp
}  // namespace sedkit
