// core/src/resample.cc

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

#include "sedkit/resample.h"

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "sedkit/common.h"

namespace sedkit {
namespace dsp {

namespace {

constexpr double kKaiserBeta = 8.0;
constexpr int kZeroCrossings = 16;  // 32 taps at the cutoff rate

// Modified Bessel function of the first kind, order zero (power series).
double BesselI0(double x) {
  double sum = 1.0, term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 64; ++k) {
    term *= q / (double(k) * k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

double Sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

// h(t) = fc sinc(fc t) kaiser(t / half_width), t in input samples.
double KernelAt(double t, double cutoff, double half_width, double inv_i0) {
  const double u = std::abs(t) / half_width;
  if (u >= 1.0) return 0.0;
  const double win = BesselI0(kKaiserBeta * std::sqrt(1.0 - u * u)) * inv_i0;
  return cutoff * Sinc(cutoff * t) * win;
}

// Positions advance by b/a input samples per output sample, so fractional
// phases repeat with period a. One exactly-evaluated kernel row per phase.
struct RationalKernel {
  int64_t a = 1, b = 1;
  int n_taps = 0;
  double half_width = 0.0;
  std::vector<int> lo_off;      // per phase, relative to the integer base
  std::vector<float> weights;   // a rows x n_taps

  static std::shared_ptr<const RationalKernel> Make(double factor) {
    auto k = std::make_shared<RationalKernel>();
    Approximate(factor, &k->a, &k->b);
    const double cutoff = std::min(1.0, factor);
    k->half_width = kZeroCrossings / cutoff;
    k->n_taps = static_cast<int>(2.0 * k->half_width) + 2;
    k->lo_off.resize(k->a);
    k->weights.assign(size_t(k->a) * k->n_taps, 0.0f);
    const double inv_i0 = 1.0 / BesselI0(kKaiserBeta);
    for (int64_t r = 0; r < k->a; ++r) {
      const double fr = static_cast<double>((r * k->b) % k->a) / k->a;
      const int lo = static_cast<int>(std::ceil(fr - k->half_width));
      k->lo_off[r] = lo;
      for (int t = 0; t < k->n_taps; ++t)
        k->weights[size_t(r) * k->n_taps + t] = static_cast<float>(
            KernelAt(lo + t - fr, cutoff, k->half_width, inv_i0));
    }
    return k;
  }

 private:
  // Best continued-fraction convergent a/b ~ factor with a capped; exact for
  // the ladder's small rationals. The residual position drift over a clip is
  // below 1e-3 input samples.
  static void Approximate(double x, int64_t *a_out, int64_t *b_out) {
    constexpr int64_t kMaxPhases = 4096;
    int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double v = x;
    for (int iter = 0; iter < 64; ++iter) {
      const int64_t ai = static_cast<int64_t>(std::floor(v));
      const int64_t h2 = ai * h1 + h0;
      const int64_t k2 = ai * k1 + k0;
      if (h2 > kMaxPhases || k2 > kMaxPhases) break;
      h0 = h1;
      h1 = h2;
      k0 = k1;
      k1 = k2;
      const double frac = v - ai;
      if (std::abs(x - static_cast<double>(h1) / k1) < 1e-13 || frac < 1e-13)
        break;
      v = 1.0 / frac;
    }
    *a_out = h1;
    *b_out = k1;
  }
};

// Kernels are pure functions of the factor; shared across threads.
std::shared_ptr<const RationalKernel> KernelFor(double factor) {
  static std::mutex mu;
  static std::map<int64_t, std::shared_ptr<const RationalKernel>> cache;
  int64_t key;
  static_assert(sizeof(key) == sizeof(factor));
  std::memcpy(&key, &factor, sizeof(key));
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (cache.size() > 128) cache.clear();
  auto kernel = RationalKernel::Make(factor);
  cache[key] = kernel;
  return kernel;
}

}  // namespace

Waveform Resample(const Waveform &w, double factor) {
  SEDKIT_CHECK(factor >= 0.1 && factor <= 10.0, ConfigError,
               "resample factor out of [0.1, 10]");
  SEDKIT_CHECK(w.size() > 0, DataError, "resample: empty signal");

  const int64_t in_len = w.size();
  const int64_t out_len = std::llround(in_len * factor);

  Waveform out;
  out.sample_rate = w.sample_rate;
  out.samples.resize(out_len);
  if (out_len == 0) return out;

  const auto kernel = KernelFor(factor);
  const int64_t a = kernel->a, b = kernel->b;
  const int n_taps = kernel->n_taps;
  const float *x = w.samples.data();

  for (int64_t i = 0; i < out_len; ++i) {
    const int64_t m = i / a, r = i % a;
    const int64_t base = m * b + (r * b) / a;
    const int64_t start = base + kernel->lo_off[r];
    const float *row = kernel->weights.data() + size_t(r) * n_taps;
    float acc = 0.0f;
    if (start >= 0 && start + n_taps <= in_len) {
      const float *seg = x + start;
      for (int t = 0; t < n_taps; ++t) acc += seg[t] * row[t];
    } else {
      for (int t = 0; t < n_taps; ++t) {
        const int64_t src = start + t;
        if (src >= 0 && src < in_len) acc += x[src] * row[t];
      }
    }
    out.samples[i] = acc;
  }
  return out;
}

}  // namespace dsp
}  // namespace sedkit
