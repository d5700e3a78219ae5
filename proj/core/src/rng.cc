// core/src/rng.cc

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

#include "sedkit/rng.h"

#include <cmath>

namespace sedkit {

uint64_t Rng::Mix(uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng Rng::Keyed(uint64_t seed, uint64_t k1, uint64_t k2, uint64_t k3) {
  uint64_t s = Mix(seed);
  s = Mix(s ^ Mix(k1 + 0x1D8E4E27C47D124FULL));
  s = Mix(s ^ Mix(k2 + 0xB5297A4D3A2EC937ULL));
  s = Mix(s ^ Mix(k3 + 0x68E31DA4DBB56F2DULL));
  Rng r(0);
  r.state_ = s;
  return r;
}

uint64_t Rng::NextU64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double Rng::Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

int64_t Rng::UniformInt(int64_t lo, int64_t hi) {
  // Modulo bias is negligible for the ranges used here (<< 2^32).
  uint64_t range = static_cast<uint64_t>(hi - lo) + 1;
  return lo + static_cast<int64_t>(NextU64() % range);
}

bool Rng::Bernoulli(double p) { return Uniform() < p; }

double Rng::Gaussian() {
  // Box-Muller; u clamped away from 0 so log stays finite.
  double u = Uniform();
  double v = Uniform();
  if (u < 1e-300) u = 1e-300;
  return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
}

}  // namespace sedkit
