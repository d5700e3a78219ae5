// core/include/sedkit/rng.h

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

#ifndef SEDKIT_RNG_H_
#define SEDKIT_RNG_H_

#include <cstdint>
#include <vector>

namespace sedkit {

// Splittable counter-based generator built on the splitmix64 finalizer.
// Streams derived with the same keys are byte-reproducible across runs and
// platforms; none of the std:: distributions are used anywhere (their output
// is implementation defined).
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(Mix(seed)) {}

  // Derives an independent stream from (seed, k1, k2, k3), e.g.
  // (run seed, epoch, clip index, purpose).
  static Rng Keyed(uint64_t seed, uint64_t k1, uint64_t k2 = 0,
                   uint64_t k3 = 0);

  uint64_t NextU64();

  // Uniform in [0, 1).
  double Uniform();
  // Uniform in [lo, hi).
  double Uniform(double lo, double hi);
  // Uniform integer in [lo, hi], inclusive.
  int64_t UniformInt(int64_t lo, int64_t hi);
  bool Bernoulli(double p);
  // Standard normal via Box-Muller (two draws per call, no caching).
  double Gaussian();

  // Fisher-Yates shuffle.
  template <typename T>
  void Shuffle(std::vector<T> *v) {
    for (int64_t i = static_cast<int64_t>(v->size()) - 1; i > 0; --i) {
      int64_t j = UniformInt(0, i);
      std::swap((*v)[i], (*v)[j]);
    }
  }

 private:
  static uint64_t Mix(uint64_t z);
  uint64_t state_;
};

}  // namespace sedkit

#endif  // SEDKIT_RNG_H_
