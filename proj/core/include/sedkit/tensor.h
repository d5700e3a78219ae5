// core/include/sedkit/tensor.h

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

#ifndef SEDKIT_TENSOR_H_
#define SEDKIT_TENSOR_H_

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <vector>

namespace sedkit {
namespace nn {

// Dense row-major tensor, rank <= 4. Training instantiates T = float; the
// gradient-check path instantiates T = double.
template <typename T>
struct Tensor {
  std::vector<int> shape;
  std::vector<T> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> s)
      : shape(std::move(s)), data(NumelOf(shape), T(0)) {}
  Tensor(std::initializer_list<int> s) : Tensor(std::vector<int>(s)) {}

  static Tensor Scalar(T v) {
    Tensor t({1});
    t.data[0] = v;
    return t;
  }

  static int64_t NumelOf(const std::vector<int> &s) {
    int64_t n = 1;
    for (int d : s) n *= d;
    return n;
  }

  int64_t numel() const { return static_cast<int64_t>(data.size()); }
  int rank() const { return static_cast<int>(shape.size()); }
  int dim(int i) const { return shape[i]; }

  T *ptr() { return data.data(); }
  const T *ptr() const { return data.data(); }

  // 2-D accessors (row-major).
  T &at(int r, int c) { return data[size_t(r) * shape.back() + c]; }
  const T &at(int r, int c) const { return data[size_t(r) * shape.back() + c]; }
};

}  // namespace nn
}  // namespace sedkit

#endif  // SEDKIT_TENSOR_H_
