// core/src/tape.cc

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

#include "sedkit/tape.h"

#include <Eigen/Dense>

#include <cmath>
#include <memory>

#include "sedkit/common.h"

namespace sedkit {
namespace nn {

namespace {

template <typename T>
using EMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapM = Eigen::Map<EMat<T>>;
template <typename T>
using CMapM = Eigen::Map<const EMat<T>>;

template <typename T>
T SigmoidOf(T x) {
  return x >= 0 ? 1 / (1 + std::exp(-x)) : [](T e) { return e / (1 + e); }(std::exp(x));
}

// col is (Cin*9) x (H*W); entry ((ci*9 + dy*3 + dx), i*W + j) holds
// x[ci, i+dy-1, j+dx-1] with zero padding.
template <typename T>
void Im2Col3x3(const T *x, int cin, int h, int w, T *col) {
  const int64_t plane = int64_t(h) * w;
  for (int ci = 0; ci < cin; ++ci) {
    for (int dy = 0; dy < 3; ++dy) {
      for (int dx = 0; dx < 3; ++dx) {
        T *dst = col + (int64_t(ci) * 9 + dy * 3 + dx) * plane;
        const T *src = x + int64_t(ci) * plane;
        for (int i = 0; i < h; ++i) {
          const int si = i + dy - 1;
          if (si < 0 || si >= h) {
            for (int j = 0; j < w; ++j) dst[int64_t(i) * w + j] = 0;
            continue;
          }
          for (int j = 0; j < w; ++j) {
            const int sj = j + dx - 1;
            dst[int64_t(i) * w + j] =
                (sj < 0 || sj >= w) ? T(0) : src[int64_t(si) * w + sj];
          }
        }
      }
    }
  }
}

template <typename T>
void Col2ImAdd3x3(const T *col, int cin, int h, int w, T *dx) {
  const int64_t plane = int64_t(h) * w;
  for (int ci = 0; ci < cin; ++ci) {
    for (int dy = 0; dy < 3; ++dy) {
      for (int dx_ = 0; dx_ < 3; ++dx_) {
        const T *src = col + (int64_t(ci) * 9 + dy * 3 + dx_) * plane;
        T *dst = dx + int64_t(ci) * plane;
        for (int i = 0; i < h; ++i) {
          const int si = i + dy - 1;
          if (si < 0 || si >= h) continue;
          for (int j = 0; j < w; ++j) {
            const int sj = j + dx_ - 1;
            if (sj < 0 || sj >= w) continue;
            dst[int64_t(si) * w + sj] += src[int64_t(i) * w + j];
          }
        }
      }
    }
  }
}

}  // namespace

template <typename T>
typename Tape<T>::VarId Tape<T>::Emit(Tensor<T> value, bool needs_grad,
                                      std::function<void(Tape &)> back) {
  Node node;
  node.value = std::move(value);
  node.needs_grad = needs_grad && grad_enabled_;
  if (node.needs_grad) {
    node.grad = Tensor<T>(node.value.shape);
    node.back = std::move(back);
  }
  nodes_.push_back(std::move(node));
  return static_cast<VarId>(nodes_.size()) - 1;
}

template <typename T>
typename Tape<T>::VarId Tape<T>::Leaf(Tensor<T> value, bool needs_grad) {
  return Emit(std::move(value), needs_grad, nullptr);
}

template <typename T>
typename Tape<T>::VarId Tape<T>::Add(VarId a, VarId b) {
  SEDKIT_CHECK(value(a).shape == value(b).shape, NumericError,
               "add: shape mismatch");
  Tensor<T> out = value(a);
  const Tensor<T> &vb = value(b);
  for (int64_t i = 0; i < out.numel(); ++i) out.data[i] += vb.data[i];
  bool ng = NeedsGrad(a) || NeedsGrad(b);
  VarId id = Emit(std::move(out), ng, nullptr);
  if (nodes_[id].needs_grad) {
    nodes_[id].back = [a, b, id](Tape &t) {
      const Tensor<T> &g = t.grad(id);
      if (t.NeedsGrad(a)) {
        Tensor<T> &ga = t.grad_mut(a);
        for (int64_t i = 0; i < g.numel(); ++i) ga.data[i] += g.data[i];
      }
      if (t.NeedsGrad(b)) {
        Tensor<T> &gb = t.grad_mut(b);
        for (int64_t i = 0; i < g.numel(); ++i) gb.data[i] += g.data[i];
      }
    };
  }
  return id;
}

template <typename T>
typename Tape<T>::VarId Tape<T>::Sub(VarId a, VarId b) {
  SEDKIT_CHECK(value(a).shape == value(b).shape, NumericError,
               "sub: shape mismatch");
  Tensor<T> out = value(a);
  const Tensor<T> &vb = value(b);
  for (int64_t i = 0; i < out.numel(); ++i) out.data[i] -= vb.data[i];
  bool ng = NeedsGrad(a) || NeedsGrad(b);
  VarId id = Emit(std::move(out), ng, nullptr);
  if (nodes_[id].needs_grad) {
    nodes_[id].back = [a, b, id](Tape &t) {
      const Tensor<T> &g = t.grad(id);
      if (t.NeedsGrad(a)) {
        Tensor<T> &ga = t.grad_mut(a);
        for (int64_t i = 0; i < g.numel(); ++i) ga.data[i] += g.data[i];
      }
      if (t.NeedsGrad(b)) {
        Tensor<T> &gb = t.grad_mut(b);
        for (int64_t i = 0; i < g.numel(); ++i) gb.data[i] -= g.data[i];
      }
    };
  }
  return id;
}

template <typename T>
typename Tape<T>::VarId Tape<T>::Mul(VarId a, VarId b) {
  SEDKIT_CHECK(value(a).shape == value(b).shape, NumericError,
               "mul: shape mismatch");
  Tensor<T> out = value(a);
  const Tensor<T> &vb = value(b);
  for (int64_t i = 0; i < out.numel(); ++i) out.data[i] *= vb.data[i];
  bool ng = NeedsGrad(a) || NeedsGrad(b);
  VarId id = Emit(std::move(out), ng, nullptr);
  if (nodes_[id].needs_grad) {
    nodes_[id].back = [a, b, id](Tape &t) {
      const Tensor<T> &g = t.grad(id);
      const Tensor<T> &va = t.value(a);
      const Tensor<T> &vb2 = t.value(b);
      if (t.NeedsGrad(a)) {
        Tensor<T> &ga = t.grad_mut(a);
        for (int64_t i = 0; i < g.numel(); ++i)
          ga.data[i] += g.data[i] * vb2.data[i];
      }
      if (t.NeedsGrad(b)) {
        Tensor<T> &gb = t.grad_mut(b);
        for (int64_t i = 0; i < g.numel(); ++i)
          gb.data[i] += g.data[i] * va.data[i];
      }
    };
  }
  return id;
}

template <typename T>
typename Tape<T>::VarId Tape<T>::Sigmoid(VarId x) {
  Tensor<T> out = value(x);
  for (auto &v : out.data) v = SigmoidOf(v);
  VarId id = Emit(std::move(out), NeedsGrad(x), nullptr);
  if (nodes_[id].needs_grad) {
    nodes_[id].back = [x, id](Tape &t) {
      const Tensor<T> &g = t.grad(id);
      const Tensor<T> &y = t.value(id);
      Tensor<T> &gx = t.grad_mut(x);
      for (int64_t i = 0; i < g.numel(); ++i)
        gx.data[i] += g.data[i] * y.data[i] * (1 - y.data[i]);
    };
  }
  return id;
}

template <typename T>
typename Tape<T>::VarId Tape<T>::Scale(VarId x, T c) {
  Tensor<T> out = value(x);
  for (auto &v : out.data) v *= c;
  VarId id = Emit(std::move(out), NeedsGrad(x), nullptr);
  if (nodes_[id].needs_grad) {
    nodes_[id].back = [x, c, id](Tape &t) {
      const Tensor<T> &g = t.grad(id);
      Tensor<T> &gx = t.grad_mut(x);
      for (int64_t i = 0; i < g.numel(); ++i) gx.data[i] += c * g.data[i];
    };
  }
  return id;
}

template <typename T>
typename Tape<T>::VarId Tape<T>::MatMul(VarId a, VarId b) {
  const Tensor<T> &va = value(a), &vb = value(b);
  SEDKIT_CHECK(va.rank() == 2 && vb.rank() == 2 && va.dim(1) == vb.dim(0),
               NumericError, "matmul: bad shapes");
  const int m = va.dim(0), k = va.dim(1), n = vb.dim(1);
  Tensor<T> out({m, n});
  MapM<T>(out.ptr(), m, n).noalias() =
      CMapM<T>(va.ptr(), m, k) * CMapM<T>(vb.ptr(), k, n);
  bool ng = NeedsGrad(a) || NeedsGrad(b);
  VarId id = Emit(std::move(out), ng, nullptr);
  if (nodes_[id].needs_grad) {
    nodes_[id].back = [a, b, id, m, k, n](Tape &t) {
      CMapM<T> g(t.grad(id).ptr(), m, n);
      if (t.NeedsGrad(a))
        MapM<T>(t.grad_mut(a).ptr(), m, k).noalias() +=
            g * CMapM<T>(t.value(b).ptr(), k, n).transpose();
      if (t.NeedsGrad(b))
        MapM<T>(t.grad_mut(b).ptr(), k, n).noalias() +=
            CMapM<T>(t.value(a).ptr(), m, k).transpose() * g;
    };
  }
  return id;
}

template <typename T>
typename Tape<T>::VarId Tape<T>::AddRowBias(VarId x, VarId bias) {
  const Tensor<T> &vx = value(x), &vb = value(bias);
  SEDKIT_CHECK(vx.rank() == 2 && vb.numel() == vx.dim(1), NumericError,
               "add_row_bias: bad shapes");
  const int m = vx.dim(0), n = vx.dim(1);
  Tensor<T> out = vx;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) out.data[int64_t(i) * n + j] += vb.data[j];
  bool ng = NeedsGrad(x) || NeedsGrad(bias);
  VarId id = Emit(std::move(out), ng, nullptr);
  if (nodes_[id].needs_grad) {
    nodes_[id].back = [x, bias, id, m, n](Tape &t) {
      const Tensor<T> &g = t.grad(id);
      if (t.NeedsGrad(x)) {
        Tensor<T> &gx = t.grad_mut(x);
        for (int64_t i = 0; i < g.numel(); ++i) gx.data[i] += g.data[i];
      }
      if (t.NeedsGrad(bias)) {
        Tensor<T> &gb = t.grad_mut(bias);
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < n; ++j)
            gb.data[j] += g.data[int64_t(i) * n + j];
      }
    };
  }
  return id;
}

template <typename T>
typename Tape<T>::VarId Tape<T>::Conv3x3(VarId x, VarId w, VarId bias) {
  const Tensor<T> &vx = value(x), &vw = value(w), &vb = value(bias);
  SEDKIT_CHECK(vx.rank() == 3, NumericError, "conv3x3: input must be C x H x W");
  const int cin = vx.dim(0), h = vx.dim(1), wd = vx.dim(2);
  const int cout = vw.dim(0);
  SEDKIT_CHECK(vw.rank() == 2 && vw.dim(1) == cin * 9 && vb.numel() == cout,
               NumericError, "conv3x3: bad filter shapes");

  const int64_t plane = int64_t(h) * wd;
  auto col = std::make_shared<Tensor<T>>(
      std::vector<int>{cin * 9, static_cast<int>(plane)});
  Im2Col3x3(vx.ptr(), cin, h, wd, col->ptr());

  Tensor<T> out({cout, h, wd});
  MapM<T>(out.ptr(), cout, plane).noalias() =
      CMapM<T>(vw.ptr(), cout, cin * 9) * CMapM<T>(col->ptr(), cin * 9, plane);
  for (int co = 0; co < cout; ++co) {
    T b = vb.data[co];
    T *row = out.ptr() + int64_t(co) * plane;
    for (int64_t i = 0; i < plane; ++i) row[i] += b;
  }

  bool ng = NeedsGrad(x) || NeedsGrad(w) || NeedsGrad(bias);
  VarId id = Emit(std::move(out), ng, nullptr);
  if (nodes_[id].needs_grad) {
    nodes_[id].back = [x, w, bias, id, col, cin, cout, h, wd, plane](Tape &t) {
      CMapM<T> g(t.grad(id).ptr(), cout, plane);
      if (t.NeedsGrad(w))
        MapM<T>(t.grad_mut(w).ptr(), cout, cin * 9).noalias() +=
            g * CMapM<T>(col->ptr(), cin * 9, plane).transpose();
      if (t.NeedsGrad(bias)) {
        Tensor<T> &gb = t.grad_mut(bias);
        for (int co = 0; co < cout; ++co) {
          const T *row = t.grad(id).ptr() + int64_t(co) * plane;
          T acc = 0;
          for (int64_t i = 0; i < plane; ++i) acc += row[i];
          gb.data[co] += acc;
        }
      }
      if (t.NeedsGrad(x)) {
        Tensor<T> dcol({cin * 9, static_cast<int>(plane)});
        MapM<T>(dcol.ptr(), cin * 9, plane).noalias() =
            CMapM<T>(t.value(w).ptr(), cout, cin * 9).transpose() * g;
        Col2ImAdd3x3(dcol.ptr(), cin, h, wd, t.grad_mut(x).ptr());
      }
    };
  }
  return id;
}

template <typename T>
typename Tape<T>::VarId Tape<T>::Conv1x1(VarId x, VarId w, VarId bias) {
  const Tensor<T> &vx = value(x), &vw = value(w), &vb = value(bias);
  SEDKIT_CHECK(vx.rank() == 3, NumericError, "conv1x1: input must be C x H x W");
  const int cin = vx.dim(0), h = vx.dim(1), wd = vx.dim(2);
  const int cout = vw.dim(0);
  SEDKIT_CHECK(vw.rank() == 2 && vw.dim(1) == cin && vb.numel() == cout,
               NumericError, "conv1x1: bad filter shapes");
  const int64_t plane = int64_t(h) * wd;

  Tensor<T> out({cout, h, wd});
  MapM<T>(out.ptr(), cout, plane).noalias() =
      CMapM<T>(vw.ptr(), cout, cin) * CMapM<T>(vx.ptr(), cin, plane);
  for (int co = 0; co < cout; ++co) {
    T b = vb.data[co];
    T *row = out.ptr() + int64_t(co) * plane;
    for (int64_t i = 0; i < plane; ++i) row[i] += b;
  }

  bool ng = NeedsGrad(x) || NeedsGrad(w) || NeedsGrad(bias);
  VarId id = Emit(std::move(out), ng, nullptr);
  if (nodes_[id].needs_grad) {
    nodes_[id].back = [x, w, bias, id, cin, cout, plane](Tape &t) {
      CMapM<T> g(t.grad(id).ptr(), cout, plane);
      if (t.NeedsGrad(w))
        MapM<T>(t.grad_mut(w).ptr(), cout, cin).noalias() +=
            g * CMapM<T>(t.value(x).ptr(), cin, plane).transpose();
      if (t.NeedsGrad(bias)) {
        Tensor<T> &gb = t.grad_mut(bias);
        for (int co = 0; co < cout; ++co) {
          const T *row = t.grad(id).ptr() + int64_t(co) * plane;
          T acc = 0;
          for (int64_t i = 0; i < plane; ++i) acc += row[i];
          gb.data[co] += acc;
        }
      }
      if (t.NeedsGrad(x))
        MapM<T>(t.grad_mut(x).ptr(), cin, plane).noalias() +=
            CMapM<T>(t.value(w).ptr(), cout, cin).transpose() * g;
    };
  }
  return id;
}

template <typename T>
typename Tape<T>::VarId Tape<T>::AvgPool2x2(VarId x) {
  const Tensor<T> &vx = value(x);
  SEDKIT_CHECK(vx.rank() == 3 && vx.dim(1) % 2 == 0 && vx.dim(2) % 2 == 0,
               NumericError, "avgpool2x2: dims must be even");
  const int c = vx.dim(0), h = vx.dim(1), w = vx.dim(2);
  const int ho = h / 2, wo = w / 2;
  Tensor<T> out({c, ho, wo});
  for (int ci = 0; ci < c; ++ci) {
    const T *src = vx.ptr() + int64_t(ci) * h * w;
    T *dst = out.ptr() + int64_t(ci) * ho * wo;
    for (int i = 0; i < ho; ++i)
      for (int j = 0; j < wo; ++j) {
        const T *p = src + int64_t(2 * i) * w + 2 * j;
        dst[int64_t(i) * wo + j] =
            (p[0] + p[1] + p[w] + p[w + 1]) * T(0.25);
      }
  }
  VarId id = Emit(std::move(out), NeedsGrad(x), nullptr);
  if (nodes_[id].needs_grad) {
    nodes_[id].back = [x, id, c, h, w, ho, wo](Tape &t) {
      const Tensor<T> &g = t.grad(id);
      Tensor<T> &gx = t.grad_mut(x);
      for (int ci = 0; ci < c; ++ci) {
        const T *gs = g.ptr() + int64_t(ci) * ho * wo;
        T *gd = gx.ptr() + int64_t(ci) * h * w;
        for (int i = 0; i < ho; ++i)
          for (int j = 0; j < wo; ++j) {
            const T v = gs[int64_t(i) * wo + j] * T(0.25);
            T *p = gd + int64_t(2 * i) * w + 2 * j;
            p[0] += v;
            p[1] += v;
            p[w] += v;
            p[w + 1] += v;
          }
      }
    };
  }
  return id;
}

template <typename T>
typename Tape<T>::VarId Tape<T>::Glu(VarId x) {
  const Tensor<T> &vx = value(x);
  SEDKIT_CHECK(vx.rank() == 3 && vx.dim(0) % 2 == 0, NumericError,
               "glu: channel count must be even");
  const int c = vx.dim(0) / 2, h = vx.dim(1), w = vx.dim(2);
  const int64_t half = int64_t(c) * h * w;
  Tensor<T> out({c, h, w});
  auto sig = std::make_shared<std::vector<T>>(half);
  for (int64_t i = 0; i < half; ++i) {
    (*sig)[i] = SigmoidOf(vx.data[half + i]);
    out.data[i] = vx.data[i] * (*sig)[i];
  }
  VarId id = Emit(std::move(out), NeedsGrad(x), nullptr);
  if (nodes_[id].needs_grad) {
    nodes_[id].back = [x, id, sig, half](Tape &t) {
      const Tensor<T> &g = t.grad(id);
      const Tensor<T> &vx2 = t.value(x);
      Tensor<T> &gx = t.grad_mut(x);
      for (int64_t i = 0; i < half; ++i) {
        const T s = (*sig)[i];
        gx.data[i] += g.data[i] * s;
        gx.data[half + i] += g.data[i] * vx2.data[i] * s * (1 - s);
      }
    };
  }
  return id;
}

template <typename T>
typename Tape<T>::VarId Tape<T>::FlattenTime(VarId x) {
  const Tensor<T> &vx = value(x);
  SEDKIT_CHECK(vx.rank() == 3, NumericError, "flatten_time: input must be 3-d");
  const int c = vx.dim(0), h = vx.dim(1), w = vx.dim(2);
  Tensor<T> out({h, c * w});
  for (int ci = 0; ci < c; ++ci)
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j)
        out.data[int64_t(i) * c * w + ci * w + j] =
            vx.data[int64_t(ci) * h * w + int64_t(i) * w + j];
  VarId id = Emit(std::move(out), NeedsGrad(x), nullptr);
  if (nodes_[id].needs_grad) {
    nodes_[id].back = [x, id, c, h, w](Tape &t) {
      const Tensor<T> &g = t.grad(id);
      Tensor<T> &gx = t.grad_mut(x);
      for (int ci = 0; ci < c; ++ci)
        for (int i = 0; i < h; ++i)
          for (int j = 0; j < w; ++j)
            gx.data[int64_t(ci) * h * w + int64_t(i) * w + j] +=
                g.data[int64_t(i) * c * w + ci * w + j];
    };
  }
  return id;
}

namespace {

// Saved forward activations for one GRU direction.
template <typename T>
struct GruTrace {
  Tensor<T> r, z, n, uh_n, hs;  // each T x H
};

// Runs one direction. step(i) gives the source row order
// (identity forward, reversed backward).
template <typename T>
void GruDirection(const Tensor<T> &x, const Tensor<T> &w, const Tensor<T> &u,
                  const Tensor<T> &b, bool reverse, GruTrace<T> *trace,
                  Tensor<T> *xw_out) {
  const int tlen = x.dim(0), d = x.dim(1);
  const int hh = u.dim(1);
  Tensor<T> xw({tlen, 3 * hh});
  MapM<T>(xw.ptr(), tlen, 3 * hh).noalias() =
      CMapM<T>(x.ptr(), tlen, d) * CMapM<T>(w.ptr(), 3 * hh, d).transpose();

  trace->r = Tensor<T>({tlen, hh});
  trace->z = Tensor<T>({tlen, hh});
  trace->n = Tensor<T>({tlen, hh});
  trace->uh_n = Tensor<T>({tlen, hh});
  trace->hs = Tensor<T>({tlen, hh});

  std::vector<T> h(hh, T(0)), uh(3 * hh);
  for (int step = 0; step < tlen; ++step) {
    const int t = reverse ? tlen - 1 - step : step;
    Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, 1>>(uh.data(), 3 * hh)
        .noalias() = CMapM<T>(u.ptr(), 3 * hh, hh) *
                     Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>>(
                         h.data(), hh);
    const T *xwr = xw.ptr() + int64_t(t) * 3 * hh;
    T *rr = trace->r.ptr() + int64_t(t) * hh;
    T *zz = trace->z.ptr() + int64_t(t) * hh;
    T *nn = trace->n.ptr() + int64_t(t) * hh;
    T *un = trace->uh_n.ptr() + int64_t(t) * hh;
    T *hv = trace->hs.ptr() + int64_t(t) * hh;
    for (int i = 0; i < hh; ++i) {
      const T r = SigmoidOf(xwr[i] + uh[i] + b.data[i]);
      const T z = SigmoidOf(xwr[hh + i] + uh[hh + i] + b.data[hh + i]);
      const T uhn = uh[2 * hh + i];
      const T n = std::tanh(xwr[2 * hh + i] + r * uhn + b.data[2 * hh + i]);
      rr[i] = r;
      zz[i] = z;
      nn[i] = n;
      un[i] = uhn;
      hv[i] = (1 - z) * n + z * h[i];
    }
    for (int i = 0; i < hh; ++i) h[i] = hv[i];
  }
  *xw_out = std::move(xw);
}

// Backward for one direction; dout is T x H for this direction's slice.
template <typename T>
void GruDirectionBackward(const Tensor<T> &x, const Tensor<T> &w,
                          const Tensor<T> &u, const GruTrace<T> &trace,
                          const T *dout, int dout_stride, bool reverse,
                          Tensor<T> *dx, Tensor<T> *dw, Tensor<T> *du,
                          Tensor<T> *db) {
  const int tlen = x.dim(0), d = x.dim(1);
  const int hh = u.dim(1);
  Tensor<T> dxw({tlen, 3 * hh});
  std::vector<T> dh(hh, T(0)), dgates(3 * hh), dh_prev(hh);

  for (int step = tlen - 1; step >= 0; --step) {
    const int t = reverse ? tlen - 1 - step : step;
    const int tprev = reverse ? t + 1 : t - 1;
    const bool first = step == 0;
    const T *rr = trace.r.ptr() + int64_t(t) * hh;
    const T *zz = trace.z.ptr() + int64_t(t) * hh;
    const T *nn = trace.n.ptr() + int64_t(t) * hh;
    const T *un = trace.uh_n.ptr() + int64_t(t) * hh;
    const T *hp = first ? nullptr : trace.hs.ptr() + int64_t(tprev) * hh;
    const T *go = dout + int64_t(t) * dout_stride;

    for (int i = 0; i < hh; ++i) {
      const T dht = dh[i] + go[i];
      const T hprev = first ? T(0) : hp[i];
      const T dz = dht * (hprev - nn[i]);
      const T dn = dht * (1 - zz[i]);
      const T da_n = dn * (1 - nn[i] * nn[i]);
      const T dr = da_n * un[i];
      const T da_r = dr * rr[i] * (1 - rr[i]);
      const T da_z = dz * zz[i] * (1 - zz[i]);
      dgates[i] = da_r;
      dgates[hh + i] = da_z;
      dgates[2 * hh + i] = da_n;
      dh_prev[i] = dht * zz[i];  // via h' = z*h term; U contributions added below
    }
    // duh = [da_r; da_z; da_n * r]; dh_prev += U^T duh; dU += duh h_prev^T.
    std::vector<T> duh(3 * hh);
    for (int i = 0; i < hh; ++i) {
      duh[i] = dgates[i];
      duh[hh + i] = dgates[hh + i];
      duh[2 * hh + i] = dgates[2 * hh + i] * rr[i];
    }
    Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, 1>> dh_prev_v(dh_prev.data(), hh);
    dh_prev_v.noalias() +=
        CMapM<T>(u.ptr(), 3 * hh, hh).transpose() *
        Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>>(duh.data(),
                                                              3 * hh);
    if (!first) {
      MapM<T>(du->ptr(), 3 * hh, hh).noalias() +=
          Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>>(duh.data(),
                                                                3 * hh) *
          Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>>(hp, hh)
              .transpose();
    }
    T *dxwr = dxw.ptr() + int64_t(t) * 3 * hh;
    for (int i = 0; i < 3 * hh; ++i) {
      dxwr[i] = dgates[i];
      db->data[i] += dgates[i];
    }
    dh = dh_prev;
  }

  // dW += dXW^T x; dx += dXW W.
  MapM<T>(dw->ptr(), 3 * hh, d).noalias() +=
      CMapM<T>(dxw.ptr(), tlen, 3 * hh).transpose() * CMapM<T>(x.ptr(), tlen, d);
  MapM<T>(dx->ptr(), tlen, d).noalias() +=
      CMapM<T>(dxw.ptr(), tlen, 3 * hh) * CMapM<T>(w.ptr(), 3 * hh, d);
}

}  // namespace

template <typename T>
typename Tape<T>::VarId Tape<T>::BiGru(VarId x, VarId wf, VarId uf, VarId bf,
                                       VarId wb, VarId ub, VarId bb) {
  const Tensor<T> &vx = value(x);
  SEDKIT_CHECK(vx.rank() == 2, NumericError, "bigru: input must be T x D");
  const int tlen = vx.dim(0);
  const int hh = value(uf).dim(1);

  auto ftrace = std::make_shared<GruTrace<T>>();
  auto btrace = std::make_shared<GruTrace<T>>();
  Tensor<T> xw_unused;
  GruDirection(vx, value(wf), value(uf), value(bf), false, ftrace.get(),
               &xw_unused);
  GruDirection(vx, value(wb), value(ub), value(bb), true, btrace.get(),
               &xw_unused);

  Tensor<T> out({tlen, 2 * hh});
  for (int t = 0; t < tlen; ++t) {
    const T *hf = ftrace->hs.ptr() + int64_t(t) * hh;
    const T *hb = btrace->hs.ptr() + int64_t(t) * hh;
    T *o = out.ptr() + int64_t(t) * 2 * hh;
    for (int i = 0; i < hh; ++i) {
      o[i] = hf[i];
      o[hh + i] = hb[i];
    }
  }

  bool ng = NeedsGrad(x) || NeedsGrad(wf) || NeedsGrad(uf) || NeedsGrad(bf) ||
            NeedsGrad(wb) || NeedsGrad(ub) || NeedsGrad(bb);
  VarId id = Emit(std::move(out), ng, nullptr);
  if (nodes_[id].needs_grad) {
    nodes_[id].back = [x, wf, uf, bf, wb, ub, bb, id, ftrace, btrace,
                       hh](Tape &t) {
      const Tensor<T> &vx2 = t.value(x);
      const Tensor<T> &g = t.grad(id);
      GruDirectionBackward(vx2, t.value(wf), t.value(uf), *ftrace, g.ptr(),
                           2 * hh, false, &t.grad_mut(x), &t.grad_mut(wf),
                           &t.grad_mut(uf), &t.grad_mut(bf));
      GruDirectionBackward(vx2, t.value(wb), t.value(ub), *btrace,
                           g.ptr() + hh, 2 * hh, true, &t.grad_mut(x),
                           &t.grad_mut(wb), &t.grad_mut(ub), &t.grad_mut(bb));
    };
  }
  return id;
}

template <typename T>
typename Tape<T>::VarId Tape<T>::SoftmaxTime(VarId x) {
  const Tensor<T> &vx = value(x);
  SEDKIT_CHECK(vx.rank() == 2, NumericError, "softmax_time: input must be 2-d");
  const int tlen = vx.dim(0), c = vx.dim(1);
  Tensor<T> out({tlen, c});
  for (int j = 0; j < c; ++j) {
    T mx = vx.data[j];
    for (int t = 1; t < tlen; ++t) mx = std::max(mx, vx.data[int64_t(t) * c + j]);
    T sum = 0;
    for (int t = 0; t < tlen; ++t) {
      const T e = std::exp(vx.data[int64_t(t) * c + j] - mx);
      out.data[int64_t(t) * c + j] = e;
      sum += e;
    }
    for (int t = 0; t < tlen; ++t) out.data[int64_t(t) * c + j] /= sum;
  }
  VarId id = Emit(std::move(out), NeedsGrad(x), nullptr);
  if (nodes_[id].needs_grad) {
    nodes_[id].back = [x, id, tlen, c](Tape &t) {
      const Tensor<T> &g = t.grad(id);
      const Tensor<T> &y = t.value(id);
      Tensor<T> &gx = t.grad_mut(x);
      for (int j = 0; j < c; ++j) {
        T dot = 0;
        for (int tt = 0; tt < tlen; ++tt)
          dot += g.data[int64_t(tt) * c + j] * y.data[int64_t(tt) * c + j];
        for (int tt = 0; tt < tlen; ++tt)
          gx.data[int64_t(tt) * c + j] +=
              y.data[int64_t(tt) * c + j] * (g.data[int64_t(tt) * c + j] - dot);
      }
    };
  }
  return id;
}

template <typename T>
typename Tape<T>::VarId Tape<T>::SumTime(VarId x) {
  const Tensor<T> &vx = value(x);
  SEDKIT_CHECK(vx.rank() == 2, NumericError, "sum_time: input must be 2-d");
  const int tlen = vx.dim(0), c = vx.dim(1);
  Tensor<T> out({c});
  for (int t = 0; t < tlen; ++t)
    for (int j = 0; j < c; ++j) out.data[j] += vx.data[int64_t(t) * c + j];
  VarId id = Emit(std::move(out), NeedsGrad(x), nullptr);
  if (nodes_[id].needs_grad) {
    nodes_[id].back = [x, id, tlen, c](Tape &t) {
      const Tensor<T> &g = t.grad(id);
      Tensor<T> &gx = t.grad_mut(x);
      for (int tt = 0; tt < tlen; ++tt)
        for (int j = 0; j < c; ++j) gx.data[int64_t(tt) * c + j] += g.data[j];
    };
  }
  return id;
}

template <typename T>
typename Tape<T>::VarId Tape<T>::MeanTime(VarId x) {
  const int tlen = value(x).dim(0);
  return Scale(SumTime(x), T(1) / T(tlen));
}

template <typename T>
typename Tape<T>::VarId Tape<T>::GatherRows(VarId x, std::vector<int> map) {
  const Tensor<T> &vx = value(x);
  SEDKIT_CHECK(vx.rank() == 2, NumericError, "gather_rows: input must be 2-d");
  const int c = vx.dim(1), rows = vx.dim(0);
  const int out_rows = static_cast<int>(map.size());
  Tensor<T> out({out_rows, c});
  for (int i = 0; i < out_rows; ++i) {
    const int src = map[i];
    SEDKIT_CHECK(src >= -1 && src < rows, NumericError,
                 "gather_rows: index out of range");
    if (src >= 0)
      for (int j = 0; j < c; ++j)
        out.data[int64_t(i) * c + j] = vx.data[int64_t(src) * c + j];
  }
  auto map_p = std::make_shared<std::vector<int>>(std::move(map));
  VarId id = Emit(std::move(out), NeedsGrad(x), nullptr);
  if (nodes_[id].needs_grad) {
    nodes_[id].back = [x, id, map_p, c](Tape &t) {
      const Tensor<T> &g = t.grad(id);
      Tensor<T> &gx = t.grad_mut(x);
      for (size_t i = 0; i < map_p->size(); ++i) {
        const int src = (*map_p)[i];
        if (src < 0) continue;
        for (int j = 0; j < c; ++j)
          gx.data[int64_t(src) * c + j] += g.data[i * c + j];
      }
    };
  }
  return id;
}

template <typename T>
typename Tape<T>::VarId Tape<T>::MeanAll(VarId x) {
  const Tensor<T> &vx = value(x);
  T acc = 0;
  for (T v : vx.data) acc += v;
  const T inv = T(1) / T(vx.numel());
  VarId id = Emit(Tensor<T>::Scalar(acc * inv), NeedsGrad(x), nullptr);
  if (nodes_[id].needs_grad) {
    nodes_[id].back = [x, id, inv](Tape &t) {
      const T g = t.grad(id).data[0] * inv;
      Tensor<T> &gx = t.grad_mut(x);
      for (auto &v : gx.data) v += g;
    };
  }
  return id;
}

template <typename T>
typename Tape<T>::VarId Tape<T>::SquareMean(VarId x) {
  const Tensor<T> &vx = value(x);
  T acc = 0;
  for (T v : vx.data) acc += v * v;
  const T inv = T(1) / T(vx.numel());
  VarId id = Emit(Tensor<T>::Scalar(acc * inv), NeedsGrad(x), nullptr);
  if (nodes_[id].needs_grad) {
    nodes_[id].back = [x, id, inv](Tape &t) {
      const T g = t.grad(id).data[0] * inv;
      const Tensor<T> &vx2 = t.value(x);
      Tensor<T> &gx = t.grad_mut(x);
      for (int64_t i = 0; i < vx2.numel(); ++i)
        gx.data[i] += g * 2 * vx2.data[i];
    };
  }
  return id;
}

template <typename T>
typename Tape<T>::VarId Tape<T>::BceMean(VarId pred, Tensor<T> target, T clamp) {
  const Tensor<T> &vp = value(pred);
  SEDKIT_CHECK(vp.shape == target.shape, NumericError, "bce: shape mismatch");
  const T lo = clamp, hi = 1 - clamp;
  T acc = 0;
  for (int64_t i = 0; i < vp.numel(); ++i) {
    const T p = std::min(hi, std::max(lo, vp.data[i]));
    const T y = target.data[i];
    acc += -(y * std::log(p) + (1 - y) * std::log(1 - p));
  }
  const T inv = T(1) / T(vp.numel());
  auto tgt = std::make_shared<Tensor<T>>(std::move(target));
  VarId id = Emit(Tensor<T>::Scalar(acc * inv), NeedsGrad(pred), nullptr);
  if (nodes_[id].needs_grad) {
    nodes_[id].back = [pred, id, tgt, lo, hi, inv](Tape &t) {
      const T g = t.grad(id).data[0] * inv;
      const Tensor<T> &vp2 = t.value(pred);
      Tensor<T> &gp = t.grad_mut(pred);
      for (int64_t i = 0; i < vp2.numel(); ++i) {
        const T raw = vp2.data[i];
        if (raw < lo || raw > hi) continue;  // clamped: zero slope
        const T y = tgt->data[i];
        gp.data[i] += g * (raw - y) / (raw * (1 - raw));
      }
    };
  }
  return id;
}

template <typename T>
typename Tape<T>::VarId Tape<T>::WeightedSum(
    const std::vector<std::pair<VarId, T>> &terms) {
  T acc = 0;
  bool ng = false;
  for (const auto &[v, c] : terms) {
    SEDKIT_CHECK(value(v).numel() == 1, NumericError,
                 "weighted_sum: terms must be scalars");
    acc += c * scalar(v);
    ng = ng || NeedsGrad(v);
  }
  auto terms_p = std::make_shared<std::vector<std::pair<VarId, T>>>(terms);
  VarId id = Emit(Tensor<T>::Scalar(acc), ng, nullptr);
  if (nodes_[id].needs_grad) {
    nodes_[id].back = [id, terms_p](Tape &t) {
      const T g = t.grad(id).data[0];
      for (const auto &[v, c] : *terms_p)
        if (t.NeedsGrad(v)) t.grad_mut(v).data[0] += c * g;
    };
  }
  return id;
}

template <typename T>
void Tape<T>::Backward(VarId loss) {
  SEDKIT_CHECK(value(loss).numel() == 1, NumericError,
               "backward: loss must be scalar");
  SEDKIT_CHECK(grad_enabled_, NumericError, "backward: tape has no gradients");
  SEDKIT_CHECK(!consumed_, NumericError, "backward: tape consumed twice");
  consumed_ = true;
  if (nodes_[loss].needs_grad) nodes_[loss].grad.data[0] = 1;
  RunBackward(loss);
}

template <typename T>
void Tape<T>::BackwardSeeded(
    const std::vector<std::pair<VarId, Tensor<T>>> &seeds) {
  SEDKIT_CHECK(grad_enabled_, NumericError, "backward: tape has no gradients");
  SEDKIT_CHECK(!consumed_, NumericError, "backward: tape consumed twice");
  consumed_ = true;
  VarId from = 0;
  for (const auto &[v, g] : seeds) {
    from = std::max(from, v);
    if (!nodes_[v].needs_grad) continue;
    SEDKIT_CHECK(g.shape == nodes_[v].value.shape, NumericError,
                 "backward: seed shape mismatch");
    for (int64_t i = 0; i < g.numel(); ++i) nodes_[v].grad.data[i] += g.data[i];
  }
  RunBackward(from);
}

template <typename T>
void Tape<T>::RunBackward(VarId from) {
  for (VarId i = from; i >= 0; --i)
    if (nodes_[i].back) nodes_[i].back(*this);
}

template class Tape<float>;
template class Tape<double>;

}  // namespace nn
}  // namespace sedkit
