// ftnet/ops.hpp

// Copyright 2026 The FTNet Authors

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

#ifndef FTNET_OPS_HPP_
#define FTNET_OPS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ftnet/error.hpp"
#include "ftnet/tensor.hpp"

namespace ftnet {

struct ConvGeometry {
  std::size_t stride = 1;
  std::size_t dilation = 1;
  std::size_t pad_left = 0;
  std::size_t pad_right = 0;
};

struct DeconvGeometry {
  std::size_t stride = 1;
  std::size_t pad = 0;
  std::size_t output_pad = 0;
};

inline std::size_t ConvOutputLength(std::size_t length, std::size_t kernel,
                                    const ConvGeometry &g) {
  const std::size_t padded = length + g.pad_left + g.pad_right;
  const std::size_t span = g.dilation * (kernel - 1) + 1;
  if (span > padded) {
    throw ShapeError("effective kernel span " + std::to_string(span) +
                     " exceeds padded length " + std::to_string(padded));
  }
  return (padded - span) / g.stride + 1;
}

inline std::size_t DeconvOutputLength(std::size_t length, std::size_t kernel,
                                      const DeconvGeometry &g) {
  const long long n = static_cast<long long>((length - 1) * g.stride) -
                      2 * static_cast<long long>(g.pad) +
                      static_cast<long long>(kernel + g.output_pad);
  if (length == 0 || n <= 0) {
    throw ShapeError("transposed convolution produces empty output");
  }
  return static_cast<std::size_t>(n);
}

namespace detail {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatMap = Eigen::Map<RowMat<T>>;
template <typename T>
using ConstMatMap = Eigen::Map<const RowMat<T>>;

// Batch items are processed in groups so the unfolded column matrix stays
// within a bounded working set while GEMMs remain wide.
inline std::size_t GroupSize(std::size_t rows, std::size_t cols_per_item,
                             std::size_t batch) {
  constexpr std::size_t kBudget = std::size_t{1} << 21;
  const std::size_t per = std::max<std::size_t>(1, rows * cols_per_item);
  return std::clamp<std::size_t>(kBudget / per, 1, std::max<std::size_t>(batch, 1));
}

inline void CheckSame(const Shape &a, const Shape &b, const char *op) {
  if (a != b) {
    throw ShapeError(std::string(op) + ": shape " + a.str() + " vs " + b.str());
  }
}

inline void CheckBias(const Shape &bias, std::size_t channels, const char *op) {
  if (bias.size() != channels) {
    throw ConfigError(std::string(op) + ": bias has " +
                      std::to_string(bias.size()) + " elements, expected " +
                      std::to_string(channels));
  }
}

}  // namespace detail

/// Cross-correlation over the length axis. weight is (out, in, kernel),
/// bias (if defined) holds `out` elements in any shape.
template <typename T>
Tensor<T> Conv1d(const Tensor<T> &input, const Tensor<T> &weight,
                 const Tensor<T> &bias, const ConvGeometry &g) {
  const Shape in = input.shape();
  const Shape ws = weight.shape();
  const std::size_t cout = ws.batch, cin = ws.channels, k = ws.length;
  if (in.channels != cin) {
    throw ConfigError("conv1d: input has " + std::to_string(in.channels) +
                      " channels, weight expects " + std::to_string(cin));
  }
  if (g.stride < 1 || g.dilation < 1 || k < 1) {
    throw ConfigError("conv1d: stride, dilation and kernel must be >= 1");
  }
  if (bias.defined()) detail::CheckBias(bias.shape(), cout, "conv1d");
  const std::size_t lin = in.length;
  const std::size_t lout = ConvOutputLength(lin, k, g);
  const std::size_t rows = cin * k;
  const std::size_t group = detail::GroupSize(rows, lout, in.batch);
  const bool pointwise = k == 1 && g.stride == 1 && g.pad_left == 0 && g.pad_right == 0;

  // col(c*k + j, b*lout + t) = x[b, c, t*stride + j*dilation - pad_left]
  auto unfold = [=](std::span<const T> x, std::size_t b0, std::size_t nb,
                    detail::RowMat<T> &col) {
    col.setZero(rows, nb * lout);
    for (std::size_t bi = 0; bi < nb; ++bi) {
      const T *xb = x.data() + (b0 + bi) * cin * lin;
      for (std::size_t c = 0; c < cin; ++c) {
        for (std::size_t j = 0; j < k; ++j) {
          T *dst = col.data() + (c * k + j) * nb * lout + bi * lout;
          const long long off = static_cast<long long>(j * g.dilation) -
                                static_cast<long long>(g.pad_left);
          for (std::size_t t = 0; t < lout; ++t) {
            const long long pos = static_cast<long long>(t * g.stride) + off;
            if (pos >= 0 && pos < static_cast<long long>(lin)) dst[t] = xb[c * lin + pos];
          }
        }
      }
    }
  };
  auto fold_add = [=](const detail::RowMat<T> &col, std::size_t b0,
                      std::size_t nb, T *gx) {
    for (std::size_t bi = 0; bi < nb; ++bi) {
      T *gb = gx + (b0 + bi) * cin * lin;
      for (std::size_t c = 0; c < cin; ++c) {
        for (std::size_t j = 0; j < k; ++j) {
          const T *src = col.data() + (c * k + j) * nb * lout + bi * lout;
          const long long off = static_cast<long long>(j * g.dilation) -
                                static_cast<long long>(g.pad_left);
          for (std::size_t t = 0; t < lout; ++t) {
            const long long pos = static_cast<long long>(t * g.stride) + off;
            if (pos >= 0 && pos < static_cast<long long>(lin)) gb[c * lin + pos] += src[t];
          }
        }
      }
    }
  };
  // (cout, nb*lout) <-> output layout (b, cout, lout)
  auto scatter_out = [=](const detail::RowMat<T> &y, std::size_t b0,
                         std::size_t nb, T *out) {
    for (std::size_t bi = 0; bi < nb; ++bi)
      for (std::size_t o = 0; o < cout; ++o)
        std::copy_n(y.data() + o * nb * lout + bi * lout, lout,
                    out + ((b0 + bi) * cout + o) * lout);
  };
  auto gather_out = [=](const T *src, std::size_t b0, std::size_t nb,
                        detail::RowMat<T> &y) {
    y.resize(cout, nb * lout);
    for (std::size_t bi = 0; bi < nb; ++bi)
      for (std::size_t o = 0; o < cout; ++o)
        std::copy_n(src + ((b0 + bi) * cout + o) * lout, lout,
                    y.data() + o * nb * lout + bi * lout);
  };

  const Shape out_shape{in.batch, cout, lout};
  std::vector<T> out(out_shape.size());
  {
    detail::ConstMatMap<T> w(weight.value().data(), cout, rows);
    detail::RowMat<T> col, y;
    for (std::size_t b0 = 0; b0 < in.batch; b0 += group) {
      const std::size_t nb = std::min(group, in.batch - b0);
      if (pointwise && nb == 1) {
        detail::ConstMatMap<T> x(input.value().data() + b0 * cin * lin, cin, lin);
        detail::MatMap<T> o(out.data() + b0 * cout * lout, cout, lout);
        o.noalias() = w * x;
        continue;
      }
      unfold(input.value(), b0, nb, col);
      y.noalias() = w * col;
      scatter_out(y, b0, nb, out.data());
    }
    if (bias.defined()) {
      const auto bv = bias.value();
      for (std::size_t b = 0; b < in.batch; ++b)
        for (std::size_t o = 0; o < cout; ++o) {
          T *row = out.data() + (b * cout + o) * lout;
          for (std::size_t t = 0; t < lout; ++t) row[t] += bv[o];
        }
    }
  }

  std::vector<std::shared_ptr<TensorData<T>>> inputs{input.data(), weight.data()};
  if (bias.defined()) inputs.push_back(bias.data());
  auto xd = input.data();
  auto wd = weight.data();
  auto bd = bias.defined() ? bias.data() : nullptr;
  return Tensor<T>::MakeResult(
      out_shape, std::move(out), std::move(inputs),
      [=](const TensorData<T> &res) {
        const T *gy = res.grad.data();
        detail::RowMat<T> col, gyc, gcol;
        detail::ConstMatMap<T> w(wd->value.data(), cout, rows);
        for (std::size_t b0 = 0; b0 < in.batch; b0 += group) {
          const std::size_t nb = std::min(group, in.batch - b0);
          gather_out(gy, b0, nb, gyc);
          if (wd->requires_grad) {
            unfold(xd->value, b0, nb, col);
            detail::MatMap<T> gw(wd->grad_buffer(), cout, rows);
            gw.noalias() += gyc * col.transpose();
          }
          if (xd->requires_grad) {
            gcol.noalias() = w.transpose() * gyc;
            fold_add(gcol, b0, nb, xd->grad_buffer());
          }
        }
        if (bd && bd->requires_grad) {
          T *gb = bd->grad_buffer();
          for (std::size_t b = 0; b < in.batch; ++b)
            for (std::size_t o = 0; o < cout; ++o) {
              const T *row = gy + (b * cout + o) * lout;
              T acc = 0;
              for (std::size_t t = 0; t < lout; ++t) acc += row[t];
              gb[o] += acc;
            }
        }
      });
}

/// Transposed convolution (the adjoint of a strided Conv1d with pad_left =
/// pad). weight is (in, out, kernel).
template <typename T>
Tensor<T> ConvTranspose1d(const Tensor<T> &input, const Tensor<T> &weight,
                          const Tensor<T> &bias, const DeconvGeometry &g) {
  const Shape in = input.shape();
  const Shape ws = weight.shape();
  const std::size_t cin = ws.batch, cout = ws.channels, k = ws.length;
  if (in.channels != cin) {
    throw ConfigError("conv1d_transpose: input has " + std::to_string(in.channels) +
                      " channels, weight expects " + std::to_string(cin));
  }
  if (g.stride < 1) throw ConfigError("conv1d_transpose: stride must be >= 1");
  if (g.output_pad >= g.stride) {
    throw ConfigError("conv1d_transpose: output_pad must be smaller than stride");
  }
  if (bias.defined()) detail::CheckBias(bias.shape(), cout, "conv1d_transpose");
  const std::size_t lin = in.length;
  const std::size_t lout = DeconvOutputLength(lin, k, g);
  const std::size_t rows = cout * k;
  const std::size_t group = detail::GroupSize(std::max(rows, cin), lin, in.batch);

  // col(o*k + j, b*lin + i) contributes to out[b, o, i*stride + j - pad].
  auto fold_add = [=](const detail::RowMat<T> &col, std::size_t b0,
                      std::size_t nb, T *out) {
    for (std::size_t bi = 0; bi < nb; ++bi) {
      T *ob = out + (b0 + bi) * cout * lout;
      for (std::size_t o = 0; o < cout; ++o)
        for (std::size_t j = 0; j < k; ++j) {
          const T *src = col.data() + (o * k + j) * nb * lin + bi * lin;
          const long long off = static_cast<long long>(j) - static_cast<long long>(g.pad);
          for (std::size_t i = 0; i < lin; ++i) {
            const long long pos = static_cast<long long>(i * g.stride) + off;
            if (pos >= 0 && pos < static_cast<long long>(lout)) ob[o * lout + pos] += src[i];
          }
        }
    }
  };
  auto unfold = [=](const T *src, std::size_t b0, std::size_t nb,
                    detail::RowMat<T> &col) {
    col.setZero(rows, nb * lin);
    for (std::size_t bi = 0; bi < nb; ++bi) {
      const T *sb = src + (b0 + bi) * cout * lout;
      for (std::size_t o = 0; o < cout; ++o)
        for (std::size_t j = 0; j < k; ++j) {
          T *dst = col.data() + (o * k + j) * nb * lin + bi * lin;
          const long long off = static_cast<long long>(j) - static_cast<long long>(g.pad);
          for (std::size_t i = 0; i < lin; ++i) {
            const long long pos = static_cast<long long>(i * g.stride) + off;
            if (pos >= 0 && pos < static_cast<long long>(lout)) dst[i] = sb[o * lout + pos];
          }
        }
    }
  };
  auto gather_in = [=](const T *src, std::size_t b0, std::size_t nb,
                       detail::RowMat<T> &x) {
    x.resize(cin, nb * lin);
    for (std::size_t bi = 0; bi < nb; ++bi)
      for (std::size_t c = 0; c < cin; ++c)
        std::copy_n(src + ((b0 + bi) * cin + c) * lin, lin,
                    x.data() + c * nb * lin + bi * lin);
  };
  auto scatter_in_add = [=](const detail::RowMat<T> &x, std::size_t b0,
                            std::size_t nb, T *dst) {
    for (std::size_t bi = 0; bi < nb; ++bi)
      for (std::size_t c = 0; c < cin; ++c) {
        const T *s = x.data() + c * nb * lin + bi * lin;
        T *d = dst + ((b0 + bi) * cin + c) * lin;
        for (std::size_t i = 0; i < lin; ++i) d[i] += s[i];
      }
  };

  const Shape out_shape{in.batch, cout, lout};
  std::vector<T> out(out_shape.size(), T(0));
  {
    detail::ConstMatMap<T> w(weight.value().data(), cin, rows);
    detail::RowMat<T> x, col;
    for (std::size_t b0 = 0; b0 < in.batch; b0 += group) {
      const std::size_t nb = std::min(group, in.batch - b0);
      gather_in(input.value().data(), b0, nb, x);
      col.noalias() = w.transpose() * x;
      fold_add(col, b0, nb, out.data());
    }
    if (bias.defined()) {
      const auto bv = bias.value();
      for (std::size_t b = 0; b < in.batch; ++b)
        for (std::size_t o = 0; o < cout; ++o) {
          T *row = out.data() + (b * cout + o) * lout;
          for (std::size_t t = 0; t < lout; ++t) row[t] += bv[o];
        }
    }
  }

  std::vector<std::shared_ptr<TensorData<T>>> inputs{input.data(), weight.data()};
  if (bias.defined()) inputs.push_back(bias.data());
  auto xd = input.data();
  auto wd = weight.data();
  auto bd = bias.defined() ? bias.data() : nullptr;
  return Tensor<T>::MakeResult(
      out_shape, std::move(out), std::move(inputs),
      [=](const TensorData<T> &res) {
        const T *gy = res.grad.data();
        detail::RowMat<T> gcol, x, gx;
        detail::ConstMatMap<T> w(wd->value.data(), cin, rows);
        for (std::size_t b0 = 0; b0 < in.batch; b0 += group) {
          const std::size_t nb = std::min(group, in.batch - b0);
          unfold(gy, b0, nb, gcol);
          if (wd->requires_grad) {
            gather_in(xd->value.data(), b0, nb, x);
            detail::MatMap<T> gw(wd->grad_buffer(), cin, rows);
            gw.noalias() += x * gcol.transpose();
          }
          if (xd->requires_grad) {
            gx.noalias() = w * gcol;
            scatter_in_add(gx, b0, nb, xd->grad_buffer());
          }
        }
        if (bd && bd->requires_grad) {
          T *gb = bd->grad_buffer();
          for (std::size_t b = 0; b < in.batch; ++b)
            for (std::size_t o = 0; o < cout; ++o) {
              const T *row = gy + (b * cout + o) * lout;
              T acc = 0;
              for (std::size_t t = 0; t < lout; ++t) acc += row[t];
              gb[o] += acc;
            }
        }
      });
}

namespace detail {

// Elementwise unary op whose local derivative is a function of (x, y).
template <typename T, typename F, typename D>
Tensor<T> Unary(const Tensor<T> &x, F f, D dfdx) {
  const auto xv = x.value();
  std::vector<T> out(xv.size());
  for (std::size_t i = 0; i < xv.size(); ++i) out[i] = f(xv[i]);
  auto xd = x.data();
  return Tensor<T>::MakeResult(
      x.shape(), std::move(out), {xd}, [xd, dfdx](const TensorData<T> &res) {
        T *g = xd->grad_buffer();
        for (std::size_t i = 0; i < res.value.size(); ++i)
          g[i] += res.grad[i] * dfdx(xd->value[i], res.value[i]);
      });
}

}  // namespace detail

template <typename T>
Tensor<T> Sigmoid(const Tensor<T> &x) {
  return detail::Unary(
      x,
      [](T v) {
        // Split by sign so exp() never overflows.
        if (v >= T(0)) return T(1) / (T(1) + std::exp(-v));
        const T e = std::exp(v);
        return e / (T(1) + e);
      },
      [](T, T y) { return y * (T(1) - y); });
}

template <typename T>
Tensor<T> Tanh(const Tensor<T> &x) {
  return detail::Unary(x, [](T v) { return std::tanh(v); },
                       [](T, T y) { return T(1) - y * y; });
}

/// x for x >= 0, slope[c] * x otherwise. slopes holds one value per channel.
template <typename T>
Tensor<T> PRelu(const Tensor<T> &x, const Tensor<T> &slopes) {
  if (!slopes.defined()) throw ConfigError("prelu requires per-channel slopes");
  const Shape s = x.shape();
  if (slopes.size() != s.channels) {
    throw ConfigError("prelu: " + std::to_string(slopes.size()) +
                      " slopes for " + std::to_string(s.channels) + " channels");
  }
  const auto xv = x.value();
  const auto av = slopes.value();
  std::vector<T> out(xv.size());
  for (std::size_t b = 0; b < s.batch; ++b)
    for (std::size_t c = 0; c < s.channels; ++c) {
      const std::size_t base = (b * s.channels + c) * s.length;
      for (std::size_t t = 0; t < s.length; ++t) {
        const T v = xv[base + t];
        out[base + t] = v >= T(0) ? v : av[c] * v;
      }
    }
  auto xd = x.data();
  auto ad = slopes.data();
  return Tensor<T>::MakeResult(
      s, std::move(out), {xd, ad}, [xd, ad, s](const TensorData<T> &res) {
        T *gx = xd->requires_grad ? xd->grad_buffer() : nullptr;
        T *ga = ad->requires_grad ? ad->grad_buffer() : nullptr;
        for (std::size_t b = 0; b < s.batch; ++b)
          for (std::size_t c = 0; c < s.channels; ++c) {
            const std::size_t base = (b * s.channels + c) * s.length;
            T acc = 0;
            for (std::size_t t = 0; t < s.length; ++t) {
              const T v = xd->value[base + t];
              const T g = res.grad[base + t];
              if (v >= T(0)) {
                if (gx) gx[base + t] += g;
              } else {
                if (gx) gx[base + t] += ad->value[c] * g;
                acc += v * g;
              }
            }
            if (ga) ga[c] += acc;
          }
      });
}

enum class ActivationKind { kSigmoid, kTanh, kPRelu };

template <typename T>
Tensor<T> Activation(const Tensor<T> &x, ActivationKind kind,
                     const Tensor<T> &prelu_slopes = {}) {
  switch (kind) {
    case ActivationKind::kSigmoid: return Sigmoid(x);
    case ActivationKind::kTanh: return Tanh(x);
    case ActivationKind::kPRelu: return PRelu(x, prelu_slopes);
  }
  throw ConfigError("unknown activation");
}

enum class PointwiseMode { kAdd, kSub, kMul };

template <typename T>
Tensor<T> Pointwise(const Tensor<T> &a, const Tensor<T> &b, PointwiseMode mode) {
  detail::CheckSame(a.shape(), b.shape(), "pointwise");
  const auto av = a.value();
  const auto bv = b.value();
  std::vector<T> out(av.size());
  switch (mode) {
    case PointwiseMode::kAdd:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] + bv[i];
      break;
    case PointwiseMode::kSub:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] - bv[i];
      break;
    case PointwiseMode::kMul:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * bv[i];
      break;
  }
  auto ad = a.data();
  auto bd = b.data();
  return Tensor<T>::MakeResult(
      a.shape(), std::move(out), {ad, bd}, [ad, bd, mode](const TensorData<T> &res) {
        const std::size_t n = res.value.size();
        // Same tensor on both sides: both contributions land in one buffer.
        if (ad->requires_grad) {
          T *g = ad->grad_buffer();
          if (mode == PointwiseMode::kMul)
            for (std::size_t i = 0; i < n; ++i) g[i] += res.grad[i] * bd->value[i];
          else
            for (std::size_t i = 0; i < n; ++i) g[i] += res.grad[i];
        }
        if (bd->requires_grad) {
          T *g = bd->grad_buffer();
          if (mode == PointwiseMode::kMul)
            for (std::size_t i = 0; i < n; ++i) g[i] += res.grad[i] * ad->value[i];
          else if (mode == PointwiseMode::kSub)
            for (std::size_t i = 0; i < n; ++i) g[i] -= res.grad[i];
          else
            for (std::size_t i = 0; i < n; ++i) g[i] += res.grad[i];
        }
      });
}

template <typename T>
Tensor<T> Add(const Tensor<T> &a, const Tensor<T> &b) {
  return Pointwise(a, b, PointwiseMode::kAdd);
}
template <typename T>
Tensor<T> Sub(const Tensor<T> &a, const Tensor<T> &b) {
  return Pointwise(a, b, PointwiseMode::kSub);
}
template <typename T>
Tensor<T> Mul(const Tensor<T> &a, const Tensor<T> &b) {
  return Pointwise(a, b, PointwiseMode::kMul);
}

/// Channel-axis concatenation, a's channels first.
template <typename T>
Tensor<T> ConcatChannels(const Tensor<T> &a, const Tensor<T> &b) {
  const Shape sa = a.shape(), sb = b.shape();
  if (sa.batch != sb.batch || sa.length != sb.length) {
    throw ShapeError("concat_channels: " + sa.str() + " vs " + sb.str());
  }
  const std::size_t len = sa.length;
  const Shape s{sa.batch, sa.channels + sb.channels, len};
  std::vector<T> out(s.size());
  const auto av = a.value();
  const auto bv = b.value();
  for (std::size_t n = 0; n < s.batch; ++n) {
    std::copy_n(av.data() + n * sa.channels * len, sa.channels * len,
                out.data() + n * s.channels * len);
    std::copy_n(bv.data() + n * sb.channels * len, sb.channels * len,
                out.data() + (n * s.channels + sa.channels) * len);
  }
  auto ad = a.data();
  auto bd = b.data();
  return Tensor<T>::MakeResult(
      s, std::move(out), {ad, bd}, [ad, bd, sa, sb, s, len](const TensorData<T> &res) {
        for (std::size_t n = 0; n < s.batch; ++n) {
          const T *g = res.grad.data() + n * s.channels * len;
          if (ad->requires_grad && sa.channels > 0) {
            T *ga = ad->grad_buffer() + n * sa.channels * len;
            for (std::size_t i = 0; i < sa.channels * len; ++i) ga[i] += g[i];
          }
          if (bd->requires_grad && sb.channels > 0) {
            T *gb = bd->grad_buffer() + n * sb.channels * len;
            const T *gs = g + sa.channels * len;
            for (std::size_t i = 0; i < sb.channels * len; ++i) gb[i] += gs[i];
          }
        }
      });
}

/// mean |pred - target|; subgradient 0 at ties.
template <typename T>
Tensor<T> MaeLoss(const Tensor<T> &pred, const Tensor<T> &target) {
  detail::CheckSame(pred.shape(), target.shape(), "mae_loss");
  const auto pv = pred.value();
  const auto tv = target.value();
  const std::size_t n = pv.size();
  if (n == 0) throw ShapeError("mae_loss on empty tensors");
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::abs(static_cast<double>(pv[i] - tv[i]));
  std::vector<T> out{static_cast<T>(acc / static_cast<double>(n))};
  auto pd = pred.data();
  auto td = target.data();
  return Tensor<T>::MakeResult(
      Shape{1, 1, 1}, std::move(out), {pd, td}, [pd, td, n](const TensorData<T> &res) {
        const T scale = res.grad[0] / static_cast<T>(n);
        auto sign = [](T d) { return d > T(0) ? T(1) : (d < T(0) ? T(-1) : T(0)); };
        if (pd->requires_grad) {
          T *g = pd->grad_buffer();
          for (std::size_t i = 0; i < n; ++i) g[i] += scale * sign(pd->value[i] - td->value[i]);
        }
        if (td->requires_grad) {
          T *g = td->grad_buffer();
          for (std::size_t i = 0; i < n; ++i) g[i] -= scale * sign(pd->value[i] - td->value[i]);
        }
      });
}

/// Sum of all elements as a one-element tensor.
template <typename T>
Tensor<T> Sum(const Tensor<T> &x) {
  T acc = 0;
  for (T v : x.value()) acc += v;
  auto xd = x.data();
  return Tensor<T>::MakeResult(Shape{1, 1, 1}, {acc}, {xd}, [xd](const TensorData<T> &res) {
    T *g = xd->grad_buffer();
    for (std::size_t i = 0; i < xd->value.size(); ++i) g[i] += res.grad[0];
  });
}

}  // namespace ftnet

#endif  // FTNET_OPS_HPP_
