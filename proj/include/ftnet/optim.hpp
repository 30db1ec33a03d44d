// ftnet/optim.hpp

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

#ifndef FTNET_OPTIM_HPP_
#define FTNET_OPTIM_HPP_

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ftnet/error.hpp"
#include "ftnet/tensor.hpp"

namespace ftnet {

/// A named trainable tensor plus its Adam moment state.
template <typename T>
struct Parameter {
  std::string name;
  Tensor<T> tensor;
  std::vector<T> m;
  std::vector<T> v;
  std::uint64_t step_count = 0;

  Parameter() = default;
  Parameter(std::string n, Tensor<T> t)
      : name(std::move(n)), tensor(std::move(t)), m(tensor.size(), T(0)),
        v(tensor.size(), T(0)) {}
};

struct AdamOptions {
  double lr = 2e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Global L2 norm of all populated gradients.
template <typename T>
double GradientNorm(std::span<const Parameter<T>> params) {
  double acc = 0.0;
  for (const auto &p : params)
    for (T g : p.tensor.grad()) acc += static_cast<double>(g) * g;
  return std::sqrt(acc);
}

/// Rescales all gradients so their global norm is at most max_norm.
template <typename T>
void ClipGradients(std::span<Parameter<T>> params, double max_norm) {
  const double norm = GradientNorm<T>(params);
  if (norm <= max_norm || norm == 0.0) return;
  const T scale = static_cast<T>(max_norm / norm);
  for (auto &p : params)
    if (p.tensor.has_grad())
      for (T &g : p.tensor.mutable_grad()) g *= scale;
}

/// One bias-corrected Adam update over every parameter, then clears grads.
template <typename T>
void AdamStep(std::span<Parameter<T>> params, const AdamOptions &opt) {
  if (!(opt.beta1 > 0.0 && opt.beta1 < 1.0 && opt.beta2 > 0.0 && opt.beta2 < 1.0)) {
    throw ConfigError("adam: beta1 and beta2 must lie in (0, 1)");
  }
  for (const auto &p : params) {
    if (!p.tensor.has_grad()) {
      throw UsageError("adam: parameter '" + p.name + "' has no gradient");
    }
  }
  for (auto &p : params) {
    const std::uint64_t t = ++p.step_count;
    const double c1 = 1.0 - std::pow(opt.beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(opt.beta2, static_cast<double>(t));
    const T b1 = static_cast<T>(opt.beta1), b2 = static_cast<T>(opt.beta2);
    const T step = static_cast<T>(opt.lr / c1);
    const T inv_c2 = static_cast<T>(1.0 / c2);
    const T eps = static_cast<T>(opt.eps);
    auto w = p.tensor.value();
    auto g = p.tensor.grad();
    for (std::size_t i = 0; i < w.size(); ++i) {
      p.m[i] = b1 * p.m[i] + (T(1) - b1) * g[i];
      p.v[i] = b2 * p.v[i] + (T(1) - b2) * g[i] * g[i];
      w[i] -= step * p.m[i] / (std::sqrt(p.v[i] * inv_c2) + eps);
    }
    p.tensor.zero_grad();
  }
}

}  // namespace ftnet

#endif  // FTNET_OPTIM_HPP_
