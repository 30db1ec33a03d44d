// ftnet/tensor.hpp

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

#ifndef FTNET_TENSOR_HPP_
#define FTNET_TENSOR_HPP_

#include <algorithm>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ftnet/error.hpp"

namespace ftnet {

/// (batch, channels, length). Convolution weights reuse the same triple as
/// (out_channels, in_channels, kernel) or, for transposed convolutions,
/// (in_channels, out_channels, kernel).
struct Shape {
  std::size_t batch = 0;
  std::size_t channels = 0;
  std::size_t length = 0;

  constexpr std::size_t size() const { return batch * channels * length; }
  friend constexpr bool operator==(const Shape &, const Shape &) = default;

  std::string str() const {
    return "(" + std::to_string(batch) + ", " + std::to_string(channels) +
           ", " + std::to_string(length) + ")";
  }
};

template <typename T>
struct TensorData;

/// Backpropagation record attached to a non-leaf tensor.
template <typename T>
struct GradNode {
  std::vector<std::shared_ptr<TensorData<T>>> inputs;
  // Receives the output tensor (value and populated grad) and pushes
  // contributions into the inputs that require grad.
  std::function<void(const TensorData<T> &)> propagate;
};

template <typename T>
struct TensorData {
  Shape shape;
  std::vector<T> value;
  std::vector<T> grad;  // empty until something is accumulated
  bool requires_grad = false;
  std::shared_ptr<GradNode<T>> node;

  T *grad_buffer() {
    if (grad.empty()) grad.assign(value.size(), T(0));
    return grad.data();
  }
};

namespace detail {
inline bool &GradModeFlag() {
  thread_local bool enabled = true;
  return enabled;
}
}  // namespace detail

/// Disables tape recording on the current thread for its lifetime.
class NoGradGuard {
 public:
  NoGradGuard() : saved_(detail::GradModeFlag()) {
    detail::GradModeFlag() = false;
  }
  ~NoGradGuard() { detail::GradModeFlag() = saved_; }
  NoGradGuard(const NoGradGuard &) = delete;
  NoGradGuard &operator=(const NoGradGuard &) = delete;

 private:
  bool saved_;
};

inline bool GradEnabled() { return detail::GradModeFlag(); }

/// Shared handle to a rank-3 array with optional gradient. Copies alias the
/// same storage, which is what lets one parameter be used many times in a
/// graph and accumulate all of its gradient contributions.
template <typename T>
class Tensor {
 public:
  using Scalar = T;

  Tensor() = default;

  static Tensor Zeros(Shape shape, bool requires_grad = false) {
    return Filled(shape, T(0), requires_grad);
  }

  static Tensor Filled(Shape shape, T v, bool requires_grad = false) {
    Tensor t;
    t.data_ = std::make_shared<TensorData<T>>();
    t.data_->shape = shape;
    t.data_->value.assign(shape.size(), v);
    t.data_->requires_grad = requires_grad;
    return t;
  }

  static Tensor FromValues(Shape shape, std::vector<T> values,
                           bool requires_grad = false) {
    if (values.size() != shape.size()) {
      throw ShapeError("value count " + std::to_string(values.size()) +
                       " does not match shape " + shape.str());
    }
    Tensor t;
    t.data_ = std::make_shared<TensorData<T>>();
    t.data_->shape = shape;
    t.data_->value = std::move(values);
    t.data_->requires_grad = requires_grad;
    return t;
  }

  /// 1 x 1 x n row, convenient for tests and small hand-built inputs.
  static Tensor Row(std::vector<T> values, bool requires_grad = false) {
    const Shape s{1, 1, values.size()};
    return FromValues(s, std::move(values), requires_grad);
  }

  bool defined() const { return data_ != nullptr; }
  const Shape &shape() const { return data_->shape; }
  std::size_t size() const { return data_->value.size(); }
  bool requires_grad() const { return data_->requires_grad; }
  bool has_grad() const { return !data_->grad.empty(); }

  std::span<T> value() { return data_->value; }
  std::span<const T> value() const { return data_->value; }
  std::span<const T> grad() const { return data_->grad; }
  std::span<T> mutable_grad() { return {data_->grad_buffer(), size()}; }

  T &at(std::size_t b, std::size_t c, std::size_t t) {
    const Shape &s = data_->shape;
    return data_->value[(b * s.channels + c) * s.length + t];
  }
  T at(std::size_t b, std::size_t c, std::size_t t) const {
    const Shape &s = data_->shape;
    return data_->value[(b * s.channels + c) * s.length + t];
  }

  /// Value of a one-element tensor.
  T item() const {
    if (size() != 1) throw UsageError("item() on tensor of shape " + shape().str());
    return data_->value[0];
  }

  void zero_grad() { data_->grad.clear(); }

  /// Same values, no history, no gradient.
  Tensor detach() const { return FromValues(shape(), data_->value, false); }

  /// Deep copy of values into fresh storage with the given grad flag.
  Tensor clone(bool requires_grad = false) const {
    return FromValues(shape(), data_->value, requires_grad);
  }

  const std::shared_ptr<TensorData<T>> &data() const { return data_; }

  /// Builds the output tensor of an op. A tape node is attached only when
  /// recording is on and at least one input needs a gradient.
  static Tensor MakeResult(
      Shape shape, std::vector<T> values,
      std::vector<std::shared_ptr<TensorData<T>>> inputs,
      std::function<void(const TensorData<T> &)> propagate) {
    Tensor out = FromValues(shape, std::move(values));
    if (!GradEnabled()) return out;
    const bool any = std::any_of(inputs.begin(), inputs.end(),
                                 [](const auto &d) { return d->requires_grad; });
    if (!any) return out;
    out.data_->requires_grad = true;
    out.data_->node = std::make_shared<GradNode<T>>();
    out.data_->node->inputs = std::move(inputs);
    out.data_->node->propagate = std::move(propagate);
    return out;
  }

 private:
  std::shared_ptr<TensorData<T>> data_;
};

/// Reverse-mode sweep from a one-element loss. Leaf tensors that require
/// grad end up holding d(loss)/d(leaf), added onto whatever they held.
/// Interior gradients and the tape are released afterwards.
template <typename T>
void Backward(const Tensor<T> &loss) {
  if (!loss.defined() || loss.size() != 1) {
    throw UsageError("backward() requires a scalar loss");
  }
  if (!loss.requires_grad()) {
    throw UsageError("backward() on a loss that does not depend on any parameter");
  }
  using DataPtr = std::shared_ptr<TensorData<T>>;
  // Iterative post-order DFS gives a topological order.
  std::vector<TensorData<T> *> order;
  std::unordered_set<TensorData<T> *> visited;
  std::vector<std::pair<TensorData<T> *, std::size_t>> stack;
  stack.emplace_back(loss.data().get(), 0);
  visited.insert(loss.data().get());
  while (!stack.empty()) {
    auto &[node, next] = stack.back();
    const std::vector<DataPtr> *inputs =
        node->node ? &node->node->inputs : nullptr;
    if (inputs && next < inputs->size()) {
      TensorData<T> *child = (*inputs)[next++].get();
      if (child->requires_grad && visited.insert(child).second) {
        stack.emplace_back(child, 0);
      }
      continue;
    }
    order.push_back(node);
    stack.pop_back();
  }
  loss.data()->grad_buffer()[0] += T(1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    TensorData<T> *d = *it;
    if (!d->node) continue;
    if (!d->grad.empty()) d->node->propagate(*d);
  }
  for (TensorData<T> *d : order) {
    if (d->node) {
      d->grad.clear();
      d->grad.shrink_to_fit();
      d->node.reset();
      d->requires_grad = false;
    }
  }
}

}  // namespace ftnet

#endif  // FTNET_TENSOR_HPP_
