// ftnet/model.hpp

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

#ifndef FTNET_MODEL_HPP_
#define FTNET_MODEL_HPP_

#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ftnet/config.hpp"
#include "ftnet/error.hpp"
#include "ftnet/ops.hpp"
#include "ftnet/optim.hpp"
#include "ftnet/rng.hpp"
#include "ftnet/tensor.hpp"

namespace ftnet {

/// Named parameter set of one FTNet. The same set serves every stage.
template <typename T>
class FTNetParams {
 public:
  Parameter<T> &Add(std::string name, Shape shape) {
    if (index_.count(name)) throw ConfigError("duplicate parameter " + name);
    index_.emplace(name, params_.size());
    params_.emplace_back(std::move(name), Tensor<T>::Zeros(shape, true));
    return params_.back();
  }

  const Tensor<T> &operator[](std::string_view name) const { return Get(name).tensor; }

  const Parameter<T> &Get(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ConfigError("unknown parameter " + std::string(name));
    return params_[it->second];
  }
  Parameter<T> &Get(std::string_view name) {
    return const_cast<Parameter<T> &>(std::as_const(*this).Get(name));
  }
  bool Contains(std::string_view name) const { return index_.find(name) != index_.end(); }

  std::span<Parameter<T>> all() { return params_; }
  std::span<const Parameter<T>> all() const { return params_; }
  std::size_t size() const { return params_.size(); }

  void ZeroGrad() {
    for (auto &p : params_) p.tensor.zero_grad();
  }

 private:
  std::vector<Parameter<T>> params_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// Weight, optional bias and optional PReLU slopes of one convolution. The
/// slopes of a layer `x` live in their own activation module `x_prelu`.
template <typename T>
struct ConvLayer {
  Tensor<T> weight;
  Tensor<T> bias;
  Tensor<T> slopes;

  static ConvLayer From(const FTNetParams<T> &p, const std::string &prefix) {
    ConvLayer l;
    l.weight = p[prefix + ".weight"];
    if (p.Contains(prefix + ".bias")) l.bias = p[prefix + ".bias"];
    if (p.Contains(prefix + "_prelu.slope")) l.slopes = p[prefix + "_prelu.slope"];
    return l;
  }
};

template <typename T>
struct ConvGruCell {
  ConvLayer<T> w_z, w_r, w_n;  // input-to-hidden, with bias
  ConvLayer<T> u_z, u_r, u_n;  // hidden-to-hidden, bias-free
  GruUpdate update = GruUpdate::kPrinted;

  static ConvGruCell From(const FTNetParams<T> &p, GruUpdate update) {
    ConvGruCell c;
    c.w_z = ConvLayer<T>::From(p, "conv_rnn.W_z");
    c.w_r = ConvLayer<T>::From(p, "conv_rnn.W_r");
    c.w_n = ConvLayer<T>::From(p, "conv_rnn.W_n");
    c.u_z = ConvLayer<T>::From(p, "conv_rnn.U_z");
    c.u_r = ConvLayer<T>::From(p, "conv_rnn.U_r");
    c.u_n = ConvLayer<T>::From(p, "conv_rnn.U_n");
    c.update = update;
    return c;
  }
};

template <typename T>
struct GluBlock {
  ConvLayer<T> in;    // 1x1 bottleneck, followed by PReLU
  ConvLayer<T> main;  // dilated, linear path
  ConvLayer<T> gate;  // dilated, sigmoid path
  ConvLayer<T> out;   // 1x1 back to the residual width

  static GluBlock From(const FTNetParams<T> &p, const std::string &prefix) {
    GluBlock g;
    g.in = ConvLayer<T>::From(p, prefix + ".in");
    g.in.slopes = p[prefix + ".prelu"];
    g.main = ConvLayer<T>::From(p, prefix + ".main");
    g.gate = ConvLayer<T>::From(p, prefix + ".gate");
    g.out = ConvLayer<T>::From(p, prefix + ".out");
    return g;
  }
};

/// Recurrent state carried from one stage to the next.
template <typename T>
struct StageState {
  Tensor<T> h;       // (batch, c0, frame_len / 2)
  Tensor<T> s_prev;  // (batch, 1, frame_len)
};

struct LayerTrace {
  std::string name;
  Shape input;   // batch, channels, length; batch is not part of the report
  Shape output;
};

using ShapeTrace = std::vector<LayerTrace>;

// Conv geometries implied by an odd kernel k.
inline ConvGeometry SameGeometry(std::size_t k, std::size_t dilation = 1) {
  const std::size_t p = dilation * (k - 1) / 2;
  return {1, dilation, p, p};
}
inline ConvGeometry DownGeometry(std::size_t k) { return {2, 1, (k - 1) / 2, (k - 1) / 2 - 1}; }
inline DeconvGeometry UpGeometry(std::size_t k) { return {2, (k - 1) / 2, 1}; }

namespace detail {

inline std::vector<std::string> GluNames(const ModelConfig &cfg) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < cfg.glu_dilations.size(); ++i)
    names.push_back("glu_" + std::to_string(i + 1));
  return names;
}

template <typename T>
Tensor<T> Apply(const ConvLayer<T> &l, const Tensor<T> &x, const ConvGeometry &g) {
  return Conv1d(x, l.weight, l.bias, g);
}

// Re-labels shape errors with the layer that raised them.
template <typename F>
auto AtLayer(const std::string &layer, F &&f) {
  try {
    return f();
  } catch (const ShapeError &e) {
    throw ShapeError("layer " + layer + ": " + e.what());
  } catch (const ConfigError &e) {
    throw ShapeError("layer " + layer + ": " + e.what());
  }
}

inline void Record(ShapeTrace *trace, std::string name, Shape in, Shape out) {
  if (trace) trace->push_back({std::move(name), in, out});
}

}  // namespace detail

/// Allocates every parameter in layer order and draws weights and biases
/// from U(-1/sqrt(fan_in), 1/sqrt(fan_in)); PReLU slopes start at 0.25.
template <typename T>
FTNetParams<T> BuildModel(const ModelConfig &cfg) {
  cfg.Validate();
  const std::size_t k = cfg.kernel;
  const auto &c = cfg.encoder_channels;
  const std::size_t bn = cfg.glu_bottleneck;
  FTNetParams<T> p;
  Rng rng(cfg.seed);

  auto init = [&](Parameter<T> &param, double fan_in) {
    const double bound = 1.0 / std::sqrt(fan_in);
    for (T &w : param.tensor.value()) w = static_cast<T>(rng.Uniform(-bound, bound));
  };
  auto conv = [&](const std::string &name, std::size_t cin, std::size_t cout,
                  std::size_t kernel, bool bias, bool prelu) {
    const double fan_in = static_cast<double>(cin * kernel);
    init(p.Add(name + ".weight", {cout, cin, kernel}), fan_in);
    if (bias) init(p.Add(name + ".bias", {1, cout, 1}), fan_in);
    if (prelu) {
      for (T &a : p.Add(name + "_prelu.slope", {1, cout, 1}).tensor.value()) a = T(0.25);
    }
  };
  auto deconv = [&](const std::string &name, std::size_t cin, std::size_t cout, bool prelu) {
    // Each output sample sums about cin * k / stride terms.
    const double fan_in = static_cast<double>(cin * k) / 2.0;
    init(p.Add(name + ".weight", {cin, cout, k}), fan_in);
    init(p.Add(name + ".bias", {1, cout, 1}), fan_in);
    if (prelu) {
      for (T &a : p.Add(name + "_prelu.slope", {1, cout, 1}).tensor.value()) a = T(0.25);
    }
  };

  conv("conv1d_1", 2, c[0], k, true, true);
  for (const char *g : {"W_z", "W_r", "W_n"})
    conv(std::string("conv_rnn.") + g, c[0], c[0], k, true, false);
  for (const char *g : {"U_z", "U_r", "U_n"})
    conv(std::string("conv_rnn.") + g, c[0], c[0], k, false, false);
  conv("conv1d_2", c[0], c[1], k, true, true);
  conv("conv1d_3", c[1], c[2], k, true, true);
  conv("conv1d_4", c[2], c[3], k, true, true);
  conv("conv1d_5", c[3], c[4], k, true, true);
  for (const auto &g : detail::GluNames(cfg)) {
    conv(g + ".in", c[4], bn, 1, true, false);
    for (T &a : p.Add(g + ".prelu", {1, bn, 1}).tensor.value()) a = T(0.25);
    conv(g + ".main", bn, bn, k, true, false);
    conv(g + ".gate", bn, bn, k, true, false);
    conv(g + ".out", bn, c[4], 1, true, false);
  }
  deconv("deconv1d_1", 2 * c[4], c[3], true);
  deconv("deconv1d_2", 2 * c[3], c[2], true);
  deconv("deconv1d_3", 2 * c[2], c[1], true);
  deconv("deconv1d_4", 2 * c[1], 1, false);
  return p;
}

/// Sets every weight, bias and slope to zero.
template <typename T>
void ZeroParameters(FTNetParams<T> &p) {
  for (auto &param : p.all())
    for (T &w : param.tensor.value()) w = T(0);
}

/// z, r and n gates followed by the update selected in the cell. All gate
/// convolutions are stride 1 with symmetric padding.
template <typename T>
Tensor<T> ConvGruForward(const ConvGruCell<T> &cell, const Tensor<T> &h_hat,
                         const Tensor<T> &h_prev) {
  if (h_hat.shape() != h_prev.shape()) {
    throw ShapeError("convgru: h_hat " + h_hat.shape().str() + " vs h_prev " +
                     h_prev.shape().str());
  }
  const ConvGeometry g = SameGeometry(cell.w_z.weight.shape().length);
  using detail::Apply;
  const Tensor<T> z = Sigmoid(Add(Apply(cell.w_z, h_hat, g), Apply(cell.u_z, h_prev, g)));
  const Tensor<T> r = Sigmoid(Add(Apply(cell.w_r, h_hat, g), Apply(cell.u_r, h_prev, g)));
  const Tensor<T> n =
      Tanh(Add(Apply(cell.w_n, h_hat, g), Apply(cell.u_n, Mul(r, h_prev), g)));
  const Tensor<T> &base = cell.update == GruUpdate::kPrinted ? h_hat : h_prev;
  // (1 - z) * base + z * n
  return Add(base, Mul(z, Sub(n, base)));
}

/// Bottleneck -> parallel dilated main/gate -> product -> 1x1 -> residual.
template <typename T>
Tensor<T> GluForward(const GluBlock<T> &glu, const Tensor<T> &x, std::size_t dilation) {
  if (x.shape().channels != glu.in.weight.shape().channels) {
    throw ShapeError("glu: input " + x.shape().str() + " does not match " +
                     std::to_string(glu.in.weight.shape().channels) + " channels");
  }
  const ConvGeometry dil = SameGeometry(glu.main.weight.shape().length, dilation);
  const Tensor<T> u = PRelu(detail::Apply(glu.in, x, ConvGeometry{}), glu.in.slopes);
  const Tensor<T> main = detail::Apply(glu.main, u, dil);
  const Tensor<T> gate = Sigmoid(detail::Apply(glu.gate, u, dil));
  return Add(x, detail::Apply(glu.out, Mul(main, gate), ConvGeometry{}));
}

template <typename T>
struct SrnnOutput {
  Tensor<T> h_hat;
  Tensor<T> h;
};

template <typename T>
SrnnOutput<T> SrnnForward(const FTNetParams<T> &p, const ModelConfig &cfg, const Tensor<T> &x,
                          const Tensor<T> &s_prev, const Tensor<T> &h_prev,
                          ShapeTrace *trace = nullptr) {
  const Shape xs = x.shape();
  if (xs.channels != 1 || xs.length != cfg.frame_len || s_prev.shape() != xs) {
    throw ShapeError("srnn: expected x and s_prev of shape (n, 1, " +
                     std::to_string(cfg.frame_len) + "), got " + xs.str() + " and " +
                     s_prev.shape().str());
  }
  const Shape hs{xs.batch, cfg.encoder_channels[0], cfg.frame_len / 2};
  if (h_prev.shape() != hs) {
    throw ShapeError("srnn: h_prev " + h_prev.shape().str() + ", expected " + hs.str());
  }
  SrnnOutput<T> out;
  const Tensor<T> in = ConcatChannels(x, s_prev);
  out.h_hat = detail::AtLayer("conv1d_1", [&] {
    const ConvLayer<T> l = ConvLayer<T>::From(p, "conv1d_1");
    return PRelu(detail::Apply(l, in, DownGeometry(cfg.kernel)), l.slopes);
  });
  detail::Record(trace, "conv1d_1", in.shape(), out.h_hat.shape());
  out.h = detail::AtLayer("conv_rnn", [&] {
    return ConvGruForward(ConvGruCell<T>::From(p, cfg.gru_update), out.h_hat, h_prev);
  });
  detail::Record(trace, "conv_rnn", out.h_hat.shape(), out.h.shape());
  return out;
}

template <typename T>
StageState<T> InitialState(const ModelConfig &cfg, const Tensor<T> &x) {
  return {Tensor<T>::Zeros({x.shape().batch, cfg.encoder_channels[0], cfg.frame_len / 2}),
          x};
}

template <typename T>
struct StageOutput {
  Tensor<T> estimate;
  StageState<T> state;
};

/// One pass of the shared network: SRNN, encoder, GLU stack, decoder with
/// skip concatenations and a tanh output layer.
template <typename T>
StageOutput<T> StageForward(const FTNetParams<T> &p, const ModelConfig &cfg, const Tensor<T> &x,
                            const StageState<T> &state, ShapeTrace *trace = nullptr) {
  const std::size_t k = cfg.kernel;
  const SrnnOutput<T> srnn = SrnnForward(p, cfg, x, state.s_prev, state.h, trace);

  auto encode = [&](const std::string &name, const Tensor<T> &in, const ConvGeometry &g) {
    Tensor<T> out = detail::AtLayer(name, [&] {
      const ConvLayer<T> l = ConvLayer<T>::From(p, name);
      return PRelu(detail::Apply(l, in, g), l.slopes);
    });
    detail::Record(trace, name, in.shape(), out.shape());
    return out;
  };
  const Tensor<T> e1 = encode("conv1d_2", srnn.h, SameGeometry(k));
  const Tensor<T> e2 = encode("conv1d_3", e1, DownGeometry(k));
  const Tensor<T> e3 = encode("conv1d_4", e2, DownGeometry(k));
  const Tensor<T> e4 = encode("conv1d_5", e3, DownGeometry(k));

  Tensor<T> g = e4;
  const auto glu_names = detail::GluNames(cfg);
  for (std::size_t i = 0; i < glu_names.size(); ++i) {
    Tensor<T> next = detail::AtLayer(glu_names[i], [&] {
      return GluForward(GluBlock<T>::From(p, glu_names[i]), g, cfg.glu_dilations[i]);
    });
    detail::Record(trace, glu_names[i], g.shape(), next.shape());
    g = std::move(next);
  }

  auto skip = [&](const std::string &name, const Tensor<T> &dec, const Tensor<T> &enc) {
    Tensor<T> out = detail::AtLayer(name, [&] { return ConcatChannels(dec, enc); });
    detail::Record(trace, name, dec.shape(), out.shape());
    return out;
  };
  auto decode = [&](const std::string &name, const Tensor<T> &in, bool last) {
    Tensor<T> out = detail::AtLayer(name, [&] {
      const ConvLayer<T> l = ConvLayer<T>::From(p, name);
      Tensor<T> y = ConvTranspose1d(in, l.weight, l.bias, UpGeometry(k));
      return last ? Tanh(y) : PRelu(y, l.slopes);
    });
    detail::Record(trace, name, in.shape(), out.shape());
    return out;
  };
  const Tensor<T> d1 = decode("deconv1d_1", skip("skip_1", g, e4), false);
  const Tensor<T> d2 = decode("deconv1d_2", skip("skip_2", d1, e3), false);
  const Tensor<T> d3 = decode("deconv1d_3", skip("skip_3", d2, e2), false);
  Tensor<T> s = decode("deconv1d_4", skip("skip_4", d3, e1), true);
  return {s, {srnn.h, s}};
}

template <typename T>
struct MultistageOutput {
  Tensor<T> final_estimate;
  std::vector<Tensor<T>> estimates;  // one per stage, last == final_estimate
  std::vector<Tensor<T>> hidden;     // h after each stage
};

/// Unrolls the shared-weight network for `stages` passes, feeding each
/// estimate back alongside the noisy input. The first pass sees s = x, h = 0.
template <typename T>
MultistageOutput<T> MultistageForward(const FTNetParams<T> &p, const ModelConfig &cfg,
                                      const Tensor<T> &x, std::size_t stages) {
  if (stages < 1) throw UsageError("multistage_forward needs at least one stage");
  MultistageOutput<T> out;
  StageState<T> state = InitialState(cfg, x);
  for (std::size_t l = 0; l < stages; ++l) {
    StageOutput<T> st = StageForward(p, cfg, x, state);
    out.estimates.push_back(st.estimate);
    out.hidden.push_back(st.state.h);
    state = std::move(st.state);
  }
  out.final_estimate = out.estimates.back();
  return out;
}

struct ParameterCount {
  std::vector<std::pair<std::string, std::size_t>> per_layer;  // layer order
  std::size_t total = 0;

  std::size_t at(const std::string &layer) const {
    for (const auto &[n, c] : per_layer)
      if (n == layer) return c;
    throw UsageError("no layer named " + layer);
  }
};

/// Element counts grouped by layer (the name up to the first '.').
template <typename T>
ParameterCount CountParameters(const FTNetParams<T> &p) {
  ParameterCount pc;
  for (const auto &param : p.all()) {
    const std::string layer = param.name.substr(0, param.name.find('.'));
    if (pc.per_layer.empty() || pc.per_layer.back().first != layer) {
      pc.per_layer.emplace_back(layer, 0);
    }
    pc.per_layer.back().second += param.tensor.size();
    pc.total += param.tensor.size();
  }
  return pc;
}

/// 1 + sum (k_i - 1) d_i over a chain of stride-1 convolutions.
inline std::size_t ReceptiveField(std::span<const std::pair<std::size_t, std::size_t>> kernel_dilation) {
  std::size_t rf = 1;
  for (const auto &[k, d] : kernel_dilation) rf += (k - 1) * d;
  return rf;
}

inline std::size_t GluStackReceptiveField(const ModelConfig &cfg) {
  std::vector<std::pair<std::size_t, std::size_t>> chain;
  for (std::size_t d : cfg.glu_dilations) chain.emplace_back(cfg.kernel, d);
  return ReceptiveField(chain);
}

/// Weight-bearing layers on the feedforward path of a single stage: conv1d_1,
/// the recurrent cell, four encoder convs, three convs per GLU (the gate conv
/// runs in parallel with the main conv) and four deconvs. PReLU and skip
/// concatenations are not counted.
inline std::size_t DepthPerStage(const ModelConfig &cfg) {
  return 1 + 1 + 4 + 3 * cfg.glu_dilations.size() + 4;
}

struct StructureReport {
  std::size_t depth_per_stage = 0;
  std::size_t glu_receptive_field = 0;
  ShapeTrace shape_trace;
  ParameterCount parameters;

  std::size_t unrolled_depth(std::size_t stages) const { return depth_per_stage * stages; }
};

/// Builds the model once and records the shapes of a real forward pass.
inline StructureReport AnalyzeStructure(const ModelConfig &cfg) {
  cfg.Validate();
  StructureReport r;
  r.depth_per_stage = DepthPerStage(cfg);
  r.glu_receptive_field = GluStackReceptiveField(cfg);
  const FTNetParams<float> p = BuildModel<float>(cfg);
  r.parameters = CountParameters(p);
  NoGradGuard no_grad;
  const Tensor<float> x = Tensor<float>::Zeros({1, 1, cfg.frame_len});
  StageForward(p, cfg, x, InitialState(cfg, x), &r.shape_trace);
  return r;
}

}  // namespace ftnet

#endif  // FTNET_MODEL_HPP_
