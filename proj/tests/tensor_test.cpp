// tests/tensor_test.cpp

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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "ftnet/ops.hpp"
#include "ftnet/optim.hpp"
#include "test_util.hpp"

namespace ftnet {
namespace {

using testing::GradCheck;
using testing::Project;
using testing::RandomTensor;
using TD = Tensor<double>;

// Direct-summation references, written straight from the index definitions.
std::vector<double> NaiveConv(const TD &x, const TD &w, const TD &b, const ConvGeometry &g,
                              std::size_t &lout) {
  const Shape s = x.shape(), ws = w.shape();
  // Output positions are the t for which the window start fits inside the
  // padded signal; simulated by walking the window.
  lout = 0;
  while (lout * g.stride + g.dilation * (ws.length - 1) < s.length + g.pad_left + g.pad_right)
    ++lout;
  std::vector<double> y(s.batch * ws.batch * lout, 0.0);
  for (std::size_t n = 0; n < s.batch; ++n)
    for (std::size_t o = 0; o < ws.batch; ++o)
      for (std::size_t t = 0; t < lout; ++t) {
        double acc = b.defined() ? b.value()[o] : 0.0;
        for (std::size_t c = 0; c < ws.channels; ++c)
          for (std::size_t j = 0; j < ws.length; ++j) {
            const long long pos = static_cast<long long>(t * g.stride + j * g.dilation) -
                                  static_cast<long long>(g.pad_left);
            if (pos < 0 || pos >= static_cast<long long>(s.length)) continue;
            acc += w.at(o, c, j) * x.at(n, c, pos);
          }
        y[(n * ws.batch + o) * lout + t] = acc;
      }
  return y;
}

std::vector<double> NaiveDeconv(const TD &x, const TD &w, const DeconvGeometry &g,
                                std::size_t lout) {
  const Shape s = x.shape(), ws = w.shape();
  std::vector<double> y(s.batch * ws.channels * lout, 0.0);
  for (std::size_t n = 0; n < s.batch; ++n)
    for (std::size_t c = 0; c < ws.batch; ++c)
      for (std::size_t o = 0; o < ws.channels; ++o)
        for (std::size_t i = 0; i < s.length; ++i)
          for (std::size_t j = 0; j < ws.length; ++j) {
            const long long pos = static_cast<long long>(i * g.stride + j) -
                                  static_cast<long long>(g.pad);
            if (pos < 0 || pos >= static_cast<long long>(lout)) continue;
            y[(n * ws.channels + o) * lout + pos] += w.at(c, o, j) * x.at(n, c, i);
          }
  return y;
}

TEST(Conv1d, HandEvaluatedCrossCorrelation) {
  const TD x = TD::Row({1, 2, 3, 4});
  const TD w = TD::FromValues({1, 1, 2}, {1, 1});
  const TD y = Conv1d(x, w, TD{}, ConvGeometry{});
  ASSERT_EQ(y.shape(), (Shape{1, 1, 3}));
  EXPECT_EQ(std::vector<double>(y.value().begin(), y.value().end()),
            (std::vector<double>{3, 5, 7}));
}

TEST(Conv1d, IdentityKernel) {
  Rng rng(1);
  const TD x = RandomTensor(rng, {2, 3, 17}, false);
  TD w = TD::Zeros({3, 3, 1});
  for (std::size_t c = 0; c < 3; ++c) w.at(c, c, 0) = 1.0;
  const TD y = Conv1d(x, w, TD{}, ConvGeometry{});
  ASSERT_EQ(y.shape(), x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(y.value()[i], x.value()[i]);
}

TEST(Conv1d, StridedEncoderShape) {
  const TD x = TD::Zeros({1, 2, 2048});
  const TD w = TD::Zeros({16, 2, 11});
  const TD b = TD::Zeros({1, 16, 1});
  EXPECT_EQ(Conv1d(x, w, b, ConvGeometry{2, 1, 5, 4}).shape(), (Shape{1, 16, 1024}));
}

TEST(Conv1d, Errors) {
  const TD x = TD::Zeros({1, 2, 8});
  EXPECT_THROW(Conv1d(x, TD::Zeros({1, 3, 3}), TD{}, {}), ConfigError);
  EXPECT_THROW(Conv1d(x, TD::Zeros({1, 2, 9}), TD{}, {}), ShapeError);
  EXPECT_THROW(Conv1d(x, TD::Zeros({1, 2, 3}), TD{}, {1, 4, 0, 0}), ShapeError);
  EXPECT_NO_THROW(Conv1d(x, TD::Zeros({1, 2, 3}), TD{}, {1, 4, 4, 0}));
  EXPECT_THROW(Conv1d(x, TD::Zeros({1, 2, 3}), TD{}, {0, 1, 0, 0}), ConfigError);
}

TEST(Conv1d, MatchesDirectSummationOverGeometryGrid) {
  Rng rng(7);
  for (std::size_t len : {1, 2, 5, 16, 33})
    for (std::size_t k : {1, 2, 3, 5})
      for (std::size_t s : {1, 2, 3})
        for (std::size_t d : {1, 2, 3})
          for (std::size_t pl : {0, 2})
            for (std::size_t pr : {0, 1, 4}) {
              const ConvGeometry g{s, d, pl, pr};
              if (d * (k - 1) + 1 > len + pl + pr) {
                EXPECT_THROW(ConvOutputLength(len, k, g), ShapeError);
                continue;
              }
              const TD x = RandomTensor(rng, {2, 3, len}, false);
              const TD w = RandomTensor(rng, {4, 3, k}, false);
              const TD b = RandomTensor(rng, {1, 4, 1}, false);
              std::size_t lout = 0;
              const auto ref = NaiveConv(x, w, b, g, lout);
              const TD y = Conv1d(x, w, b, g);
              ASSERT_EQ(y.shape(), (Shape{2, 4, lout}))
                  << "len=" << len << " k=" << k << " s=" << s << " d=" << d;
              EXPECT_EQ(lout, (len + pl + pr - d * (k - 1) - 1) / s + 1);
              for (std::size_t i = 0; i < ref.size(); ++i)
                ASSERT_NEAR(y.value()[i], ref[i], 1e-12);
            }
}

TEST(ConvTranspose1d, HandEvaluated) {
  const TD x = TD::Row({1, 2});
  const TD w = TD::FromValues({1, 1, 2}, {1, 1});
  const TD y = ConvTranspose1d(x, w, TD{}, DeconvGeometry{2, 0, 0});
  EXPECT_EQ(std::vector<double>(y.value().begin(), y.value().end()),
            (std::vector<double>{1, 1, 2, 2}));
}

TEST(ConvTranspose1d, IdentityAndDecoderShape) {
  const TD x = TD::Row({0.5, -1, 2});
  const TD y = ConvTranspose1d(x, TD::FromValues({1, 1, 1}, {1}), TD{}, DeconvGeometry{1, 0, 0});
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(y.value()[i], x.value()[i]);

  const TD big = TD::Zeros({1, 256, 128});
  const TD w = TD::Zeros({256, 64, 11});
  EXPECT_EQ(ConvTranspose1d(big, w, TD::Zeros({1, 64, 1}), DeconvGeometry{2, 5, 1}).shape(),
            (Shape{1, 64, 256}));
}

TEST(ConvTranspose1d, Errors) {
  const TD x = TD::Zeros({1, 2, 8});
  EXPECT_THROW(ConvTranspose1d(x, TD::Zeros({3, 1, 3}), TD{}, {2, 0, 0}), ConfigError);
  EXPECT_THROW(ConvTranspose1d(x, TD::Zeros({2, 1, 3}), TD{}, {2, 0, 2}), ConfigError);
}

TEST(ConvTranspose1d, MatchesDirectScatter) {
  Rng rng(3);
  for (std::size_t len : {1, 4, 9})
    for (std::size_t k : {1, 3, 4, 11})
      for (std::size_t s : {1, 2, 3})
        for (std::size_t p : {0, 1, 5})
          for (std::size_t op = 0; op < s; ++op) {
            const DeconvGeometry g{s, p, op};
            const long long n = static_cast<long long>((len - 1) * s + k + op) -
                                2 * static_cast<long long>(p);
            if (n <= 0) {
              EXPECT_THROW(DeconvOutputLength(len, k, g), ShapeError);
              continue;
            }
            const TD x = RandomTensor(rng, {2, 3, len}, false);
            const TD w = RandomTensor(rng, {3, 2, k}, false);
            const TD y = ConvTranspose1d(x, w, TD{}, g);
            ASSERT_EQ(y.shape().length, static_cast<std::size_t>(n));
            const auto ref = NaiveDeconv(x, w, g, static_cast<std::size_t>(n));
            for (std::size_t i = 0; i < ref.size(); ++i) ASSERT_NEAR(y.value()[i], ref[i], 1e-12);
          }
}

double Dot(const TD &a, const TD &b) {
  double acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a.value()[i] * b.value()[i];
  return acc;
}

TEST(ConvTranspose1d, IsAdjointOfConv) {
  Rng rng(11);
  struct Case { std::size_t len, k, s, p; };
  int checked = 0;
  for (const Case c : {Case{32, 11, 2, 5}, Case{17, 3, 1, 1}, Case{20, 4, 3, 2}, Case{8, 5, 2, 0}}) {
    const TD w = RandomTensor(rng, {3, 2, c.k}, false);  // conv: out 3, in 2
    const TD x = RandomTensor(rng, {2, 2, c.len}, false);
    // Pick the right pad for which an output pad < stride maps the
    // transposed conv back onto exactly c.len samples.
    for (std::size_t pr = 0; pr <= c.p + c.s; ++pr) {
      const ConvGeometry cg{c.s, 1, c.p, pr};
      const TD y = Conv1d(x, w, TD{}, cg);
      const long long base = static_cast<long long>((y.shape().length - 1) * c.s + c.k) -
                             2 * static_cast<long long>(c.p);
      const long long op = static_cast<long long>(c.len) - base;
      if (op < 0 || op >= static_cast<long long>(c.s)) continue;
      const TD r = RandomTensor(rng, y.shape(), false);
      const TD xt = ConvTranspose1d(r, w, TD{}, DeconvGeometry{c.s, c.p, static_cast<std::size_t>(op)});
      ASSERT_EQ(xt.shape(), x.shape());
      EXPECT_NEAR(Dot(y, r), Dot(x, xt), 1e-10);
      ++checked;
    }
  }
  EXPECT_GE(checked, 4);
}

TEST(Activation, ValuesAndRanges) {
  const TD zero = TD::Row({0.0});
  EXPECT_EQ(Sigmoid(zero).item(), 0.5);
  EXPECT_EQ(Tanh(zero).item(), 0.0);
  const TD slope = TD::FromValues({1, 1, 1}, {0.25});
  EXPECT_EQ(PRelu(TD::Row({-2.0}), slope).item(), -0.5);
  EXPECT_EQ(PRelu(TD::Row({3.0}), slope).item(), 3.0);
  EXPECT_EQ(Activation(TD::Row({-2.0}), ActivationKind::kPRelu, slope).item(), -0.5);
  EXPECT_THROW(Activation(zero, ActivationKind::kPRelu), ConfigError);
  EXPECT_THROW(PRelu(TD::Zeros({1, 2, 3}), slope), ConfigError);

  Rng rng(5);
  const TD x = RandomTensor(rng, {1, 4, 256}, false, -30, 30);
  const TD sx = Sigmoid(x);
  for (double v : sx.value()) {
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
  const TD tx = Tanh(RandomTensor(rng, {1, 4, 256}, false, -15, 15));
  for (double v : tx.value()) {
    EXPECT_GT(v, -1.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(Pointwise, IdentitiesAndErrors) {
  Rng rng(2);
  const TD x = RandomTensor(rng, {2, 3, 4}, false);
  const TD a = Add(x, TD::Zeros(x.shape()));
  const TD m = Mul(x, TD::Filled(x.shape(), 1.0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(a.value()[i], x.value()[i]);
    EXPECT_EQ(m.value()[i], x.value()[i]);
  }
  const TD p = Mul(TD::Row({1, -2}), TD::Row({3, 4}));
  EXPECT_EQ(p.value()[0], 3);
  EXPECT_EQ(p.value()[1], -8);
  EXPECT_THROW(Add(TD::Zeros({1, 1, 2}), TD::Zeros({1, 1, 3})), ShapeError);
}

TEST(ConcatChannels, ShapesAndNeutralElement) {
  EXPECT_EQ(ConcatChannels(TD::Zeros({1, 128, 128}), TD::Zeros({1, 128, 128})).shape(),
            (Shape{1, 256, 128}));
  EXPECT_EQ(ConcatChannels(TD::Zeros({1, 16, 1024}), TD::Zeros({1, 16, 1024})).shape(),
            (Shape{1, 32, 1024}));
  Rng rng(4);
  const TD x = RandomTensor(rng, {2, 3, 5}, false);
  const TD y = ConcatChannels(x, TD::Zeros({2, 0, 5}));
  ASSERT_EQ(y.shape(), x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(y.value()[i], x.value()[i]);
  EXPECT_THROW(ConcatChannels(TD::Zeros({1, 1, 4}), TD::Zeros({1, 1, 5})), ShapeError);
}

TEST(MaeLoss, Values) {
  Rng rng(6);
  const TD x = RandomTensor(rng, {1, 2, 9}, false);
  const TD y = RandomTensor(rng, {1, 2, 9}, false);
  EXPECT_EQ(MaeLoss(x, x).item(), 0.0);
  EXPECT_DOUBLE_EQ(MaeLoss(TD::Row({1, 2}), TD::Row({2, 4})).item(), 1.5);
  auto scaled = [](const TD &t, double k) {
    std::vector<double> v(t.value().begin(), t.value().end());
    for (double &e : v) e *= k;
    return TD::FromValues(t.shape(), v);
  };
  EXPECT_NEAR(MaeLoss(scaled(x, -3.0), scaled(y, -3.0)).item(), 3.0 * MaeLoss(x, y).item(), 1e-14);
  EXPECT_THROW(MaeLoss(TD::Row({1}), TD::Row({1, 2})), ShapeError);
}

TEST(Backward, MaeGradientIsSignOverN) {
  TD p = TD::Row({2, 3, 4, 5}, true);
  const TD t = TD::Row({0, 1, 2, 3});
  Backward(MaeLoss(p, t));
  for (double g : p.grad()) EXPECT_DOUBLE_EQ(g, 0.25);
  TD q = TD::Row({1, 1}, true);
  Backward(MaeLoss(q, TD::Row({1, 1})));
  for (double g : q.grad()) EXPECT_EQ(g, 0.0);
}

TEST(Backward, BilinearAndAccumulation) {
  Rng rng(8);
  TD a = RandomTensor(rng, {1, 2, 5});
  TD b = RandomTensor(rng, {1, 2, 5});
  Backward(Sum(Mul(a, b)));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_DOUBLE_EQ(a.grad()[i], b.value()[i]);

  // Using a twice equals the sum of the single-use gradients.
  TD c = RandomTensor(rng, {1, 2, 5});
  a.zero_grad();
  Backward(Project(Sigmoid(a), 1));
  std::vector<double> g1(a.grad().begin(), a.grad().end());
  a.zero_grad();
  Backward(Project(Mul(a, c), 2));
  std::vector<double> g2(a.grad().begin(), a.grad().end());
  a.zero_grad();
  Backward(Add(Project(Sigmoid(a), 1), Project(Mul(a, c), 2)));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.grad()[i], g1[i] + g2[i], 1e-14);

  // x * x hits both branches of the product rule with one buffer.
  TD x = TD::Row({3.0}, true);
  Backward(Sum(Mul(x, x)));
  EXPECT_DOUBLE_EQ(x.grad()[0], 6.0);
}

TEST(Backward, Errors) {
  TD a = TD::Row({1, 2}, true);
  EXPECT_THROW(Backward(Sigmoid(a)), UsageError);
  EXPECT_THROW(Backward(Sum(TD::Row({1, 2}))), UsageError);
  TD frozen = TD::Row({1, 2});
  Backward(Sum(Mul(a, frozen)));
  EXPECT_FALSE(frozen.has_grad());
}

TEST(Backward, NoGradGuardRecordsNothing) {
  TD a = TD::Row({1, 2}, true);
  NoGradGuard guard;
  const TD y = Sum(Sigmoid(a));
  EXPECT_FALSE(y.requires_grad());
}

// Every op against central differences on random inputs no larger than
// (2, 4, 32), double precision.
TEST(GradientCheck, EveryOp) {
  Rng rng(2024);
  const double tol = 1e-4;
  {
    TD x = RandomTensor(rng, {2, 3, 32});
    TD w = RandomTensor(rng, {4, 3, 5});
    TD b = RandomTensor(rng, {1, 4, 1});
    for (const ConvGeometry g : {ConvGeometry{1, 1, 2, 2}, ConvGeometry{2, 1, 2, 1},
                                 ConvGeometry{1, 3, 6, 6}, ConvGeometry{3, 2, 0, 4}}) {
      EXPECT_LT(GradCheck([&] { return Project(Conv1d(x, w, b, g)); }, {x, w, b}).max_rel_error,
                tol);
    }
    TD w1 = RandomTensor(rng, {4, 3, 1});
    EXPECT_LT(GradCheck([&] { return Project(Conv1d(x, w1, b, {})); }, {x, w1, b}).max_rel_error,
              tol);
  }
  {
    TD x = RandomTensor(rng, {2, 4, 16});
    TD w = RandomTensor(rng, {4, 3, 5});
    TD b = RandomTensor(rng, {1, 3, 1});
    for (const DeconvGeometry g : {DeconvGeometry{2, 2, 1}, DeconvGeometry{1, 0, 0},
                                   DeconvGeometry{3, 1, 2}}) {
      EXPECT_LT(GradCheck([&] { return Project(ConvTranspose1d(x, w, b, g)); }, {x, w, b})
                    .max_rel_error,
                tol);
    }
  }
  {
    TD x = RandomTensor(rng, {2, 4, 32}, true, -3, 3);
    EXPECT_LT(GradCheck([&] { return Project(Sigmoid(x)); }, {x}).max_rel_error, tol);
    EXPECT_LT(GradCheck([&] { return Project(Tanh(x)); }, {x}).max_rel_error, tol);
    TD a = RandomTensor(rng, {1, 4, 1}, true, 0.05, 0.5);
    EXPECT_LT(GradCheck([&] { return Project(PRelu(x, a)); }, {x, a}).max_rel_error, tol);
  }
  {
    TD a = RandomTensor(rng, {2, 4, 32});
    TD b = RandomTensor(rng, {2, 4, 32});
    for (auto mode : {PointwiseMode::kAdd, PointwiseMode::kSub, PointwiseMode::kMul}) {
      EXPECT_LT(GradCheck([&] { return Project(Pointwise(a, b, mode)); }, {a, b}).max_rel_error,
                tol);
    }
    TD c = RandomTensor(rng, {2, 1, 32});
    EXPECT_LT(GradCheck([&] { return Project(ConcatChannels(a, c)); }, {a, c}).max_rel_error,
              tol);
    EXPECT_LT(GradCheck([&] { return MaeLoss(a, b); }, {a, b}).max_rel_error, tol);
    EXPECT_LT(GradCheck([&] { return Sum(a); }, {a}).max_rel_error, tol);
  }
}

TEST(Adam, FirstStepMovesByLearningRate) {
  Parameter<double> p("w", TD::Row({0.5, -0.5, 2.0}, true));
  for (double g0 : {3.0, -0.01}) {
    Parameter<double> q("w", TD::Row({0.5, -0.5, 2.0}, true));
    for (double &g : q.tensor.mutable_grad()) g = g0;
    std::vector<Parameter<double>> ps{q};
    AdamStep<double>(ps, {0.01, 0.9, 0.999, 1e-8});
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_NEAR(ps[0].tensor.value()[i] - p.tensor.value()[i], -0.01 * (g0 > 0 ? 1 : -1), 1e-8);
    }
    EXPECT_EQ(ps[0].step_count, 1u);
    EXPECT_FALSE(ps[0].tensor.has_grad());
  }
}

TEST(Adam, ZeroGradientLeavesParameter) {
  std::vector<Parameter<double>> ps{Parameter<double>("w", TD::Row({1.0, 2.0}, true))};
  for (double &g : ps[0].tensor.mutable_grad()) g = 0.0;
  AdamStep<double>(ps, {});
  EXPECT_EQ(ps[0].tensor.value()[0], 1.0);
  EXPECT_EQ(ps[0].tensor.value()[1], 2.0);
}

TEST(Adam, TwoStepTrace) {
  std::vector<Parameter<double>> ps{Parameter<double>("w", TD::Row({0.0}, true))};
  const AdamOptions opt{0.1, 0.9, 0.999, 1e-8};
  // Hand recurrence: m1 = 0.1, v1 = 0.001, m2 = 0.19, v2 = 0.001999; both
  // bias-corrected ratios are exactly 1, so each step is 0.1 / (1 + 1e-8).
  ps[0].tensor.mutable_grad()[0] = 1.0;
  AdamStep<double>(ps, opt);
  EXPECT_NEAR(ps[0].tensor.value()[0], -0.09999999900000002, 1e-15);
  EXPECT_NEAR(ps[0].m[0], 0.1, 1e-15);
  EXPECT_NEAR(ps[0].v[0], 0.001, 1e-15);
  ps[0].tensor.mutable_grad()[0] = 1.0;
  AdamStep<double>(ps, opt);
  EXPECT_NEAR(ps[0].tensor.value()[0], -0.19999999799999935, 1e-14);
  EXPECT_NEAR(ps[0].m[0], 0.19, 1e-15);
  EXPECT_NEAR(ps[0].v[0], 0.001999, 1e-15);
  EXPECT_EQ(ps[0].step_count, 2u);
}

TEST(Adam, Errors) {
  std::vector<Parameter<double>> ps{Parameter<double>("w", TD::Row({0.0}, true))};
  EXPECT_THROW(AdamStep<double>(ps, {}), UsageError);
  ps[0].tensor.mutable_grad()[0] = 1.0;
  EXPECT_THROW(AdamStep<double>(ps, {0.1, 1.0, 0.999, 1e-8}), ConfigError);
}

TEST(Adam, ClipRescalesToMaxNorm) {
  std::vector<Parameter<double>> ps{Parameter<double>("w", TD::Row({0.0, 0.0}, true))};
  ps[0].tensor.mutable_grad()[0] = 3.0;
  ps[0].tensor.mutable_grad()[1] = 4.0;
  ClipGradients<double>(ps, 1.0);
  EXPECT_NEAR(ps[0].tensor.grad()[0], 0.6, 1e-15);
  EXPECT_NEAR(ps[0].tensor.grad()[1], 0.8, 1e-15);
}

}  // namespace
}  // namespace ftnet
