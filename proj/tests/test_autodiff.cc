// tests/test_autodiff.cc

// Copyright 2026  The noresqa authors

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

// Finite-difference checks for every autodiff op.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <vector>

#include "noresqa/autodiff.h"
#include "noresqa/rng.h"

using namespace noresqa;
using nn::Var;

namespace {

std::vector<double> RandomVec(size_t n, Rng *rng, double scale = 1.0) {
  std::vector<double> v(n);
  for (auto &x : v) x = scale * rng->Gaussian();
  return v;
}

// Deterministic scalar probe: loss = sum_i r_i * y_i.
Var Probe(const Var &y, const std::vector<double> &r) {
  REQUIRE(y.size() == r.size());
  auto weights = std::make_shared<std::vector<double>>(r);
  nn::NodeP yn = y.node;
  Var out = nn::MakeOpNode({1}, {y}, [=](nn::Node &node) {
    if (!yn->needs_grad) return;
    double *g = yn->grad_data();
    for (size_t i = 0; i < weights->size(); ++i)
      g[i] += node.grad[0] * (*weights)[i];
  });
  double acc = 0.0;
  for (size_t i = 0; i < r.size(); ++i) acc += r[i] * y.val()[i];
  out.node->mutable_val()[0] = acc;
  return out;
}

// Checks d loss / d inputs[which] against central differences.
void CheckGradients(
    const std::function<Var(const std::vector<Var> &)> &build,
    std::vector<std::vector<double>> inputs,
    std::vector<std::vector<int>> dims, double tol = 1e-6, double h = 1e-6) {
  // Analytic gradients.
  std::vector<Var> leaves;
  for (size_t i = 0; i < inputs.size(); ++i)
    leaves.push_back(nn::Leaf(dims[i], inputs[i], true));
  Var loss = build(leaves);
  nn::Backward(loss);

  auto eval = [&](const std::vector<std::vector<double>> &vals) {
    std::vector<Var> ls;
    for (size_t i = 0; i < vals.size(); ++i)
      ls.push_back(nn::Leaf(dims[i], vals[i], false));
    return build(ls).scalar();
  };

  for (size_t which = 0; which < inputs.size(); ++which) {
    for (size_t j = 0; j < inputs[which].size(); ++j) {
      auto plus = inputs, minus = inputs;
      plus[which][j] += h;
      minus[which][j] -= h;
      const double fd = (eval(plus) - eval(minus)) / (2.0 * h);
      const double ad = leaves[which].node->grad.empty()
                            ? 0.0
                            : leaves[which].node->grad[j];
      CHECK(ad == doctest::Approx(fd).epsilon(tol).scale(1.0));
    }
  }
}

}  // namespace

TEST_CASE("conv2d gradients match finite differences") {
  Rng rng(11);
  const int cin = 2, cout = 3, t = 4, f = 5, k = 3;
  auto x = RandomVec((size_t)cin * t * f, &rng);
  auto w = RandomVec((size_t)cout * cin * k * k, &rng);
  auto b = RandomVec(cout, &rng);
  auto r = RandomVec((size_t)cout * t * f, &rng);
  CheckGradients(
      [&](const std::vector<Var> &in) {
        return Probe(nn::Conv2d(in[0], in[1], in[2], k), r);
      },
      {x, w, b}, {{cin, t, f}, {cout, cin, k, k}, {cout}});
}

TEST_CASE("dilated conv1d gradients match finite differences") {
  Rng rng(12);
  const int cin = 3, cout = 2, t = 9, k = 3, dil = 2;
  auto x = RandomVec((size_t)cin * t, &rng);
  auto w = RandomVec((size_t)cout * cin * k, &rng);
  auto b = RandomVec(cout, &rng);
  auto r = RandomVec((size_t)cout * t, &rng);
  CheckGradients(
      [&](const std::vector<Var> &in) {
        return Probe(nn::Conv1d(in[0], in[1], in[2], k, dil), r);
      },
      {x, w, b}, {{cin, t}, {cout, cin, k}, {cout}});
}

TEST_CASE("pool, pad, flatten, concat and add gradients") {
  Rng rng(13);
  const int c = 2, t = 3, f = 8;
  auto x = RandomVec((size_t)c * t * f, &rng);
  auto r1 = RandomVec((size_t)c * t * (f / 4), &rng);
  CheckGradients(
      [&](const std::vector<Var> &in) {
        return Probe(nn::MaxPoolFreq(in[0], 4), r1);
      },
      {x}, {{c, t, f}});

  auto r2 = RandomVec((size_t)c * t * (f + 4), &rng);
  CheckGradients(
      [&](const std::vector<Var> &in) {
        return Probe(nn::PadFreq(in[0], f + 4), r2);
      },
      {x}, {{c, t, f}});

  auto r3 = RandomVec((size_t)c * f * t, &rng);
  CheckGradients(
      [&](const std::vector<Var> &in) {
        return Probe(nn::FlattenChannelFreq(in[0]), r3);
      },
      {x}, {{c, t, f}});

  auto a = RandomVec(6, &rng), bb = RandomVec(9, &rng);
  auto r4 = RandomVec(15, &rng);
  CheckGradients(
      [&](const std::vector<Var> &in) {
        return Probe(nn::ConcatChannels(in[0], in[1]), r4);
      },
      {a, bb}, {{2, 3}, {3, 3}});

  auto c1 = RandomVec(6, &rng), c2 = RandomVec(6, &rng);
  auto r5 = RandomVec(6, &rng);
  CheckGradients(
      [&](const std::vector<Var> &in) {
        return Probe(nn::Add(in[0], in[1]), r5);
      },
      {c1, c2}, {{2, 3}, {2, 3}});
}

TEST_CASE("relu gradient away from the kink") {
  Rng rng(14);
  std::vector<double> x = RandomVec(12, &rng);
  for (auto &v : x)
    if (std::fabs(v) < 0.05) v = 0.2;  // keep clear of the kink
  auto r = RandomVec(12, &rng);
  CheckGradients(
      [&](const std::vector<Var> &in) { return Probe(nn::Relu(in[0]), r); },
      {x}, {{3, 4}});
}

TEST_CASE("weight norm gradients match finite differences") {
  Rng rng(15);
  const int rows = 3, cols = 4;
  auto v = RandomVec((size_t)rows * cols, &rng);
  auto g = RandomVec(rows, &rng);
  auto r = RandomVec((size_t)rows * cols, &rng);
  CheckGradients(
      [&](const std::vector<Var> &in) {
        return Probe(nn::WeightNorm(in[0], in[1]), r);
      },
      {v, g}, {{rows, cols}, {rows}}, 1e-5);
}

TEST_CASE("softmax, mean, cross entropy and dot gradients") {
  Rng rng(16);
  const int c = 5, t = 3;
  auto x = RandomVec((size_t)c * t, &rng);
  auto r = RandomVec((size_t)c * t, &rng);
  CheckGradients(
      [&](const std::vector<Var> &in) {
        return Probe(nn::SoftmaxChannels(in[0]), r);
      },
      {x}, {{c, t}}, 1e-5);

  auto r2 = RandomVec(c, &rng);
  CheckGradients(
      [&](const std::vector<Var> &in) {
        return Probe(nn::MeanOverTime(in[0]), r2);
      },
      {x}, {{c, t}});

  // Cross entropy takes probabilities; route through softmax to stay on the
  // simplex.
  std::vector<double> target = {0.0, 0.2, 0.6, 0.2, 0.0};
  auto x2 = RandomVec(c, &rng);
  CheckGradients(
      [&](const std::vector<Var> &in) {
        Var p = nn::SoftmaxChannels(in[0]);
        return nn::CrossEntropy(nn::MeanOverTime(p), target);
      },
      {x2}, {{c, 1}}, 1e-5);

  std::vector<double> mu = {0.5, 1.5, 2.5, 3.5, 4.5};
  CheckGradients(
      [&](const std::vector<Var> &in) {
        Var p = nn::SoftmaxChannels(in[0]);
        return nn::DotConst(nn::MeanOverTime(p), mu);
      },
      {x2}, {{c, 1}}, 1e-5);
}

TEST_CASE("dropout uses one fixed mask per realization") {
  Rng rng(17);
  auto x = RandomVec(40, &rng);
  auto r = RandomVec(40, &rng);
  // Same dropout seed on both the analytic and FD paths.
  CheckGradients(
      [&](const std::vector<Var> &in) {
        Rng drng(99);
        return Probe(nn::Dropout(in[0], 0.4, &drng, true), r);
      },
      {x}, {{4, 10}});

  // Inactive dropout is the identity.
  Var leaf = nn::Leaf({4, 10}, x, false);
  Var same = nn::Dropout(leaf, 0.4, nullptr, false);
  CHECK(same.node == leaf.node);
}

TEST_CASE("sum of scalars fans gradients out") {
  Rng rng(18);
  auto a = RandomVec(1, &rng), b = RandomVec(1, &rng);
  CheckGradients(
      [&](const std::vector<Var> &in) {
        return nn::SumScalars({in[0], in[1]});
      },
      {a, b}, {{1}, {1}});
}

TEST_CASE("eval graphs keep no tape") {
  Rng rng(19);
  auto x = RandomVec(8, &rng);
  Var leaf = nn::Leaf({2, 4}, x, false);
  Var y = nn::Relu(leaf);
  CHECK_FALSE(y.node->needs_grad);
  CHECK(y.node->parents.empty());
}
