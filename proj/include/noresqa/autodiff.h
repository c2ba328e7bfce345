// include/noresqa/autodiff.h

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

#ifndef NORESQA_AUTODIFF_H_
#define NORESQA_AUTODIFF_H_

#include <functional>
#include <memory>
#include <vector>

#include "noresqa/common.h"
#include "noresqa/rng.h"

// Reverse-mode autodiff over dense double tensors.  Graphs are built
// dynamically; each node stores its value, its parents and a backward
// closure.  Nodes whose inputs do not require gradients drop both, so the
// evaluation path carries no tape overhead.
//
// Tensor layouts follow the kernels: feature maps [C][T][F], temporal maps
// [C][T], vectors [C], scalars [1].

namespace noresqa {
namespace nn {

class Node;
using NodeP = std::shared_ptr<Node>;

class Node {
 public:
  std::vector<int> dims;
  std::vector<double> own;  // owned value storage
  std::shared_ptr<const std::vector<double>> shared;  // or borrowed storage
  std::vector<double> grad;
  std::vector<NodeP> parents;
  std::function<void(Node &)> backward;
  bool needs_grad = false;

  size_t size() const {
    size_t s = 1;
    for (int d : dims) s *= (size_t)d;
    return s;
  }
  const double *val() const { return shared ? shared->data() : own.data(); }
  double *mutable_val() { return own.data(); }
  double *grad_data() {
    if (grad.empty()) grad.assign(size(), 0.0);
    return grad.data();
  }
};

class Var {
 public:
  Var() = default;
  explicit Var(NodeP n) : node(std::move(n)) {}

  bool defined() const { return node != nullptr; }
  const std::vector<int> &dims() const { return node->dims; }
  size_t size() const { return node->size(); }
  const double *val() const { return node->val(); }
  double scalar() const { return node->val()[0]; }
  const std::vector<double> &grad() const { return node->grad; }

  NodeP node;
};

// Leaves.
Var Constant(std::vector<int> dims, std::vector<double> data);
Var Leaf(std::vector<int> dims, std::vector<double> data, bool needs_grad);
Var SharedLeaf(std::vector<int> dims,
               std::shared_ptr<const std::vector<double>> data,
               bool needs_grad);

// Allocates an op node wired to parents; the caller fills the value and the
// backward closure reads node.grad and accumulates into the parents.
Var MakeOpNode(std::vector<int> dims, const std::vector<Var> &parents,
               std::function<void(Node &)> backward);

// Runs reverse-mode accumulation from a scalar root.
void Backward(const Var &root);

// Ops.
Var Conv2d(const Var &x, const Var &w, const Var &b, int k);
Var MaxPoolFreq(const Var &x, int pool);
Var Conv1d(const Var &x, const Var &w, const Var &b, int k, int dilation);
Var Relu(const Var &x);
Var Dropout(const Var &x, double rate, Rng *rng, bool active);
Var PadFreq(const Var &x, int f_target);
Var FlattenChannelFreq(const Var &x);        // [C,T,F] -> [C*F, T]
Var ConcatChannels(const Var &a, const Var &b);
Var Add(const Var &a, const Var &b);
Var WeightNorm(const Var &v, const Var &g);  // per-row rescale to |g|
Var SoftmaxChannels(const Var &x);
Var MeanOverTime(const Var &x);
Var CrossEntropy(const Var &p, std::vector<double> target);  // probs in
Var DotConst(const Var &p, std::vector<double> mu);
Var SumScalars(const std::vector<Var> &vs);

}  // namespace nn
}  // namespace noresqa

#endif  // NORESQA_AUTODIFF_H_
