// src/autodiff.cc

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

#include "noresqa/autodiff.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "noresqa/kernels.h"

namespace noresqa {
namespace nn {

namespace {

bool AnyNeedsGrad(const std::vector<Var> &vars) {
  for (const auto &v : vars)
    if (v.node->needs_grad) return true;
  return false;
}

void CheckDims(bool ok, const char *what) {
  if (!ok) throw Error(ErrorCode::kShapeMismatch, what);
}

}  // namespace

Var Constant(std::vector<int> dims, std::vector<double> data) {
  return Leaf(std::move(dims), std::move(data), false);
}

Var Leaf(std::vector<int> dims, std::vector<double> data, bool needs_grad) {
  auto n = std::make_shared<Node>();
  n->dims = std::move(dims);
  n->own = std::move(data);
  CheckDims(n->own.size() == n->size(), "leaf data size mismatch");
  n->needs_grad = needs_grad;
  return Var(n);
}

Var SharedLeaf(std::vector<int> dims,
               std::shared_ptr<const std::vector<double>> data,
               bool needs_grad) {
  auto n = std::make_shared<Node>();
  n->dims = std::move(dims);
  n->shared = std::move(data);
  CheckDims(n->shared->size() == n->size(), "leaf data size mismatch");
  n->needs_grad = needs_grad;
  return Var(n);
}

Var MakeOpNode(std::vector<int> dims, const std::vector<Var> &parents,
               std::function<void(Node &)> backward) {
  auto n = std::make_shared<Node>();
  n->dims = std::move(dims);
  n->own.assign(n->size(), 0.0);
  n->needs_grad = AnyNeedsGrad(parents);
  if (n->needs_grad) {
    for (const auto &p : parents) n->parents.push_back(p.node);
    n->backward = std::move(backward);
  }
  return Var(n);
}

void Backward(const Var &root) {
  CheckDims(root.size() == 1, "backward root must be scalar");
  if (!root.node->needs_grad) return;
  // Iterative post-order DFS, then replay in reverse.
  std::vector<Node *> order;
  std::unordered_set<Node *> seen;
  std::vector<std::pair<Node *, size_t>> stack;
  stack.push_back({root.node.get(), 0});
  seen.insert(root.node.get());
  while (!stack.empty()) {
    Node *node = stack.back().first;
    size_t idx = stack.back().second;
    if (idx < node->parents.size()) {
      stack.back().second = idx + 1;
      Node *p = node->parents[idx].get();
      if (p->needs_grad && seen.insert(p).second) stack.push_back({p, 0});
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  root.node->grad_data()[0] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node *n = *it;
    if (n->backward && !n->grad.empty()) n->backward(*n);
  }
}

Var Conv2d(const Var &x, const Var &w, const Var &b, int k) {
  CheckDims(x.dims().size() == 3 && w.dims().size() == 4, "conv2d dims");
  const int cin = x.dims()[0], t = x.dims()[1], f = x.dims()[2];
  const int cout = w.dims()[0];
  CheckDims(w.dims()[1] == cin && w.dims()[2] == k && w.dims()[3] == k,
            "conv2d weight dims");
  CheckDims(b.dims().size() == 1 && b.dims()[0] == cout, "conv2d bias dims");
  NodeP xn = x.node, wn = w.node, bn = b.node;
  Var y = MakeOpNode({cout, t, f}, {x, w, b}, [=](Node &n) {
    const double *gy = n.grad.data();
    if (xn->needs_grad)
      kernels::Conv2dSameGradInput(gy, wn->val(), cin, t, f, cout, k,
                                   xn->grad_data());
    if (wn->needs_grad)
      kernels::Conv2dSameGradParams(gy, xn->val(), cin, t, f, cout, k,
                                    wn->grad_data(),
                                    bn->needs_grad ? bn->grad_data() : nullptr);
  });
  kernels::Conv2dSame(x.val(), cin, t, f, w.val(), b.val(), cout, k,
                      y.node->mutable_val());
  return y;
}

Var MaxPoolFreq(const Var &x, int pool) {
  CheckDims(x.dims().size() == 3, "pool dims");
  const int c = x.dims()[0], t = x.dims()[1], f = x.dims()[2];
  CheckDims(f % pool == 0, "pool must divide frequency extent");
  const int fout = f / pool;
  auto argmax = std::make_shared<std::vector<int>>((size_t)c * t * fout);
  NodeP xn = x.node;
  Var y = MakeOpNode({c, t, fout}, {x}, [=](Node &n) {
    if (xn->needs_grad)
      kernels::MaxPoolFreqGradInput(n.grad.data(), argmax->data(), c, t, fout,
                                    xn->grad_data());
  });
  kernels::MaxPoolFreq(x.val(), c, t, f, pool, y.node->mutable_val(),
                       argmax->data());
  return y;
}

Var Conv1d(const Var &x, const Var &w, const Var &b, int k, int dilation) {
  CheckDims(x.dims().size() == 2 && w.dims().size() == 3, "conv1d dims");
  const int cin = x.dims()[0], t = x.dims()[1];
  const int cout = w.dims()[0];
  CheckDims(w.dims()[1] == cin && w.dims()[2] == k, "conv1d weight dims");
  CheckDims(b.dims().size() == 1 && b.dims()[0] == cout, "conv1d bias dims");
  NodeP xn = x.node, wn = w.node, bn = b.node;
  Var y = MakeOpNode({cout, t}, {x, w, b}, [=](Node &n) {
    const double *gy = n.grad.data();
    if (xn->needs_grad)
      kernels::Conv1dSameGradInput(gy, wn->val(), cin, t, cout, k, dilation,
                                   xn->grad_data());
    if (wn->needs_grad)
      kernels::Conv1dSameGradParams(gy, xn->val(), cin, t, cout, k, dilation,
                                    wn->grad_data(),
                                    bn->needs_grad ? bn->grad_data() : nullptr);
  });
  kernels::Conv1dSame(x.val(), cin, t, w.val(), b.val(), cout, k, dilation,
                      y.node->mutable_val());
  return y;
}

Var Relu(const Var &x) {
  NodeP xn = x.node;
  const size_t n = x.size();
  Var y = MakeOpNode(x.dims(), {x}, [=](Node &node) {
    if (xn->needs_grad)
      kernels::ReluGradInput(node.grad.data(), xn->val(), n, xn->grad_data());
  });
  kernels::Relu(x.val(), n, y.node->mutable_val());
  return y;
}

Var Dropout(const Var &x, double rate, Rng *rng, bool active) {
  if (!active || rate <= 0.0) return x;
  const size_t n = x.size();
  auto mask = std::make_shared<std::vector<double>>(n);
  const double keep = 1.0 - rate;
  for (size_t i = 0; i < n; ++i)
    (*mask)[i] = (rng->Uniform() < keep) ? 1.0 / keep : 0.0;
  NodeP xn = x.node;
  Var y = MakeOpNode(x.dims(), {x}, [=](Node &node) {
    if (!xn->needs_grad) return;
    double *gx = xn->grad_data();
    for (size_t i = 0; i < n; ++i) gx[i] += node.grad[i] * (*mask)[i];
  });
  double *out = y.node->mutable_val();
  const double *in = x.val();
  for (size_t i = 0; i < n; ++i) out[i] = in[i] * (*mask)[i];
  return y;
}

Var PadFreq(const Var &x, int f_target) {
  CheckDims(x.dims().size() == 3, "pad dims");
  const int c = x.dims()[0], t = x.dims()[1], f = x.dims()[2];
  CheckDims(f_target >= f, "pad target smaller than input");
  if (f_target == f) return x;
  NodeP xn = x.node;
  Var y = MakeOpNode({c, t, f_target}, {x}, [=](Node &node) {
    if (!xn->needs_grad) return;
    double *gx = xn->grad_data();
    for (int ci = 0; ci < c; ++ci)
      for (int ti = 0; ti < t; ++ti) {
        const double *g = node.grad.data() + ((size_t)ci * t + ti) * f_target;
        double *gr = gx + ((size_t)ci * t + ti) * f;
        for (int fi = 0; fi < f; ++fi) gr[fi] += g[fi];
      }
  });
  double *out = y.node->mutable_val();
  const double *in = x.val();
  for (int ci = 0; ci < c; ++ci)
    for (int ti = 0; ti < t; ++ti)
      std::copy(in + ((size_t)ci * t + ti) * f,
                in + ((size_t)ci * t + ti + 1) * f,
                out + ((size_t)ci * t + ti) * f_target);
  return y;
}

Var FlattenChannelFreq(const Var &x) {
  CheckDims(x.dims().size() == 3, "flatten dims");
  const int c = x.dims()[0], t = x.dims()[1], f = x.dims()[2];
  NodeP xn = x.node;
  Var y = MakeOpNode({c * f, t}, {x}, [=](Node &node) {
    if (!xn->needs_grad) return;
    double *gx = xn->grad_data();
    for (int ci = 0; ci < c; ++ci)
      for (int ti = 0; ti < t; ++ti)
        for (int fi = 0; fi < f; ++fi)
          gx[((size_t)ci * t + ti) * f + fi] +=
              node.grad[((size_t)(ci * f + fi)) * t + ti];
  });
  double *out = y.node->mutable_val();
  const double *in = x.val();
  for (int ci = 0; ci < c; ++ci)
    for (int ti = 0; ti < t; ++ti)
      for (int fi = 0; fi < f; ++fi)
        out[((size_t)(ci * f + fi)) * t + ti] =
            in[((size_t)ci * t + ti) * f + fi];
  return y;
}

Var ConcatChannels(const Var &a, const Var &b) {
  // Channel axis is dims[0]; all trailing axes must match, so concatenation
  // is contiguous stacking.
  CheckDims(a.dims().size() == b.dims().size() && a.dims().size() >= 2,
            "concat dims");
  for (size_t i = 1; i < a.dims().size(); ++i)
    CheckDims(a.dims()[i] == b.dims()[i], "concat trailing extents differ");
  std::vector<int> out_dims = a.dims();
  out_dims[0] += b.dims()[0];
  const size_t na = a.size(), nb = b.size();
  NodeP an = a.node, bn = b.node;
  Var y = MakeOpNode(out_dims, {a, b}, [=](Node &node) {
    if (an->needs_grad) {
      double *ga = an->grad_data();
      for (size_t i = 0; i < na; ++i) ga[i] += node.grad[i];
    }
    if (bn->needs_grad) {
      double *gb = bn->grad_data();
      for (size_t i = 0; i < nb; ++i) gb[i] += node.grad[na + i];
    }
  });
  double *out = y.node->mutable_val();
  std::copy(a.val(), a.val() + na, out);
  std::copy(b.val(), b.val() + nb, out + na);
  return y;
}

Var Add(const Var &a, const Var &b) {
  CheckDims(a.dims() == b.dims(), "add dims");
  const size_t n = a.size();
  NodeP an = a.node, bn = b.node;
  Var y = MakeOpNode(a.dims(), {a, b}, [=](Node &node) {
    if (an->needs_grad) {
      double *g = an->grad_data();
      for (size_t i = 0; i < n; ++i) g[i] += node.grad[i];
    }
    if (bn->needs_grad) {
      double *g = bn->grad_data();
      for (size_t i = 0; i < n; ++i) g[i] += node.grad[i];
    }
  });
  double *out = y.node->mutable_val();
  const double *pa = a.val(), *pb = b.val();
  for (size_t i = 0; i < n; ++i) out[i] = pa[i] + pb[i];
  return y;
}

Var WeightNorm(const Var &v, const Var &g) {
  CheckDims(!v.dims().empty() && g.dims().size() == 1, "weight norm dims");
  const int rows = v.dims()[0];
  CheckDims(g.dims()[0] == rows, "weight norm row count");
  const size_t cols = v.size() / rows;
  auto norms = std::make_shared<std::vector<double>>(rows);
  NodeP vn = v.node, gn = g.node;
  Var y = MakeOpNode(v.dims(), {v, g}, [=](Node &node) {
    const double *vv = vn->val();
    const double *gv = gn->val();
    for (int r = 0; r < rows; ++r) {
      const double *vr = vv + (size_t)r * cols;
      const double *gw = node.grad.data() + (size_t)r * cols;
      const double nrm = (*norms)[r];
      double dot = 0.0;
      for (size_t j = 0; j < cols; ++j) dot += gw[j] * vr[j];
      if (gn->needs_grad) gn->grad_data()[r] += dot / nrm;
      if (vn->needs_grad) {
        double *gvr = vn->grad_data() + (size_t)r * cols;
        const double scale = gv[r] / nrm;
        const double corr = dot / (nrm * nrm);
        for (size_t j = 0; j < cols; ++j)
          gvr[j] += scale * (gw[j] - corr * vr[j]);
      }
    }
  });
  double *out = y.node->mutable_val();
  const double *vv = v.val();
  const double *gv = g.val();
  for (int r = 0; r < rows; ++r) {
    const double *vr = vv + (size_t)r * cols;
    double nrm = 0.0;
    for (size_t j = 0; j < cols; ++j) nrm += vr[j] * vr[j];
    nrm = std::sqrt(std::max(nrm, 1e-30));
    (*norms)[r] = nrm;
    const double scale = gv[r] / nrm;
    for (size_t j = 0; j < cols; ++j) out[(size_t)r * cols + j] = scale * vr[j];
  }
  return y;
}

Var SoftmaxChannels(const Var &x) {
  CheckDims(x.dims().size() == 2, "softmax dims");
  const int c = x.dims()[0], t = x.dims()[1];
  NodeP xn = x.node;
  Var y = MakeOpNode({c, t}, {x}, [=](Node &node) {
    if (xn->needs_grad)
      kernels::SoftmaxChannelsGradInput(node.grad.data(), node.val(), c, t,
                                        xn->grad_data());
  });
  kernels::SoftmaxChannels(x.val(), c, t, y.node->mutable_val());
  return y;
}

Var MeanOverTime(const Var &x) {
  CheckDims(x.dims().size() == 2, "mean dims");
  const int c = x.dims()[0], t = x.dims()[1];
  NodeP xn = x.node;
  Var y = MakeOpNode({c}, {x}, [=](Node &node) {
    if (xn->needs_grad)
      kernels::MeanOverTimeGradInput(node.grad.data(), c, t, xn->grad_data());
  });
  kernels::MeanOverTime(x.val(), c, t, y.node->mutable_val());
  return y;
}

Var CrossEntropy(const Var &p, std::vector<double> target) {
  CheckDims(p.dims().size() == 1 && p.size() == target.size(),
            "cross entropy dims");
  const size_t c = p.size();
  auto tgt = std::make_shared<std::vector<double>>(std::move(target));
  NodeP pn = p.node;
  Var y = MakeOpNode({1}, {p}, [=](Node &node) {
    if (!pn->needs_grad) return;
    const double g = node.grad[0];
    double *gp = pn->grad_data();
    const double *pv = pn->val();
    for (size_t i = 0; i < c; ++i)
      if (pv[i] > 1e-12) gp[i] -= g * (*tgt)[i] / pv[i];
  });
  double loss = 0.0;
  const double *pv = p.val();
  for (size_t i = 0; i < c; ++i)
    loss -= (*tgt)[i] * std::log(std::max(pv[i], 1e-12));
  y.node->mutable_val()[0] = loss;
  return y;
}

Var DotConst(const Var &p, std::vector<double> mu) {
  CheckDims(p.dims().size() == 1 && p.size() == mu.size(), "dot dims");
  const size_t c = p.size();
  auto w = std::make_shared<std::vector<double>>(std::move(mu));
  NodeP pn = p.node;
  Var y = MakeOpNode({1}, {p}, [=](Node &node) {
    if (!pn->needs_grad) return;
    const double g = node.grad[0];
    double *gp = pn->grad_data();
    for (size_t i = 0; i < c; ++i) gp[i] += g * (*w)[i];
  });
  double acc = 0.0;
  const double *pv = p.val();
  for (size_t i = 0; i < c; ++i) acc += pv[i] * (*w)[i];
  y.node->mutable_val()[0] = acc;
  return y;
}

Var SumScalars(const std::vector<Var> &vs) {
  CheckDims(!vs.empty(), "empty scalar sum");
  std::vector<NodeP> nodes;
  for (const auto &v : vs) {
    CheckDims(v.size() == 1, "scalar sum arity");
    nodes.push_back(v.node);
  }
  Var y = MakeOpNode({1}, vs, [=](Node &node) {
    for (const auto &p : nodes)
      if (p->needs_grad) p->grad_data()[0] += node.grad[0];
  });
  double acc = 0.0;
  for (const auto &v : vs) acc += v.scalar();
  y.node->mutable_val()[0] = acc;
  return y;
}

}  // namespace nn
}  // namespace noresqa
