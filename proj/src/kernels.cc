// src/kernels.cc

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

// Dispatch layer plus the cheap elementwise kernels that are not worth
// parallelizing twice.

#include "noresqa/kernels.h"

#include <atomic>
#include <cmath>

namespace noresqa {
namespace kernels {

namespace {
std::atomic<bool> g_parallel{true};
}

bool ParallelEnabled() { return g_parallel.load(std::memory_order_relaxed); }
void SetParallel(bool enabled) {
  g_parallel.store(enabled, std::memory_order_relaxed);
}

void Conv2dSame(const double *x, int cin, int t, int f, const double *w,
                const double *bias, int cout, int k, double *y) {
  if (ParallelEnabled())
    detail::Conv2dSameOmp(x, cin, t, f, w, bias, cout, k, y);
  else
    detail::Conv2dSameSerial(x, cin, t, f, w, bias, cout, k, y);
}

void Conv2dSameGradInput(const double *gy, const double *w, int cin, int t,
                         int f, int cout, int k, double *gx) {
  if (ParallelEnabled())
    detail::Conv2dSameGradInputOmp(gy, w, cin, t, f, cout, k, gx);
  else
    detail::Conv2dSameGradInputSerial(gy, w, cin, t, f, cout, k, gx);
}

void Conv2dSameGradParams(const double *gy, const double *x, int cin, int t,
                          int f, int cout, int k, double *gw, double *gb) {
  if (ParallelEnabled())
    detail::Conv2dSameGradParamsOmp(gy, x, cin, t, f, cout, k, gw, gb);
  else
    detail::Conv2dSameGradParamsSerial(gy, x, cin, t, f, cout, k, gw, gb);
}

void Conv1dSame(const double *x, int cin, int t, const double *w,
                const double *bias, int cout, int k, int dilation, double *y) {
  if (ParallelEnabled())
    detail::Conv1dSameOmp(x, cin, t, w, bias, cout, k, dilation, y);
  else
    detail::Conv1dSameSerial(x, cin, t, w, bias, cout, k, dilation, y);
}

void Conv1dSameGradInput(const double *gy, const double *w, int cin, int t,
                         int cout, int k, int dilation, double *gx) {
  if (ParallelEnabled())
    detail::Conv1dSameGradInputOmp(gy, w, cin, t, cout, k, dilation, gx);
  else
    detail::Conv1dSameGradInputSerial(gy, w, cin, t, cout, k, dilation, gx);
}

void Conv1dSameGradParams(const double *gy, const double *x, int cin, int t,
                          int cout, int k, int dilation, double *gw,
                          double *gb) {
  if (ParallelEnabled())
    detail::Conv1dSameGradParamsOmp(gy, x, cin, t, cout, k, dilation, gw, gb);
  else
    detail::Conv1dSameGradParamsSerial(gy, x, cin, t, cout, k, dilation, gw,
                                       gb);
}

void ConvolveTruncated(const double *x, size_t nx, const double *h, size_t nh,
                       double *y) {
  if (ParallelEnabled())
    detail::ConvolveTruncatedOmp(x, nx, h, nh, y);
  else
    detail::ConvolveTruncatedSerial(x, nx, h, nh, y);
}

void ResampleSinc(const double *x, size_t nx, double ratio, double cutoff,
                  int half_width, double *y, size_t ny) {
  if (ParallelEnabled())
    detail::ResampleSincOmp(x, nx, ratio, cutoff, half_width, y, ny);
  else
    detail::ResampleSincSerial(x, nx, ratio, cutoff, half_width, y, ny);
}

void MaxPoolFreq(const double *x, int c, int t, int f, int pool, double *y,
                 int *argmax) {
  const int fout = f / pool;
  for (int ci = 0; ci < c; ++ci)
    for (int ti = 0; ti < t; ++ti) {
      const double *row = x + ((size_t)ci * t + ti) * f;
      double *yrow = y + ((size_t)ci * t + ti) * fout;
      int *arow = argmax ? argmax + ((size_t)ci * t + ti) * fout : nullptr;
      for (int fo = 0; fo < fout; ++fo) {
        int best = fo * pool;
        double bv = row[best];
        for (int j = 1; j < pool; ++j) {
          int idx = fo * pool + j;
          if (row[idx] > bv) {
            bv = row[idx];
            best = idx;
          }
        }
        yrow[fo] = bv;
        if (arow) arow[fo] = (int)(((size_t)ci * t + ti) * f + best);
      }
    }
}

void MaxPoolFreqGradInput(const double *gy, const int *argmax, int c, int t,
                          int fout, double *gx_accum) {
  const size_t n = (size_t)c * t * fout;
  for (size_t i = 0; i < n; ++i) gx_accum[argmax[i]] += gy[i];
}

void Relu(const double *x, size_t n, double *y) {
  for (size_t i = 0; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void ReluGradInput(const double *gy, const double *x, size_t n,
                   double *gx_accum) {
  for (size_t i = 0; i < n; ++i)
    if (x[i] > 0.0) gx_accum[i] += gy[i];
}

void SoftmaxChannels(const double *x, int c, int t, double *y) {
  for (int ti = 0; ti < t; ++ti) {
    double mx = x[ti];
    for (int ci = 1; ci < c; ++ci) mx = std::max(mx, x[(size_t)ci * t + ti]);
    double sum = 0.0;
    for (int ci = 0; ci < c; ++ci) {
      double e = std::exp(x[(size_t)ci * t + ti] - mx);
      y[(size_t)ci * t + ti] = e;
      sum += e;
    }
    for (int ci = 0; ci < c; ++ci) y[(size_t)ci * t + ti] /= sum;
  }
}

void SoftmaxChannelsGradInput(const double *gy, const double *y, int c, int t,
                              double *gx_accum) {
  for (int ti = 0; ti < t; ++ti) {
    double dot = 0.0;
    for (int ci = 0; ci < c; ++ci)
      dot += gy[(size_t)ci * t + ti] * y[(size_t)ci * t + ti];
    for (int ci = 0; ci < c; ++ci) {
      size_t idx = (size_t)ci * t + ti;
      gx_accum[idx] += y[idx] * (gy[idx] - dot);
    }
  }
}

void MeanOverTime(const double *x, int c, int t, double *y) {
  for (int ci = 0; ci < c; ++ci) {
    double acc = 0.0;
    for (int ti = 0; ti < t; ++ti) acc += x[(size_t)ci * t + ti];
    y[ci] = acc / t;
  }
}

void MeanOverTimeGradInput(const double *gy, int c, int t, double *gx_accum) {
  for (int ci = 0; ci < c; ++ci) {
    double g = gy[ci] / t;
    for (int ti = 0; ti < t; ++ti) gx_accum[(size_t)ci * t + ti] += g;
  }
}

}  // namespace kernels
}  // namespace noresqa
