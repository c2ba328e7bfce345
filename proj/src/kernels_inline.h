// src/kernels_inline.h

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

// Per-output-element compute shared by the serial reference kernels and the
// OpenMP kernels.  Both variants call these with identical inner-loop order,
// which is what makes them bit-identical.

#ifndef NORESQA_SRC_KERNELS_INLINE_H_
#define NORESQA_SRC_KERNELS_INLINE_H_

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace noresqa {
namespace kernels {
namespace detail {

inline double Conv2dOut(const double *x, int cin, int t, int f,
                        const double *w, const double *bias, int k, int co,
                        int ti, int fi) {
  const int r = k / 2;
  double acc = bias ? bias[co] : 0.0;
  for (int ci = 0; ci < cin; ++ci) {
    const double *xc = x + (size_t)ci * t * f;
    const double *wc = w + ((size_t)co * cin + ci) * k * k;
    for (int dt = 0; dt < k; ++dt) {
      int tt = ti + dt - r;
      if (tt < 0 || tt >= t) continue;
      for (int df = 0; df < k; ++df) {
        int ff = fi + df - r;
        if (ff < 0 || ff >= f) continue;
        acc += wc[dt * k + df] * xc[(size_t)tt * f + ff];
      }
    }
  }
  return acc;
}

inline double Conv2dGradIn(const double *gy, const double *w, int t, int f,
                           int cout, int cin, int k, int ci, int ti, int fi) {
  const int r = k / 2;
  double acc = 0.0;
  for (int co = 0; co < cout; ++co) {
    const double *gc = gy + (size_t)co * t * f;
    const double *wc = w + ((size_t)co * cin + ci) * k * k;
    for (int dt = 0; dt < k; ++dt) {
      int tt = ti - (dt - r);  // output position reading x[ti] through tap dt
      if (tt < 0 || tt >= t) continue;
      for (int df = 0; df < k; ++df) {
        int ff = fi - (df - r);
        if (ff < 0 || ff >= f) continue;
        acc += wc[dt * k + df] * gc[(size_t)tt * f + ff];
      }
    }
  }
  return acc;
}

inline double Conv2dGradW(const double *gy, const double *x, int t, int f,
                          int k, int co, int ci, int dt, int df) {
  const int r = k / 2;
  const double *gc = gy + (size_t)co * t * f;
  const double *xc = x + (size_t)ci * t * f;
  double acc = 0.0;
  int t0 = std::max(0, r - dt), t1 = std::min(t, t + r - dt);
  int f0 = std::max(0, r - df), f1 = std::min(f, f + r - df);
  for (int ti = t0; ti < t1; ++ti) {
    const double *grow = gc + (size_t)ti * f;
    const double *xrow = xc + (size_t)(ti + dt - r) * f + (df - r);
    for (int fi = f0; fi < f1; ++fi) acc += grow[fi] * xrow[fi];
  }
  return acc;
}

inline double Conv2dGradB(const double *gy, int t, int f, int co) {
  const double *gc = gy + (size_t)co * t * f;
  double acc = 0.0;
  for (size_t i = 0; i < (size_t)t * f; ++i) acc += gc[i];
  return acc;
}

inline double Conv1dOut(const double *x, int cin, int t, const double *w,
                        const double *bias, int k, int dilation, int co,
                        int ti) {
  const int r = k / 2;
  double acc = bias ? bias[co] : 0.0;
  for (int ci = 0; ci < cin; ++ci) {
    const double *xc = x + (size_t)ci * t;
    const double *wc = w + ((size_t)co * cin + ci) * k;
    for (int j = 0; j < k; ++j) {
      int tt = ti + (j - r) * dilation;
      if (tt < 0 || tt >= t) continue;
      acc += wc[j] * xc[tt];
    }
  }
  return acc;
}

inline double Conv1dGradIn(const double *gy, const double *w, int t, int cout,
                           int cin, int k, int dilation, int ci, int ti) {
  const int r = k / 2;
  double acc = 0.0;
  for (int co = 0; co < cout; ++co) {
    const double *gc = gy + (size_t)co * t;
    const double *wc = w + ((size_t)co * cin + ci) * k;
    for (int j = 0; j < k; ++j) {
      int tt = ti - (j - r) * dilation;
      if (tt < 0 || tt >= t) continue;
      acc += wc[j] * gc[tt];
    }
  }
  return acc;
}

inline double Conv1dGradW(const double *gy, const double *x, int t, int k,
                          int dilation, int co, int ci, int j) {
  const int r = k / 2;
  const double *gc = gy + (size_t)co * t;
  const double *xc = x + (size_t)ci * t;
  double acc = 0.0;
  for (int ti = 0; ti < t; ++ti) {
    int tt = ti + (j - r) * dilation;
    if (tt < 0 || tt >= t) continue;
    acc += gc[ti] * xc[tt];
  }
  return acc;
}

inline double Conv1dGradB(const double *gy, int t, int co) {
  const double *gc = gy + (size_t)co * t;
  double acc = 0.0;
  for (int ti = 0; ti < t; ++ti) acc += gc[ti];
  return acc;
}

inline double ConvTruncOut(const double *x, const double *h, size_t nh,
                           size_t n) {
  double acc = 0.0;
  size_t jmax = std::min(n, nh - 1);
  for (size_t j = 0; j <= jmax; ++j) acc += h[j] * x[n - j];
  return acc;
}

inline double SincSample(const double *x, size_t nx, double pos, double cutoff,
                         int half_width) {
  // Hann-windowed sinc interpolation around a fractional source position.
  const double span = half_width / cutoff;
  long j0 = (long)std::ceil(pos - span);
  long j1 = (long)std::floor(pos + span);
  const double pi = 3.14159265358979323846;
  double acc = 0.0;
  for (long j = j0; j <= j1; ++j) {
    if (j < 0 || j >= (long)nx) continue;
    double d = pos - (double)j;
    double a = pi * cutoff * d;
    double s = (std::fabs(a) < 1e-12) ? 1.0 : std::sin(a) / a;
    double win = 0.5 + 0.5 * std::cos(pi * d / span);
    acc += x[j] * cutoff * s * win;
  }
  return acc;
}

}  // namespace detail
}  // namespace kernels
}  // namespace noresqa

#endif  // NORESQA_SRC_KERNELS_INLINE_H_
