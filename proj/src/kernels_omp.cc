// src/kernels_omp.cc

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

// OpenMP kernels.  Each thread owns whole output elements and runs the same
// inner loops as the serial reference, so results are bit-identical for any
// thread count.

#include "noresqa/kernels.h"

#include "kernels_inline.h"

namespace noresqa {
namespace kernels {
namespace detail {

void Conv2dSameOmp(const double *x, int cin, int t, int f, const double *w,
                   const double *bias, int cout, int k, double *y) {
#pragma omp parallel for collapse(2) schedule(static)
  for (int co = 0; co < cout; ++co)
    for (int ti = 0; ti < t; ++ti)
      for (int fi = 0; fi < f; ++fi)
        y[((size_t)co * t + ti) * f + fi] =
            Conv2dOut(x, cin, t, f, w, bias, k, co, ti, fi);
}

void Conv2dSameGradInputOmp(const double *gy, const double *w, int cin, int t,
                            int f, int cout, int k, double *gx) {
#pragma omp parallel for collapse(2) schedule(static)
  for (int ci = 0; ci < cin; ++ci)
    for (int ti = 0; ti < t; ++ti)
      for (int fi = 0; fi < f; ++fi)
        gx[((size_t)ci * t + ti) * f + fi] +=
            Conv2dGradIn(gy, w, t, f, cout, cin, k, ci, ti, fi);
}

void Conv2dSameGradParamsOmp(const double *gy, const double *x, int cin, int t,
                             int f, int cout, int k, double *gw, double *gb) {
  const int kk = k * k;
#pragma omp parallel for collapse(2) schedule(static)
  for (int co = 0; co < cout; ++co)
    for (int ci = 0; ci < cin; ++ci)
      for (int dt = 0; dt < k; ++dt)
        for (int df = 0; df < k; ++df)
          gw[((size_t)co * cin + ci) * kk + dt * k + df] +=
              Conv2dGradW(gy, x, t, f, k, co, ci, dt, df);
  if (gb) {
#pragma omp parallel for schedule(static)
    for (int co = 0; co < cout; ++co) gb[co] += Conv2dGradB(gy, t, f, co);
  }
}

void Conv1dSameOmp(const double *x, int cin, int t, const double *w,
                   const double *bias, int cout, int k, int dilation,
                   double *y) {
#pragma omp parallel for collapse(2) schedule(static)
  for (int co = 0; co < cout; ++co)
    for (int ti = 0; ti < t; ++ti)
      y[(size_t)co * t + ti] =
          Conv1dOut(x, cin, t, w, bias, k, dilation, co, ti);
}

void Conv1dSameGradInputOmp(const double *gy, const double *w, int cin, int t,
                            int cout, int k, int dilation, double *gx) {
#pragma omp parallel for collapse(2) schedule(static)
  for (int ci = 0; ci < cin; ++ci)
    for (int ti = 0; ti < t; ++ti)
      gx[(size_t)ci * t + ti] +=
          Conv1dGradIn(gy, w, t, cout, cin, k, dilation, ci, ti);
}

void Conv1dSameGradParamsOmp(const double *gy, const double *x, int cin, int t,
                             int cout, int k, int dilation, double *gw,
                             double *gb) {
#pragma omp parallel for collapse(2) schedule(static)
  for (int co = 0; co < cout; ++co)
    for (int ci = 0; ci < cin; ++ci)
      for (int j = 0; j < k; ++j)
        gw[((size_t)co * cin + ci) * k + j] +=
            Conv1dGradW(gy, x, t, k, dilation, co, ci, j);
  if (gb) {
#pragma omp parallel for schedule(static)
    for (int co = 0; co < cout; ++co) gb[co] += Conv1dGradB(gy, t, co);
  }
}

void ConvolveTruncatedOmp(const double *x, size_t nx, const double *h,
                          size_t nh, double *y) {
#pragma omp parallel for schedule(static)
  for (long n = 0; n < (long)nx; ++n)
    y[n] = ConvTruncOut(x, h, nh, (size_t)n);
}

void ResampleSincOmp(const double *x, size_t nx, double ratio, double cutoff,
                     int half_width, double *y, size_t ny) {
#pragma omp parallel for schedule(static)
  for (long i = 0; i < (long)ny; ++i)
    y[i] = SincSample(x, nx, (double)i / ratio, cutoff, half_width);
}

}  // namespace detail
}  // namespace kernels
}  // namespace noresqa
