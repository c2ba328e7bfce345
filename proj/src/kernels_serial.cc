// src/kernels_serial.cc

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

// Serial reference kernels; the ground truth the OpenMP variants are tested
// against.

#include "noresqa/kernels.h"

#include "kernels_inline.h"

namespace noresqa {
namespace kernels {
namespace detail {

void Conv2dSameSerial(const double *x, int cin, int t, int f, const double *w,
                      const double *bias, int cout, int k, double *y) {
  for (int co = 0; co < cout; ++co)
    for (int ti = 0; ti < t; ++ti)
      for (int fi = 0; fi < f; ++fi)
        y[((size_t)co * t + ti) * f + fi] =
            Conv2dOut(x, cin, t, f, w, bias, k, co, ti, fi);
}

void Conv2dSameGradInputSerial(const double *gy, const double *w, int cin,
                               int t, int f, int cout, int k, double *gx) {
  for (int ci = 0; ci < cin; ++ci)
    for (int ti = 0; ti < t; ++ti)
      for (int fi = 0; fi < f; ++fi)
        gx[((size_t)ci * t + ti) * f + fi] +=
            Conv2dGradIn(gy, w, t, f, cout, cin, k, ci, ti, fi);
}

void Conv2dSameGradParamsSerial(const double *gy, const double *x, int cin,
                                int t, int f, int cout, int k, double *gw,
                                double *gb) {
  for (int co = 0; co < cout; ++co)
    for (int ci = 0; ci < cin; ++ci)
      for (int dt = 0; dt < k; ++dt)
        for (int df = 0; df < k; ++df)
          gw[(((size_t)co * cin + ci) * k + dt) * k + df] +=
              Conv2dGradW(gy, x, t, f, k, co, ci, dt, df);
  if (gb)
    for (int co = 0; co < cout; ++co) gb[co] += Conv2dGradB(gy, t, f, co);
}

void Conv1dSameSerial(const double *x, int cin, int t, const double *w,
                      const double *bias, int cout, int k, int dilation,
                      double *y) {
  for (int co = 0; co < cout; ++co)
    for (int ti = 0; ti < t; ++ti)
      y[(size_t)co * t + ti] =
          Conv1dOut(x, cin, t, w, bias, k, dilation, co, ti);
}

void Conv1dSameGradInputSerial(const double *gy, const double *w, int cin,
                               int t, int cout, int k, int dilation,
                               double *gx) {
  for (int ci = 0; ci < cin; ++ci)
    for (int ti = 0; ti < t; ++ti)
      gx[(size_t)ci * t + ti] +=
          Conv1dGradIn(gy, w, t, cout, cin, k, dilation, ci, ti);
}

void Conv1dSameGradParamsSerial(const double *gy, const double *x, int cin,
                                int t, int cout, int k, int dilation,
                                double *gw, double *gb) {
  for (int co = 0; co < cout; ++co)
    for (int ci = 0; ci < cin; ++ci)
      for (int j = 0; j < k; ++j)
        gw[((size_t)co * cin + ci) * k + j] +=
            Conv1dGradW(gy, x, t, k, dilation, co, ci, j);
  if (gb)
    for (int co = 0; co < cout; ++co) gb[co] += Conv1dGradB(gy, t, co);
}

void ConvolveTruncatedSerial(const double *x, size_t nx, const double *h,
                             size_t nh, double *y) {
  for (size_t n = 0; n < nx; ++n) y[n] = ConvTruncOut(x, h, nh, n);
}

void ResampleSincSerial(const double *x, size_t nx, double ratio, double cutoff,
                        int half_width, double *y, size_t ny) {
  for (size_t i = 0; i < ny; ++i)
    y[i] = SincSample(x, nx, (double)i / ratio, cutoff, half_width);
}

}  // namespace detail
}  // namespace kernels
}  // namespace noresqa
