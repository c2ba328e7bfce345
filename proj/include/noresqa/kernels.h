// include/noresqa/kernels.h

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

#ifndef NORESQA_KERNELS_H_
#define NORESQA_KERNELS_H_

#include <cstddef>

// Compute kernels backing the network and the DSP front end.  Every kernel
// exists twice: a serial reference implementation and an OpenMP variant.
// Parallelism is always "one output element per thread, full inner loop
// serial", so the two variants are bit-identical and results do not depend
// on the thread count.  The public entry points dispatch on a process-wide
// flag (parallel by default); tests and the benchmark call the variants
// directly.
//
// Layouts: 2-D feature maps are [C][T][F] contiguous, temporal maps are
// [C][T] contiguous.  Convolutions are stride-1 with same (zero) padding.

namespace noresqa {
namespace kernels {

bool ParallelEnabled();
void SetParallel(bool enabled);

// y[co][t][f] = b[co] + sum_{ci,dt,df} w[co][ci][dt][df] * x[ci][t+dt-r][f+df-r]
// with r = k/2 (k odd).
void Conv2dSame(const double *x, int cin, int t, int f, const double *w,
                const double *bias, int cout, int k, double *y);
void Conv2dSameGradInput(const double *gy, const double *w, int cin, int t,
                         int f, int cout, int k, double *gx);
void Conv2dSameGradParams(const double *gy, const double *x, int cin, int t,
                          int f, int cout, int k, double *gw, double *gb);

// Max pool along the frequency axis only; f must be divisible by pool.
// argmax stores the winning source index into x for each output element.
void MaxPoolFreq(const double *x, int c, int t, int f, int pool, double *y,
                 int *argmax);
void MaxPoolFreqGradInput(const double *gy, const int *argmax, int c, int t,
                          int fout, double *gx_accum);

// Dilated temporal convolution on [C][T]:
// y[co][t] = b[co] + sum_{ci,j} w[co][ci][j] * x[ci][t+(j-k/2)*dilation]
void Conv1dSame(const double *x, int cin, int t, const double *w,
                const double *bias, int cout, int k, int dilation, double *y);
void Conv1dSameGradInput(const double *gy, const double *w, int cin, int t,
                         int cout, int k, int dilation, double *gx);
void Conv1dSameGradParams(const double *gy, const double *x, int cin, int t,
                          int cout, int k, int dilation, double *gw,
                          double *gb);

void Relu(const double *x, size_t n, double *y);
void ReluGradInput(const double *gy, const double *x, size_t n,
                   double *gx_accum);

// Softmax over the channel axis, one distribution per time step.
void SoftmaxChannels(const double *x, int c, int t, double *y);
void SoftmaxChannelsGradInput(const double *gy, const double *y, int c, int t,
                              double *gx_accum);

// y[c] = mean_t x[c][t]
void MeanOverTime(const double *x, int c, int t, double *y);
void MeanOverTimeGradInput(const double *gy, int c, int t, double *gx_accum);

// Full convolution of x with h, truncated to the length of x.
void ConvolveTruncated(const double *x, size_t nx, const double *h, size_t nh,
                       double *y);

// Windowed-sinc resampler; positions are in input-sample units.
// y[i] = sum_j x[j] * cutoff * sinc(cutoff*(pos_i - j)) * hann_window(...)
// evaluated over |pos_i - j| <= half_width / cutoff.
void ResampleSinc(const double *x, size_t nx, double ratio_out_over_in,
                  double cutoff, int half_width, double *y, size_t ny);

namespace detail {

void Conv2dSameSerial(const double *x, int cin, int t, int f, const double *w,
                      const double *bias, int cout, int k, double *y);
void Conv2dSameOmp(const double *x, int cin, int t, int f, const double *w,
                   const double *bias, int cout, int k, double *y);
void Conv2dSameGradInputSerial(const double *gy, const double *w, int cin,
                               int t, int f, int cout, int k, double *gx);
void Conv2dSameGradInputOmp(const double *gy, const double *w, int cin, int t,
                            int f, int cout, int k, double *gx);
void Conv2dSameGradParamsSerial(const double *gy, const double *x, int cin,
                                int t, int f, int cout, int k, double *gw,
                                double *gb);
void Conv2dSameGradParamsOmp(const double *gy, const double *x, int cin, int t,
                             int f, int cout, int k, double *gw, double *gb);
void Conv1dSameSerial(const double *x, int cin, int t, const double *w,
                      const double *bias, int cout, int k, int dilation,
                      double *y);
void Conv1dSameOmp(const double *x, int cin, int t, const double *w,
                   const double *bias, int cout, int k, int dilation,
                   double *y);
void Conv1dSameGradInputSerial(const double *gy, const double *w, int cin,
                               int t, int cout, int k, int dilation,
                               double *gx);
void Conv1dSameGradInputOmp(const double *gy, const double *w, int cin, int t,
                            int cout, int k, int dilation, double *gx);
void Conv1dSameGradParamsSerial(const double *gy, const double *x, int cin,
                                int t, int cout, int k, int dilation,
                                double *gw, double *gb);
void Conv1dSameGradParamsOmp(const double *gy, const double *x, int cin, int t,
                             int cout, int k, int dilation, double *gw,
                             double *gb);
void ConvolveTruncatedSerial(const double *x, size_t nx, const double *h,
                             size_t nh, double *y);
void ConvolveTruncatedOmp(const double *x, size_t nx, const double *h,
                          size_t nh, double *y);
void ResampleSincSerial(const double *x, size_t nx, double ratio, double cutoff,
                        int half_width, double *y, size_t ny);
void ResampleSincOmp(const double *x, size_t nx, double ratio, double cutoff,
                     int half_width, double *y, size_t ny);

}  // namespace detail

}  // namespace kernels
}  // namespace noresqa

#endif  // NORESQA_KERNELS_H_
