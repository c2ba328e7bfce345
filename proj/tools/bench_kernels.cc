// tools/bench_kernels.cc

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

// Times the serial reference kernels against the OpenMP variants on
// full-architecture shapes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include <omp.h>

#include "noresqa/kernels.h"
#include "noresqa/rng.h"

using noresqa::Rng;
namespace kd = noresqa::kernels::detail;

namespace {

double TimeMs(const std::function<void()> &fn, int reps) {
  fn();  // warm up
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void Report(const char *name, double serial_ms, double omp_ms) {
  std::printf("%-28s serial %9.3f ms   omp %9.3f ms   speedup %.2fx\n", name,
              serial_ms, omp_ms, serial_ms / omp_ms);
}

std::vector<double> RandomVec(size_t n, Rng *rng) {
  std::vector<double> v(n);
  for (auto &x : v) x = rng->Gaussian();
  return v;
}

}  // namespace

int main() {
  Rng rng(7);
  std::printf("threads: %d\n", omp_get_max_threads());

  {
    // Inception-style 3x3 convolution, second block of the full config.
    const int cin = 64, cout = 32, t = 186, f = 128, k = 3;
    auto x = RandomVec((size_t)cin * t * f, &rng);
    auto w = RandomVec((size_t)cout * cin * k * k, &rng);
    auto b = RandomVec(cout, &rng);
    std::vector<double> y((size_t)cout * t * f);
    Report("conv2d 64x186x128 k3",
           TimeMs([&] { kd::Conv2dSameSerial(x.data(), cin, t, f, w.data(),
                                             b.data(), cout, k, y.data()); },
                  3),
           TimeMs([&] { kd::Conv2dSameOmp(x.data(), cin, t, f, w.data(),
                                          b.data(), cout, k, y.data()); },
                  3));
    std::vector<double> gx((size_t)cin * t * f, 0.0);
    Report("conv2d grad-input",
           TimeMs([&] { kd::Conv2dSameGradInputSerial(y.data(), w.data(), cin,
                                                      t, f, cout, k,
                                                      gx.data()); },
                  3),
           TimeMs([&] { kd::Conv2dSameGradInputOmp(y.data(), w.data(), cin, t,
                                                   f, cout, k, gx.data()); },
                  3));
    std::vector<double> gw(w.size(), 0.0), gb(cout, 0.0);
    Report("conv2d grad-params",
           TimeMs([&] { kd::Conv2dSameGradParamsSerial(y.data(), x.data(), cin,
                                                       t, f, cout, k,
                                                       gw.data(), gb.data()); },
                  3),
           TimeMs([&] { kd::Conv2dSameGradParamsOmp(y.data(), x.data(), cin, t,
                                                    f, cout, k, gw.data(),
                                                    gb.data()); },
                  3));
  }

  {
    // TCN dilated convolution, last block of the full config.
    const int cin = 64, cout = 128, t = 186, k = 3, dil = 16;
    auto x = RandomVec((size_t)cin * t, &rng);
    auto w = RandomVec((size_t)cout * cin * k, &rng);
    auto b = RandomVec(cout, &rng);
    std::vector<double> y((size_t)cout * t);
    Report("conv1d 64x186 k3 d16",
           TimeMs([&] { kd::Conv1dSameSerial(x.data(), cin, t, w.data(),
                                             b.data(), cout, k, dil,
                                             y.data()); },
                  50),
           TimeMs([&] { kd::Conv1dSameOmp(x.data(), cin, t, w.data(), b.data(),
                                          cout, k, dil, y.data()); },
                  50));
  }

  {
    // Room impulse response convolution: 3 s of audio, 0.3 s tail.
    const size_t nx = 48000, nh = 4800;
    auto x = RandomVec(nx, &rng);
    auto h = RandomVec(nh, &rng);
    std::vector<double> y(nx);
    Report("convolve 48000x4800",
           TimeMs([&] { kd::ConvolveTruncatedSerial(x.data(), nx, h.data(), nh,
                                                    y.data()); },
                  3),
           TimeMs([&] { kd::ConvolveTruncatedOmp(x.data(), nx, h.data(), nh,
                                                 y.data()); },
                  3));
  }

  {
    // 48 kHz -> 16 kHz resampling of 3 s of audio.
    const size_t nx = 144000, ny = 48000;
    auto x = RandomVec(nx, &rng);
    std::vector<double> y(ny);
    const double ratio = 1.0 / 3.0;
    Report("resample 48k->16k 3s",
           TimeMs([&] { kd::ResampleSincSerial(x.data(), nx, ratio,
                                               ratio * 0.945, 32, y.data(),
                                               ny); },
                  3),
           TimeMs([&] { kd::ResampleSincOmp(x.data(), nx, ratio, ratio * 0.945,
                                            32, y.data(), ny); },
                  3));
  }

  return 0;
}
