// src/dsp.cc

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

#include "noresqa/dsp.h"

#include <algorithm>
#include <cmath>

#include "noresqa/kernels.h"

namespace noresqa {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool IsPow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<double> HammingWindow(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i)
    w[i] = 0.54 - 0.46 * std::cos(2.0 * kPi * i / (n - 1));
  return w;
}

double ClampDb(double v) {
  if (!(v > kMeasureFloorDb)) return kMeasureFloorDb;  // also catches -inf/nan
  if (v > kMeasureCeilDb) return kMeasureCeilDb;
  return v;
}

}  // namespace

int StftConfig::FftSize(int sample_rate) const {
  return (int)std::lround(window_ms * sample_rate / 1000.0);
}

int StftConfig::Hop(int sample_rate) const {
  return (int)std::lround(FftSize(sample_rate) * hop_fraction);
}

void StftConfig::Validate(int sample_rate) const {
  if (hop_fraction <= 0.0 || hop_fraction > 1.0)
    throw Error(ErrorCode::kInvalidConfig, "hop_fraction out of (0, 1]");
  int fft = FftSize(sample_rate);
  if (!IsPow2(fft))
    throw Error(ErrorCode::kInvalidConfig,
                "window does not map to a power-of-two FFT at this rate");
  if (n_bins_kept != fft / 2)
    throw Error(ErrorCode::kInvalidConfig,
                "n_bins_kept must equal fft_size/2");
}

void Fft(std::vector<std::complex<double>> *data, bool inverse) {
  auto &a = *data;
  const size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw Error(ErrorCode::kInvalidConfig, "FFT size must be a power of two");
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * kPi / (double)len * (inverse ? 1.0 : -1.0);
    std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t j = 0; j < len / 2; ++j) {
        std::complex<double> u = a[i + j];
        std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse)
    for (auto &v : a) v /= (double)n;
}

int StftFrameCount(size_t n, const StftConfig &cfg, int sample_rate) {
  const int fft = cfg.FftSize(sample_rate);
  const int hop = cfg.Hop(sample_rate);
  if ((long)n < fft) return 0;
  return (int)((n - (size_t)fft) / hop) + 1;
}

namespace detail {

void StftFill(const double *x, size_t n, int rate, const StftConfig &cfg,
              int frames, double *out) {
  const int fft = cfg.FftSize(rate);
  const int hop = cfg.Hop(rate);
  const int bins = cfg.n_bins_kept;
  const std::vector<double> win = HammingWindow(fft);
  double *mag = out;
  double *ph = out + (size_t)frames * bins;
#pragma omp parallel for schedule(static) if (kernels::ParallelEnabled())
  for (int t = 0; t < frames; ++t) {
    std::vector<std::complex<double>> buf(fft);
    const double *seg = x + (size_t)t * hop;
    for (int i = 0; i < fft; ++i) buf[i] = {seg[i] * win[i], 0.0};
    Fft(&buf, false);
    for (int b = 0; b < bins; ++b) {
      std::complex<double> v = buf[b + 1];  // zeroth bin dropped
      mag[(size_t)t * bins + b] = std::abs(v);
      ph[(size_t)t * bins + b] = std::atan2(v.imag(), v.real());
    }
  }
}

void StftAdjoint(const double *gout, const double *out, const double *x,
                 size_t n, int rate, const StftConfig &cfg, int frames,
                 double *gx) {
  const int fft = cfg.FftSize(rate);
  const int hop = cfg.Hop(rate);
  const int bins = cfg.n_bins_kept;
  const std::vector<double> win = HammingWindow(fft);
  const double *mag = out;
  const double *ph = out + (size_t)frames * bins;
  const double *gmag = gout;
  const double *gph = gout + (size_t)frames * bins;

  // Pass 1: per-frame cotangents in rectangular coordinates.
  //   A_b = d/d Re, B_b = d/d Im of the frame's contribution.
  std::vector<double> A((size_t)frames * bins), B((size_t)frames * bins);
#pragma omp parallel for schedule(static) if (kernels::ParallelEnabled())
  for (int t = 0; t < frames; ++t) {
    for (int b = 0; b < bins; ++b) {
      size_t idx = (size_t)t * bins + b;
      double m = mag[idx];
      if (m <= 0.0) {
        A[idx] = 0.0;
        B[idx] = 0.0;
        continue;
      }
      double re = m * std::cos(ph[idx]);
      double im = m * std::sin(ph[idx]);
      double m2 = m * m;
      A[idx] = gmag[idx] * re / m - gph[idx] * im / m2;
      B[idx] = gmag[idx] * im / m + gph[idx] * re / m2;
    }
  }

  // Pass 2: accumulate into samples.  Each thread owns whole samples, so
  // overlapping frames never race.
  std::vector<double> cos_tab(fft), sin_tab(fft);
  for (int j = 0; j < fft; ++j) {
    cos_tab[j] = std::cos(2.0 * kPi * j / fft);
    sin_tab[j] = std::sin(2.0 * kPi * j / fft);
  }
#pragma omp parallel for schedule(static) if (kernels::ParallelEnabled())
  for (long s = 0; s < (long)n; ++s) {
    // Frames covering sample s: t*hop <= s <= t*hop + fft - 1.
    long num = s - (long)fft + 1;
    long t_lo = num <= 0 ? 0 : (num + hop - 1) / hop;
    long t_hi = std::min<long>((long)frames - 1, s / hop);
    double acc = 0.0;
    for (long t = t_lo; t <= t_hi; ++t) {
      long i = s - t * hop;
      const double *At = A.data() + (size_t)t * bins;
      const double *Bt = B.data() + (size_t)t * bins;
      double inner = 0.0;
      for (int b = 0; b < bins; ++b) {
        // Forward used exp(-i 2*pi*(b+1)*i/fft).
        int j = (int)(((long)(b + 1) * i) % fft);
        inner += At[b] * cos_tab[j] - Bt[b] * sin_tab[j];
      }
      acc += win[i] * inner;
    }
    gx[s] += acc;
  }
  (void)x;
}

double SnrDbUnclamped(const std::vector<double> &s,
                      const std::vector<double> &x) {
  double ps = 0.0, pr = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    ps += s[i] * s[i];
    double r = s[i] - x[i];
    pr += r * r;
  }
  return 10.0 * std::log10(ps / pr);
}

double SiSdrDbUnclamped(const std::vector<double> &s,
                        const std::vector<double> &x) {
  double dot = 0.0, ps = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    dot += x[i] * s[i];
    ps += s[i] * s[i];
  }
  double alpha = dot / ps;
  double pt = 0.0, pr = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    double t = alpha * s[i];
    double r = t - x[i];
    pt += t * t;
    pr += r * r;
  }
  return 10.0 * std::log10(pt / pr);
}

}  // namespace detail

Spectrogram Stft(const Waveform &w, const StftConfig &cfg) {
  cfg.Validate(w.sample_rate);
  const int frames = StftFrameCount(w.samples.size(), cfg, w.sample_rate);
  if (frames <= 0)
    throw Error(ErrorCode::kSignalTooShort,
                "signal shorter than one analysis window");
  Spectrogram spec;
  spec.config = cfg;
  spec.frames = frames;
  spec.bins = cfg.n_bins_kept;
  spec.data.assign((size_t)2 * frames * spec.bins, 0.0);
  detail::StftFill(w.samples.data(), w.samples.size(), w.sample_rate, cfg,
                   frames, spec.data.data());
  return spec;
}

QualityMeasure Snr(const Waveform &s, const Waveform &x) {
  if (s.samples.size() != x.samples.size())
    throw Error(ErrorCode::kLengthMismatch, "signal lengths differ");
  double ps = 0.0;
  for (double v : s.samples) ps += v * v;
  if (ps <= 0.0)
    throw Error(ErrorCode::kDegenerateClean, "clean signal is all-zero");
  return {ClampDb(detail::SnrDbUnclamped(s.samples, x.samples)),
          QualityMeasure::Kind::kSnr};
}

QualityMeasure SiSdr(const Waveform &s, const Waveform &x) {
  if (s.samples.size() != x.samples.size())
    throw Error(ErrorCode::kLengthMismatch, "signal lengths differ");
  double ps = 0.0, px = 0.0;
  for (double v : s.samples) ps += v * v;
  for (double v : x.samples) px += v * v;
  if (ps <= 0.0)
    throw Error(ErrorCode::kDegenerateClean, "clean signal is all-zero");
  if (px <= 0.0)
    throw Error(ErrorCode::kDegenerateTest, "test signal is all-zero");
  return {ClampDb(detail::SiSdrDbUnclamped(s.samples, x.samples)),
          QualityMeasure::Kind::kSiSdr};
}

}  // namespace noresqa
