// include/noresqa/dsp.h

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

#ifndef NORESQA_DSP_H_
#define NORESQA_DSP_H_

#include <complex>
#include <vector>

#include "noresqa/audio_io.h"
#include "noresqa/common.h"

namespace noresqa {

// Both quality measures are clamped to this range so that a vanishing
// residual cannot produce infinities.  The bounds sit far outside the
// training label ranges and never distort labels.
constexpr double kMeasureFloorDb = -40.0;
constexpr double kMeasureCeilDb = 80.0;

struct StftConfig {
  double window_ms = 32.0;
  double hop_fraction = 0.5;
  int n_bins_kept = 256;
  enum class Window { kHamming } window_kind = Window::kHamming;

  int FftSize(int sample_rate) const;
  int Hop(int sample_rate) const;
  void Validate(int sample_rate) const;
};

// Two-channel time-frequency representation: channel 0 holds linear
// magnitude, channel 1 the principal-value phase.  Layout is [2][T][F]
// contiguous; the zeroth frequency bin is dropped, so bin index b maps to
// frequency (b + 1) * rate / fft_size.
struct Spectrogram {
  std::vector<double> data;
  StftConfig config;
  int frames = 0;
  int bins = 0;

  const double *Magnitude() const { return data.data(); }
  const double *Phase() const { return data.data() + (size_t)frames * bins; }
  double Mag(int t, int f) const { return data[(size_t)t * bins + f]; }
  double Ph(int t, int f) const {
    return data[(size_t)frames * bins + (size_t)t * bins + f];
  }
};

struct QualityMeasure {
  enum class Kind { kSnr, kSiSdr };
  double value_db = 0.0;
  Kind kind = Kind::kSnr;
};

// Frames that would run past the end of the signal are dropped, so
// frames == floor((n - fft_size) / hop) + 1.
Spectrogram Stft(const Waveform &w, const StftConfig &cfg);

// Closed-form frame count for a signal of n samples.
int StftFrameCount(size_t n, const StftConfig &cfg, int sample_rate);

// 10*log10(||s||^2 / ||s - x||^2), clamped.
QualityMeasure Snr(const Waveform &s, const Waveform &x);

// Scale-invariant SDR: the observation is first projected onto the clean
// signal (alpha = <x,s>/||s||^2), clamped.
QualityMeasure SiSdr(const Waveform &s, const Waveform &x);

// In-place radix-2 FFT; size must be a power of two.
void Fft(std::vector<std::complex<double>> *data, bool inverse);

namespace detail {

// Unclamped measures (may be +/-inf); shared by the public ops and exposed
// for oracle comparisons.
double SnrDbUnclamped(const std::vector<double> &s, const std::vector<double> &x);
double SiSdrDbUnclamped(const std::vector<double> &s,
                        const std::vector<double> &x);

// Raw spectrogram forward/adjoint used by the differentiable scoring path.
// out is [2][T][F]; the adjoint accumulates into gx (length n).
void StftFill(const double *x, size_t n, int rate, const StftConfig &cfg,
              int frames, double *out);
void StftAdjoint(const double *gout, const double *out, const double *x,
                 size_t n, int rate, const StftConfig &cfg, int frames,
                 double *gx);

}  // namespace detail

}  // namespace noresqa

#endif  // NORESQA_DSP_H_
