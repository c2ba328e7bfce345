// tests/test_dsp.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "noresqa/dsp.h"
#include "noresqa/rng.h"

using namespace noresqa;

namespace {

constexpr double kPi = 3.14159265358979323846;

Waveform Tone(double freq, double seconds, int rate, double amp = 0.5) {
  Waveform w;
  w.sample_rate = rate;
  const size_t n = (size_t)std::llround(seconds * rate);
  w.samples.resize(n);
  for (size_t i = 0; i < n; ++i)
    w.samples[i] = amp * std::sin(2.0 * kPi * freq * i / rate);
  return w;
}

Waveform RandomSignal(size_t n, Rng *rng, int rate = 16000) {
  Waveform w;
  w.sample_rate = rate;
  w.samples.resize(n);
  for (auto &v : w.samples) v = 0.3 * rng->Gaussian();
  return w;
}

// O(n^2) DFT used as the FFT oracle.
std::vector<std::complex<double>> NaiveDft(
    const std::vector<std::complex<double>> &x) {
  const size_t n = x.size();
  std::vector<std::complex<double>> y(n);
  for (size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (size_t j = 0; j < n; ++j)
      acc += x[j] * std::exp(std::complex<double>(0.0, -2.0 * kPi * k * j / n));
    y[k] = acc;
  }
  return y;
}

}  // namespace

TEST_CASE("fft matches a naive DFT and inverts") {
  Rng rng(21);
  std::vector<std::complex<double>> x(64);
  for (auto &v : x) v = {rng.Gaussian(), rng.Gaussian()};
  auto expect = NaiveDft(x);
  auto got = x;
  Fft(&got, false);
  for (size_t i = 0; i < x.size(); ++i) {
    CHECK(got[i].real() == doctest::Approx(expect[i].real()).epsilon(1e-9));
    CHECK(got[i].imag() == doctest::Approx(expect[i].imag()).epsilon(1e-9));
  }
  Fft(&got, true);
  for (size_t i = 0; i < x.size(); ++i)
    CHECK(got[i].real() == doctest::Approx(x[i].real()).epsilon(1e-9));
}

TEST_CASE("stft frame count follows the closed form") {
  StftConfig cfg;
  // 3 s at 16 kHz: fft 512, hop 256.
  Waveform w = Tone(440.0, 3.0, 16000);
  Spectrogram spec = Stft(w, cfg);
  // Enumeration oracle: count full windows.
  int count = 0;
  for (size_t start = 0; start + 512 <= w.samples.size(); start += 256)
    ++count;
  CHECK(count == (48000 - 512) / 256 + 1);
  CHECK(spec.frames == count);
  CHECK(spec.bins == 256);

  Rng rng(22);
  for (int i = 0; i < 100; ++i) {
    size_t n = 512 + rng.Integer(60000);
    int oracle = 0;
    for (size_t start = 0; start + 512 <= n; start += 256) ++oracle;
    CHECK(StftFrameCount(n, cfg, 16000) == oracle);
    if (i % 25 == 0) {
      Waveform r = RandomSignal(n, &rng);
      CHECK(Stft(r, cfg).frames == oracle);
    }
  }
}

TEST_CASE("stft of silence has an all-zero magnitude channel") {
  Waveform w;
  w.samples.assign(16000, 0.0);
  Spectrogram spec = Stft(w, StftConfig());
  for (int t = 0; t < spec.frames; ++t)
    for (int b = 0; b < spec.bins; ++b) CHECK(spec.Mag(t, b) == 0.0);
}

TEST_CASE("stft of a bin-centered tone peaks at that bin in every frame") {
  // Bin b holds frequency (b+1)*rate/fft; bin index 31 <-> 1000 Hz at 16 kHz.
  const double freq = 32.0 * 16000.0 / 512.0;
  Waveform w = Tone(freq, 1.0, 16000);
  Spectrogram spec = Stft(w, StftConfig());
  for (int t = 0; t < spec.frames; ++t) {
    int best = 0;
    for (int b = 1; b < spec.bins; ++b)
      if (spec.Mag(t, b) > spec.Mag(t, best)) best = b;
    CHECK(best == 31);
  }
}

TEST_CASE("stft phase stays in the principal branch") {
  Rng rng(27);
  Spectrogram spec = Stft(RandomSignal(9000, &rng), StftConfig());
  for (int t = 0; t < spec.frames; ++t)
    for (int b = 0; b < spec.bins; ++b) {
      CHECK(spec.Ph(t, b) <= kPi + 1e-12);
      CHECK(spec.Ph(t, b) > -kPi - 1e-12);
      CHECK(spec.Mag(t, b) >= 0.0);
    }
}

TEST_CASE("stft rejects too-short signals and bad configs") {
  Waveform w = Tone(440.0, 0.01, 16000);  // 160 samples < one window
  CHECK_THROWS_AS((void)Stft(w, StftConfig()), Error);
  StftConfig bad;
  bad.n_bins_kept = 128;
  Waveform ok = Tone(440.0, 1.0, 16000);
  CHECK_THROWS_AS((void)Stft(ok, bad), Error);
}

TEST_CASE("snr matches constructed values") {
  Rng rng(23);
  Waveform s = RandomSignal(8000, &rng);

  // Equal powers -> 0 dB.
  double ps = 0.0;
  for (double v : s.samples) ps += v * v;
  Waveform n = RandomSignal(8000, &rng);
  double pn = 0.0;
  for (double v : n.samples) pn += v * v;
  Waveform x = s;
  const double g0 = std::sqrt(ps / pn);
  for (size_t i = 0; i < x.samples.size(); ++i)
    x.samples[i] += g0 * n.samples[i];
  CHECK(Snr(s, x).value_db == doctest::Approx(0.0).epsilon(1e-9));

  // Power ratio 10 -> 10 dB.
  Waveform x10 = s;
  const double g10 = std::sqrt(ps / (10.0 * pn));
  for (size_t i = 0; i < x10.samples.size(); ++i)
    x10.samples[i] += g10 * n.samples[i];
  CHECK(Snr(s, x10).value_db == doctest::Approx(10.0).epsilon(1e-9));

  // Identical signals clamp at the ceiling.
  CHECK(Snr(s, s).value_db == kMeasureCeilDb);
}

TEST_CASE("snr errors") {
  Rng rng(24);
  Waveform s = RandomSignal(100, &rng);
  Waveform shorter = RandomSignal(99, &rng);
  CHECK_THROWS_AS((void)Snr(s, shorter), Error);
  Waveform zeros;
  zeros.samples.assign(100, 0.0);
  CHECK_THROWS_AS((void)Snr(zeros, s), Error);
}

TEST_CASE("si-sdr is scale invariant, snr is not") {
  Rng rng(25);
  Waveform s = RandomSignal(8000, &rng);
  Waveform n = RandomSignal(8000, &rng);
  Waveform x = s;
  for (size_t i = 0; i < x.samples.size(); ++i)
    x.samples[i] += 0.25 * n.samples[i];

  // x = 2s hits the clamp ceiling: the projection leaves no residual.
  Waveform doubled = s;
  for (double &v : doubled.samples) v *= 2.0;
  CHECK(SiSdr(s, doubled).value_db == kMeasureCeilDb);

  const double base = SiSdr(s, x).value_db;
  for (double c : {0.1, 0.5, 2.0, 17.0}) {
    Waveform scaled = x;
    for (double &v : scaled.samples) v *= c;
    CHECK(SiSdr(s, scaled).value_db == doctest::Approx(base).epsilon(1e-9));
  }

  // SNR moves under scaling on the same pair.
  const double snr_base = Snr(s, x).value_db;
  Waveform scaled = x;
  for (double &v : scaled.samples) v *= 2.0;
  CHECK(std::fabs(Snr(s, scaled).value_db - snr_base) > 0.5);
}

TEST_CASE("si-sdr equals snr for orthogonal residuals") {
  Rng rng(26);
  Waveform s = RandomSignal(8000, &rng);
  Waveform e = RandomSignal(8000, &rng);
  // Gram-Schmidt: make e exactly orthogonal to s, then match powers.
  double dot = 0.0, ps = 0.0;
  for (size_t i = 0; i < s.samples.size(); ++i) {
    dot += e.samples[i] * s.samples[i];
    ps += s.samples[i] * s.samples[i];
  }
  for (size_t i = 0; i < e.samples.size(); ++i)
    e.samples[i] -= dot / ps * s.samples[i];
  double pe = 0.0;
  for (double v : e.samples) pe += v * v;
  const double g = std::sqrt(ps / pe);
  Waveform x = s;
  for (size_t i = 0; i < x.samples.size(); ++i)
    x.samples[i] += g * e.samples[i];

  // alpha = 1 exactly, and both measures agree at 0 dB.
  CHECK(SiSdr(s, x).value_db == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(std::fabs(SiSdr(s, x).value_db - Snr(s, x).value_db) < 1e-6);

  Waveform zeros;
  zeros.samples.assign(8000, 0.0);
  CHECK_THROWS_AS((void)SiSdr(s, zeros), Error);
}

TEST_CASE("stft adjoint matches finite differences") {
  // The adjoint backs the differentiable scoring path.
  Rng rng(28);
  StftConfig cfg;
  const int rate = 16000;
  Waveform w = RandomSignal(1536, &rng);  // 5 frames
  const int frames = StftFrameCount(w.samples.size(), cfg, rate);
  const int bins = cfg.n_bins_kept;
  std::vector<double> out((size_t)2 * frames * bins);
  detail::StftFill(w.samples.data(), w.samples.size(), rate, cfg, frames,
                   out.data());
  // Random probe on the spectrogram; loss = sum r * stft(x).
  std::vector<double> probe(out.size());
  for (auto &v : probe) v = rng.Gaussian();
  std::vector<double> gx(w.samples.size(), 0.0);
  detail::StftAdjoint(probe.data(), out.data(), w.samples.data(),
                      w.samples.size(), rate, cfg, frames, gx.data());
  auto loss = [&](const std::vector<double> &sig) {
    std::vector<double> o(out.size());
    detail::StftFill(sig.data(), sig.size(), rate, cfg, frames, o.data());
    double acc = 0.0;
    for (size_t i = 0; i < o.size(); ++i) acc += probe[i] * o[i];
    return acc;
  };
  const double h = 1e-6;
  for (size_t i = 0; i < w.samples.size(); i += 97) {
    auto plus = w.samples, minus = w.samples;
    plus[i] += h;
    minus[i] -= h;
    const double fd = (loss(plus) - loss(minus)) / (2.0 * h);
    CHECK(gx[i] == doctest::Approx(fd).epsilon(1e-4).scale(1.0));
  }
}
