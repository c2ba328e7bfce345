// src/synth.cc

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

#include "noresqa/synth.h"

#include <algorithm>
#include <cmath>
#include <filesystem>

namespace noresqa {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void NormalizePeak(Waveform *w, double peak) {
  double mx = 0.0;
  for (double v : w->samples) mx = std::max(mx, std::fabs(v));
  if (mx <= 0.0) return;
  const double g = peak / mx;
  for (double &v : w->samples) v *= g;
}

}  // namespace

Waveform SynthToneComplex(Rng *rng, double seconds, int rate) {
  Waveform w;
  w.sample_rate = rate;
  const size_t n = (size_t)std::llround(seconds * rate);
  w.samples.assign(n, 0.0);
  const double f0 = rng->Uniform(90.0, 280.0);
  const int harmonics = 4 + (int)rng->Integer(7);
  const double am_rate = rng->Uniform(2.0, 7.0);
  const double am_depth = rng->Uniform(0.2, 0.6);
  const double vib = rng->Uniform(0.0, 4.0);
  for (int h = 1; h <= harmonics; ++h) {
    const double amp = 1.0 / h;
    const double phase = rng->Uniform(0.0, kTwoPi);
    const double f = f0 * h;
    if (f >= rate / 2.0) break;
    for (size_t i = 0; i < n; ++i) {
      const double t = (double)i / rate;
      w.samples[i] +=
          amp * std::sin(kTwoPi * (f * t + vib * std::sin(kTwoPi * 1.3 * t) /
                                               kTwoPi) +
                         phase);
    }
  }
  for (size_t i = 0; i < n; ++i) {
    const double t = (double)i / rate;
    w.samples[i] *= 1.0 - am_depth * 0.5 * (1.0 + std::sin(kTwoPi * am_rate * t));
  }
  NormalizePeak(&w, 0.5);
  return w;
}

Waveform SynthFilteredNoise(Rng *rng, double seconds, int rate) {
  Waveform w;
  w.sample_rate = rate;
  const size_t n = (size_t)std::llround(seconds * rate);
  w.samples.resize(n);
  // One-pole lowpass over white noise; random cutoff.
  const double cutoff = rng->Uniform(400.0, 3000.0);
  const double a = std::exp(-kTwoPi * cutoff / rate);
  double state = 0.0;
  for (size_t i = 0; i < n; ++i) {
    state = a * state + (1.0 - a) * rng->Gaussian();
    w.samples[i] = state;
  }
  NormalizePeak(&w, 0.5);
  return w;
}

Waveform SynthBabble(Rng *rng, double seconds, int rate) {
  Waveform w;
  w.sample_rate = rate;
  const size_t n = (size_t)std::llround(seconds * rate);
  w.samples.assign(n, 0.0);
  const int voices = 8 + (int)rng->Integer(6);
  for (int v = 0; v < voices; ++v) {
    const double f = rng->Uniform(150.0, 2500.0);
    const double am = rng->Uniform(1.5, 9.0);
    const double phase = rng->Uniform(0.0, kTwoPi);
    const double aphase = rng->Uniform(0.0, kTwoPi);
    for (size_t i = 0; i < n; ++i) {
      const double t = (double)i / rate;
      const double env = 0.5 * (1.0 + std::sin(kTwoPi * am * t + aphase));
      w.samples[i] += env * std::sin(kTwoPi * f * t + phase) / voices;
    }
  }
  for (size_t i = 0; i < n; ++i) w.samples[i] += 0.1 * rng->Gaussian();
  NormalizePeak(&w, 0.5);
  return w;
}

Waveform SynthWhiteNoise(Rng *rng, double seconds, int rate) {
  Waveform w;
  w.sample_rate = rate;
  const size_t n = (size_t)std::llround(seconds * rate);
  w.samples.resize(n);
  for (auto &v : w.samples) v = rng->Gaussian();
  NormalizePeak(&w, 0.5);
  return w;
}

Waveform SynthRir(Rng *rng, int rate) {
  Waveform w;
  w.sample_rate = rate;
  const double tail_s = rng->Uniform(0.08, 0.35);
  const size_t n = (size_t)std::llround(tail_s * rate);
  w.samples.assign(n, 0.0);
  w.samples[0] = 1.0;  // direct path
  const double tau = tail_s / rng->Uniform(4.0, 8.0);
  const size_t onset = (size_t)std::llround(rng->Uniform(0.002, 0.012) * rate);
  for (size_t i = onset; i < n; ++i) {
    const double t = (double)(i - onset) / rate;
    w.samples[i] = 0.4 * std::exp(-t / tau) * rng->Gaussian();
  }
  return w;
}

SynthCorpus BuildSynthCorpus(const std::string &dir,
                             const SynthCorpusConfig &cfg) {
  std::filesystem::create_directories(dir);
  SynthCorpus corpus;
  Rng rng(Rng::Derive(cfg.seed, 0x5f17));
  auto add = [&](std::vector<ManifestEntry> *list, ManifestEntry::Role role,
                 const std::string &name, const Waveform &w) {
    const std::string path = dir + "/" + name + ".wav";
    SaveWav(path, w);
    list->push_back({path, role, w.DurationSeconds()});
  };
  for (int i = 0; i < cfg.clean_files; ++i) {
    // Alternate tone complexes and filtered noise as clean material.
    Waveform w = (i % 2 == 0)
                     ? SynthToneComplex(&rng, cfg.file_s, cfg.sample_rate)
                     : SynthFilteredNoise(&rng, cfg.file_s, cfg.sample_rate);
    add(&corpus.clean, ManifestEntry::Role::kClean,
        "clean" + std::to_string(i), w);
  }
  for (int i = 0; i < cfg.noise_files; ++i) {
    Waveform w = (i % 2 == 0) ? SynthWhiteNoise(&rng, cfg.file_s, cfg.sample_rate)
                              : SynthBabble(&rng, cfg.file_s, cfg.sample_rate);
    add(&corpus.noise, ManifestEntry::Role::kNoise,
        "noise" + std::to_string(i), w);
  }
  for (int i = 0; i < cfg.rir_files; ++i)
    add(&corpus.rir, ManifestEntry::Role::kRir, "rir" + std::to_string(i),
        SynthRir(&rng, cfg.sample_rate));
  WriteManifest(dir + "/clean.jsonl", corpus.clean);
  WriteManifest(dir + "/noise.jsonl", corpus.noise);
  WriteManifest(dir + "/rir.jsonl", corpus.rir);
  return corpus;
}

}  // namespace noresqa
