// src/degrade.cc

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

#include "noresqa/degrade.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>

#include "json.hpp"
#include "noresqa/dsp.h"
#include "noresqa/kernels.h"

namespace noresqa {

namespace {

constexpr double kCalibrationTolDb = 0.5;
constexpr int kMuLawQuantLevels = 16;
constexpr double kMaskLowEdgeHz = 300.0;
constexpr double kSilencePowerFloor = 1e-8;

double Power(const std::vector<double> &v) {
  double p = 0.0;
  for (double x : v) p += x * x;
  return p;
}

}  // namespace

const char *DegradationKindName(DegradationKind kind) {
  switch (kind) {
    case DegradationKind::kAdditiveNoise: return "additive_noise";
    case DegradationKind::kClipping: return "clipping";
    case DegradationKind::kFrequencyMask: return "frequency_mask";
    case DegradationKind::kMuLaw: return "mu_law";
    case DegradationKind::kGaussianNoise: return "gaussian_noise";
  }
  return "additive_noise";
}

DegradationKind DegradationKindFromName(const std::string &name) {
  if (name == "additive_noise") return DegradationKind::kAdditiveNoise;
  if (name == "clipping") return DegradationKind::kClipping;
  if (name == "frequency_mask") return DegradationKind::kFrequencyMask;
  if (name == "mu_law") return DegradationKind::kMuLaw;
  if (name == "gaussian_noise") return DegradationKind::kGaussianNoise;
  throw Error(ErrorCode::kInvalidConfig, "unknown degradation kind " + name);
}

PairCategory CategoryOf(DegradationKind kind) {
  switch (kind) {
    case DegradationKind::kAdditiveNoise:
    case DegradationKind::kGaussianNoise:
      return PairCategory::kAdditive;
    default:
      return PairCategory::kManipulation;
  }
}

SamplerConfig SamplerConfigFromJsonFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded())
    throw Error(ErrorCode::kInvalidConfig, "bad JSON in " + path);
  SamplerConfig cfg;
  cfg.excerpt_s = j.value("excerpt_s", cfg.excerpt_s);
  cfg.reverb_prob = j.value("reverb_prob", cfg.reverb_prob);
  cfg.seed = j.value("seed", cfg.seed);
  if (j.contains("kind_weights")) {
    cfg.kind_weights.clear();
    for (auto &[k, v] : j["kind_weights"].items())
      cfg.kind_weights[k] = v.get<double>();
  }
  return cfg;
}

Waveform AddNoiseAtSnr(const Waveform &clean, const Waveform &noise,
                       double target_snr_db) {
  if (Power(clean.samples) <= 0.0)
    throw Error(ErrorCode::kDegenerateClean, "all-zero clean signal");
  const size_t n = clean.samples.size();
  std::vector<double> fitted(n);
  for (size_t i = 0; i < n; ++i)
    fitted[i] = noise.samples[i % noise.samples.size()];
  const double pn = Power(fitted);
  if (pn <= 0.0)
    throw Error(ErrorCode::kDegenerateNoise, "all-zero noise signal");
  const double ps = Power(clean.samples);
  // snr = 10*log10(ps / (g^2 * pn))  =>  g = sqrt(ps/pn) * 10^(-snr/20)
  const double g =
      std::sqrt(ps / pn) * std::pow(10.0, -target_snr_db / 20.0);
  Waveform out = clean;
  for (size_t i = 0; i < n; ++i) out.samples[i] += g * fitted[i];
  return out;
}

Waveform Clip(const Waveform &w, double threshold) {
  if (threshold <= 0.0 || threshold > 1.0)
    throw Error(ErrorCode::kInvalidConfig, "clip threshold out of (0, 1]");
  double peak = 0.0;
  for (double v : w.samples) peak = std::max(peak, std::fabs(v));
  const double lim = threshold * peak;
  Waveform out = w;
  for (double &v : out.samples) v = std::clamp(v, -lim, lim);
  return out;
}

Waveform FrequencyMask(const Waveform &w, double low_hz, double high_hz) {
  const double nyquist = w.sample_rate / 2.0;
  if (!(low_hz >= 0.0 && low_hz < high_hz && high_hz <= nyquist))
    throw Error(ErrorCode::kInvalidBand, "band must satisfy 0 <= low < high <= nyquist");
  // Fixed power-of-two analysis window (about 32 ms at 16 kHz), independent
  // of the model front end.
  int fft = 512;
  while (fft < w.sample_rate / 31) fft <<= 1;
  const int hop = fft / 2;
  const size_t n = w.samples.size();
  const size_t padded = n + fft;  // cover the tail with zero padding
  const int frames = (int)((padded - fft) / hop) + 1;

  std::vector<double> win(fft);
  for (int i = 0; i < fft; ++i)
    win[i] = 0.54 - 0.46 * std::cos(2.0 * 3.14159265358979323846 * i / (fft - 1));

  int lo_bin = (int)std::ceil(low_hz * fft / w.sample_rate);
  int hi_bin = (int)std::floor(high_hz * fft / w.sample_rate);
  hi_bin = std::min(hi_bin, fft / 2);
  if (hi_bin < lo_bin) hi_bin = lo_bin;  // narrowest legal band: one bin

  std::vector<double> acc(padded, 0.0), norm(padded, 0.0);
  std::vector<std::complex<double>> buf(fft);
  for (int t = 0; t < frames; ++t) {
    const size_t off = (size_t)t * hop;
    for (int i = 0; i < fft; ++i) {
      double v = off + i < n ? w.samples[off + i] : 0.0;
      buf[i] = {v * win[i], 0.0};
    }
    Fft(&buf, false);
    for (int b = lo_bin; b <= hi_bin; ++b) {
      buf[b] = 0.0;
      if (b != 0 && b != fft / 2) buf[fft - b] = 0.0;
    }
    Fft(&buf, true);
    for (int i = 0; i < fft; ++i) {
      acc[off + i] += win[i] * buf[i].real();
      norm[off + i] += win[i] * win[i];
    }
  }
  Waveform out = w;
  for (size_t i = 0; i < n; ++i)
    out.samples[i] = norm[i] > 1e-12 ? acc[i] / norm[i] : 0.0;
  return out;
}

Waveform MuLaw(const Waveform &w, double mu, int quantize_levels) {
  if (mu <= 0.0)
    throw Error(ErrorCode::kInvalidConfig, "mu must be positive");
  if (quantize_levels < 2)
    throw Error(ErrorCode::kInvalidConfig, "need at least 2 quantize levels");
  const double denom = std::log1p(mu);
  Waveform out = w;
  for (double &v : out.samples) {
    double a = std::clamp(v, -1.0, 1.0);
    double y = std::copysign(std::log1p(mu * std::fabs(a)) / denom, a);
    double q = std::round((y + 1.0) / 2.0 * (quantize_levels - 1));
    y = q / (quantize_levels - 1) * 2.0 - 1.0;
    v = std::copysign((std::pow(1.0 + mu, std::fabs(y)) - 1.0) / mu, y);
  }
  return out;
}

Waveform ConvolveRir(const Waveform &w, const Waveform &rir) {
  if (rir.samples.empty())
    throw Error(ErrorCode::kInvalidConfig, "empty impulse response");
  Waveform out = w;
  kernels::ConvolveTruncated(w.samples.data(), w.samples.size(),
                             rir.samples.data(), rir.samples.size(),
                             out.samples.data());
  double in_peak = 0.0, out_peak = 0.0;
  for (double v : w.samples) in_peak = std::max(in_peak, std::fabs(v));
  for (double v : out.samples) out_peak = std::max(out_peak, std::fabs(v));
  if (out_peak > 0.0 && in_peak > 0.0) {
    const double g = in_peak / out_peak;
    for (double &v : out.samples) v *= g;
  }
  return out;
}

Waveform ApplyManipulation(DegradationKind kind, double level,
                           const Waveform &w) {
  switch (kind) {
    case DegradationKind::kClipping:
      return Clip(w, std::clamp(level, 1e-4, 1.0));
    case DegradationKind::kFrequencyMask: {
      const double nyquist = w.sample_rate / 2.0;
      const double span = nyquist - kMaskLowEdgeHz;
      const double width = std::clamp(level, 1e-3, 1.0) * span;
      return FrequencyMask(w, kMaskLowEdgeHz, kMaskLowEdgeHz + width);
    }
    case DegradationKind::kMuLaw: {
      const double mu = std::pow(10.0, std::clamp(level, 0.0, 1.0) * 3.8);
      return MuLaw(w, std::max(mu, 1.0), kMuLawQuantLevels);
    }
    default:
      throw Error(ErrorCode::kInvalidConfig,
                  "not a manipulation degradation");
  }
}

CalibratedLevel CalibrateLevel(DegradationKind kind, double target_sdr_db,
                               const Waveform &probe) {
  if (CategoryOf(kind) == PairCategory::kAdditive) {
    // Broadband noise is effectively orthogonal to the probe, so SI-SDR
    // tracks the SNR target analytically.
    return {target_sdr_db, false};
  }
  auto response = [&](double level) {
    Waveform d = ApplyManipulation(kind, level, probe);
    return SiSdr(probe, d).value_db;
  };
  // Severity 0..1; the response direction differs per kind, so scan a coarse
  // grid first and bisect inside the bracketing cell.  The scan also makes
  // mildly non-monotone responses (quantization steps) safe to search.
  constexpr int kGrid = 17;
  double levels[kGrid], values[kGrid];
  for (int i = 0; i < kGrid; ++i) {
    levels[i] = (double)i / (kGrid - 1);
    if (kind == DegradationKind::kClipping)
      levels[i] = std::max(levels[i], 1e-3);
    values[i] = response(levels[i]);
  }
  int best = 0;
  for (int i = 1; i < kGrid; ++i)
    if (std::fabs(values[i] - target_sdr_db) <
        std::fabs(values[best] - target_sdr_db))
      best = i;
  if (std::fabs(values[best] - target_sdr_db) <= kCalibrationTolDb)
    return {levels[best], false};

  int cell = -1;
  for (int i = 0; i + 1 < kGrid; ++i) {
    double a = values[i] - target_sdr_db, b = values[i + 1] - target_sdr_db;
    if (a == 0.0 || a * b < 0.0) {
      cell = i;
      break;
    }
  }
  if (cell < 0) {
    // Target outside the reachable range: report the nearest boundary.
    double lo = *std::min_element(values, values + kGrid);
    double hi = *std::max_element(values, values + kGrid);
    if (target_sdr_db < lo || target_sdr_db > hi) return {levels[best], true};
    throw Error(ErrorCode::kNonMonotoneResponse,
                "no grid cell brackets the calibration target");
  }
  double lo = levels[cell], hi = levels[cell + 1];
  double flo = values[cell];
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    double fmid = response(mid);
    if (std::fabs(fmid - target_sdr_db) <= kCalibrationTolDb)
      return {mid, false};
    if ((flo - target_sdr_db) * (fmid - target_sdr_db) <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fmid;
    }
  }
  throw Error(ErrorCode::kNonMonotoneResponse,
              "calibration bisection failed to converge");
}

PairSampler::PairSampler(std::vector<ManifestEntry> clean,
                         std::vector<ManifestEntry> noise,
                         std::vector<ManifestEntry> rir, SamplerConfig cfg)
    : clean_(std::move(clean)),
      noise_(std::move(noise)),
      rir_(std::move(rir)),
      cfg_(std::move(cfg)) {
  if (clean_.size() < 2)
    throw Error(ErrorCode::kEmptyManifest,
                "need at least two clean recordings");
  double total = 0.0;
  for (const auto &[name, weight] : cfg_.kind_weights) {
    if (weight <= 0.0) continue;
    DegradationKind kind = DegradationKindFromName(name);
    if (CategoryOf(kind) == PairCategory::kAdditive &&
        kind == DegradationKind::kAdditiveNoise && noise_.empty())
      throw Error(ErrorCode::kEmptyManifest,
                  "additive_noise kind requires a noise manifest");
    total += weight;
    kind_cdf_.push_back({kind, total});
  }
  if (kind_cdf_.empty())
    throw Error(ErrorCode::kInvalidConfig, "no degradation kinds enabled");
  for (auto &[kind, w] : kind_cdf_) w /= total;
}

namespace {

// Random excerpt of the requested length; silent excerpts are re-drawn.
Waveform DrawExcerpt(const ManifestEntry &entry, double seconds, Rng *rng) {
  Waveform full = LoadCanonical(entry.path);
  const size_t want = (size_t)std::llround(seconds * full.sample_rate);
  if (full.samples.size() < want)
    throw Error(ErrorCode::kSignalTooShort,
                entry.path + " shorter than the excerpt length");
  for (int attempt = 0; attempt < 16; ++attempt) {
    size_t margin = full.samples.size() - want;
    size_t off = margin == 0 ? 0 : rng->Integer(margin + 1);
    Waveform ex;
    ex.sample_rate = full.sample_rate;
    ex.source_id = entry.path;
    ex.samples.assign(full.samples.begin() + off,
                      full.samples.begin() + off + want);
    double p = 0.0;
    for (double v : ex.samples) p += v * v;
    if (p / want > kSilencePowerFloor || margin == 0) return ex;
  }
  throw Error(ErrorCode::kDegenerateClean,
              entry.path + " contains only silence");
}

Waveform GaussianNoise(size_t n, int rate, Rng *rng) {
  Waveform w;
  w.sample_rate = rate;
  w.source_id = "gaussian";
  w.samples.resize(n);
  for (auto &v : w.samples) v = 0.1 * rng->Gaussian();
  return w;
}

}  // namespace

PairSample PairSampler::Next(Rng *rng) const {
  const double u = rng->Uniform();
  DegradationKind kind = kind_cdf_.back().first;
  for (const auto &[k, c] : kind_cdf_)
    if (u <= c) {
      kind = k;
      break;
    }

  // Two distinct clean sources.
  size_t ci = rng->Integer(clean_.size());
  size_t cj;
  do {
    cj = rng->Integer(clean_.size());
  } while (clean_[cj].path == clean_[ci].path);
  Waveform s_i = DrawExcerpt(clean_[ci], cfg_.excerpt_s, rng);
  Waveform s_j = DrawExcerpt(clean_[cj], cfg_.excerpt_s, rng);

  PairSample out;
  out.category = CategoryOf(kind);
  out.spec_i.kind = kind;
  out.spec_j.kind = kind;

  if (out.category == PairCategory::kAdditive) {
    Waveform n_i, n_j;
    if (kind == DegradationKind::kGaussianNoise) {
      n_i = GaussianNoise(s_i.samples.size(), s_i.sample_rate, rng);
      n_j = GaussianNoise(s_j.samples.size(), s_j.sample_rate, rng);
    } else {
      // Two excerpts of one noise recording keep the pair's noise types
      // similar by construction.
      const ManifestEntry &ne = noise_[rng->Integer(noise_.size())];
      Waveform noise = LoadCanonical(ne.path);
      auto noise_excerpt = [&](size_t want) {
        Waveform w;
        w.sample_rate = noise.sample_rate;
        w.source_id = ne.path;
        if (noise.samples.size() <= want) {
          w.samples = noise.samples;
        } else {
          size_t off = rng->Integer(noise.samples.size() - want + 1);
          w.samples.assign(noise.samples.begin() + off,
                           noise.samples.begin() + off + want);
        }
        return w;
      };
      n_i = noise_excerpt(s_i.samples.size());
      n_j = noise_excerpt(s_j.samples.size());
    }
    for (int attempt = 0;; ++attempt) {
      double snr_i = rng->Uniform(kSnrLevelMin, kSnrLevelMax);
      double snr_j = rng->Uniform(kSnrLevelMin, kSnrLevelMax);
      Waveform x_i = AddNoiseAtSnr(s_i, n_i, snr_i);
      Waveform x_j = AddNoiseAtSnr(s_j, n_j, snr_j);
      double raw_i = SiSdr(s_i, x_i).value_db;
      double raw_j = SiSdr(s_j, x_j).value_db;
      if (raw_i == raw_j && attempt < 32) continue;  // resample tied levels
      out.x_i = std::move(x_i);
      out.x_j = std::move(x_j);
      out.snr_i = snr_i;
      out.snr_j = snr_j;
      out.spec_i.level = snr_i;
      out.spec_j.level = snr_j;
      out.sdr_i_raw = raw_i;
      out.sdr_j_raw = raw_j;
      break;
    }
  } else {
    for (int attempt = 0;; ++attempt) {
      double target_i = rng->Uniform(kSdrLevelMin, kSdrLevelMax);
      double target_j = rng->Uniform(kSdrLevelMin, kSdrLevelMax);
      CalibratedLevel li = CalibrateLevel(kind, target_i, s_i);
      CalibratedLevel lj = CalibrateLevel(kind, target_j, s_j);
      Waveform x_i = ApplyManipulation(kind, li.level, s_i);
      Waveform x_j = ApplyManipulation(kind, lj.level, s_j);
      double raw_i = SiSdr(s_i, x_i).value_db;
      double raw_j = SiSdr(s_j, x_j).value_db;
      if (raw_i == raw_j && attempt < 32) continue;
      out.x_i = std::move(x_i);
      out.x_j = std::move(x_j);
      out.spec_i.level = li.level;
      out.spec_j.level = lj.level;
      out.sdr_i_raw = raw_i;
      out.sdr_j_raw = raw_j;
      break;
    }
  }
  out.sdr_i = std::clamp(out.sdr_i_raw, kSdrLevelMin, kSdrLevelMax);
  out.sdr_j = std::clamp(out.sdr_j_raw, kSdrLevelMin, kSdrLevelMax);
  out.x_i.source_id = s_i.source_id;
  out.x_j.source_id = s_j.source_id;
  out.clean_i = std::move(s_i);
  out.clean_j = std::move(s_j);

  // Reverberation is realism augmentation applied after the labels are
  // measured.
  if (!rir_.empty() && cfg_.reverb_prob > 0.0) {
    auto maybe_reverb = [&](Waveform *x, DegradationSpec *spec) {
      if (rng->Uniform() >= cfg_.reverb_prob) return;
      const ManifestEntry &re = rir_[rng->Integer(rir_.size())];
      Waveform rir = LoadCanonical(re.path);
      std::string sid = x->source_id;
      *x = ConvolveRir(*x, rir);
      x->source_id = sid;
      spec->rir_id = re.path;
    };
    maybe_reverb(&out.x_i, &out.spec_i);
    maybe_reverb(&out.x_j, &out.spec_j);
  }
  return out;
}

}  // namespace noresqa
