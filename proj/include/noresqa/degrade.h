// include/noresqa/degrade.h

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

#ifndef NORESQA_DEGRADE_H_
#define NORESQA_DEGRADE_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "noresqa/audio_io.h"
#include "noresqa/rng.h"

namespace noresqa {

// Training level ranges.  Additive noise is drawn at SNR in
// [kSnrLevelMin, kSnrLevelMax]; manipulation degradations are calibrated so
// the resulting SI-SDR lies in [kSdrLevelMin, kSdrLevelMax].
constexpr double kSnrLevelMin = -15.0;
constexpr double kSnrLevelMax = 60.0;
constexpr double kSdrLevelMin = -15.0;
constexpr double kSdrLevelMax = 25.0;

enum class DegradationKind {
  kAdditiveNoise,
  kClipping,
  kFrequencyMask,
  kMuLaw,
  kGaussianNoise,
};

enum class PairCategory { kAdditive, kManipulation };

const char *DegradationKindName(DegradationKind kind);
DegradationKind DegradationKindFromName(const std::string &name);
PairCategory CategoryOf(DegradationKind kind);

struct DegradationSpec {
  DegradationKind kind = DegradationKind::kAdditiveNoise;
  // Target SNR in dB for the noise kinds; kind-specific severity for the
  // manipulation kinds (see CalibrateLevel).
  double level = 0.0;
  std::optional<std::string> rir_id;
};

// Two degraded excerpts from two different clean sources plus their quality
// labels.  Stored sdr labels are clamped to the SI-SDR level range; the raw
// measured values are kept alongside because the preference comparison is
// made on the continuous (unclamped) measures, where exact ties have
// probability zero.
struct PairSample {
  Waveform x_i, x_j;
  Waveform clean_i, clean_j;  // pre-degradation excerpts (not serialized)
  std::optional<double> snr_i, snr_j;
  double sdr_i = 0.0, sdr_j = 0.0;          // clamped to [-15, 25]
  double sdr_i_raw = 0.0, sdr_j_raw = 0.0;  // as measured
  PairCategory category = PairCategory::kAdditive;
  DegradationSpec spec_i, spec_j;
};

struct SamplerConfig {
  double excerpt_s = 3.0;
  double reverb_prob = 0.0;
  std::map<std::string, double> kind_weights = {{"additive_noise", 1.0}};
  uint64_t seed = 0;
};

SamplerConfig SamplerConfigFromJsonFile(const std::string &path);

// clean + g*noise with g solving the SNR power equation exactly.  The noise
// is looped or truncated to the clean length.
Waveform AddNoiseAtSnr(const Waveform &clean, const Waveform &noise,
                       double target_snr_db);

// Hard limiting at threshold * max|w|.
Waveform Clip(const Waveform &w, double threshold);

// STFT-domain zeroing of [low_hz, high_hz], resynthesized by weighted
// overlap-add; output length equals input length.
Waveform FrequencyMask(const Waveform &w, double low_hz, double high_hz);

// Compand, uniformly quantize, inverse-compand.
Waveform MuLaw(const Waveform &w, double mu, int quantize_levels);

// Full convolution truncated to the input length, peak-normalized to the
// input peak.
Waveform ConvolveRir(const Waveform &w, const Waveform &rir);

// Severity parameterization used by CalibrateLevel and the sampler:
//   clipping        level in (0, 1]   = threshold fraction
//   frequency_mask  level in [0, 1]   = masked fraction of [300 Hz, Nyquist)
//   mu_law          level in [0, 1]   = log-scale mu in [1, 10^3.8], 16 levels
Waveform ApplyManipulation(DegradationKind kind, double level,
                           const Waveform &w);

struct CalibratedLevel {
  double level = 0.0;
  bool saturated = false;
};

// Searches the severity parameter until SiSdr(probe, degraded) is within
// 0.5 dB of the target.  Noise kinds are analytic (level == target).  When
// the target is outside the reachable response range the boundary level is
// returned with the saturated flag set.
CalibratedLevel CalibrateLevel(DegradationKind kind, double target_sdr_db,
                               const Waveform &probe);

// Self-supervised pair synthesis: two distinct clean sources, the same
// degradation kind at independent levels, labels measured before optional
// reverberation.
class PairSampler {
 public:
  PairSampler(std::vector<ManifestEntry> clean, std::vector<ManifestEntry> noise,
              std::vector<ManifestEntry> rir, SamplerConfig cfg);

  PairSample Next(Rng *rng) const;

  const SamplerConfig &config() const { return cfg_; }

 private:
  std::vector<ManifestEntry> clean_, noise_, rir_;
  SamplerConfig cfg_;
  std::vector<std::pair<DegradationKind, double>> kind_cdf_;
};

}  // namespace noresqa

#endif  // NORESQA_DEGRADE_H_
