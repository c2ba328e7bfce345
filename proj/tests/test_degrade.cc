// tests/test_degrade.cc

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
#include <filesystem>

#include "noresqa/degrade.h"
#include "noresqa/dsp.h"
#include "noresqa/synth.h"

using namespace noresqa;

namespace {

constexpr double kPi = 3.14159265358979323846;

Waveform Tone(double freq, double seconds, int rate, double amp = 0.5) {
  Waveform w;
  w.sample_rate = rate;
  w.source_id = "tone";
  const size_t n = (size_t)std::llround(seconds * rate);
  w.samples.resize(n);
  for (size_t i = 0; i < n; ++i)
    w.samples[i] = amp * std::sin(2.0 * kPi * freq * i / rate);
  return w;
}

Waveform NoiseSig(size_t n, Rng *rng) {
  Waveform w;
  w.sample_rate = 16000;
  w.source_id = "noise";
  w.samples.resize(n);
  for (auto &v : w.samples) v = 0.2 * rng->Gaussian();
  return w;
}

double PowerOf(const Waveform &w) {
  double p = 0.0;
  for (double v : w.samples) p += v * v;
  return p;
}

const SynthCorpus &SharedCorpus() {
  static SynthCorpus corpus = [] {
    SynthCorpusConfig cfg;
    cfg.clean_files = 8;
    cfg.noise_files = 4;
    cfg.rir_files = 2;
    cfg.seed = 77;
    std::string dir =
        std::filesystem::temp_directory_path().string() + "/noresqa_degrade_corpus";
    return BuildSynthCorpus(dir, cfg);
  }();
  return corpus;
}

}  // namespace

TEST_CASE("add_noise_at_snr hits the target exactly") {
  Rng rng(41);
  Waveform clean = Tone(220.0, 1.0, 16000);
  Waveform noise = NoiseSig(16000, &rng);

  // Unit-power clean and noise at 0 dB leaves the noise gain at 1.
  Waveform unit_c = clean, unit_n = noise;
  double gc = 1.0 / std::sqrt(PowerOf(clean));
  double gn = 1.0 / std::sqrt(PowerOf(noise));
  for (double &v : unit_c.samples) v *= gc;
  for (double &v : unit_n.samples) v *= gn;
  Waveform mixed = AddNoiseAtSnr(unit_c, unit_n, 0.0);
  for (size_t i = 0; i < mixed.samples.size(); ++i)
    CHECK(mixed.samples[i] ==
          doctest::Approx(unit_c.samples[i] + unit_n.samples[i]).epsilon(1e-9));

  // +60 dB target multiplies the unit-power noise by 10^-3.
  Waveform quiet = AddNoiseAtSnr(unit_c, unit_n, 60.0);
  for (size_t i = 0; i < quiet.samples.size(); ++i)
    CHECK(quiet.samples[i] == doctest::Approx(unit_c.samples[i] +
                                              1e-3 * unit_n.samples[i])
                                  .epsilon(1e-9));

  // Round trip through the measure for 50 random targets.
  for (int i = 0; i < 50; ++i) {
    double target = rng.Uniform(-15.0, 60.0);
    Waveform x = AddNoiseAtSnr(clean, noise, target);
    CHECK(Snr(clean, x).value_db == doctest::Approx(target).epsilon(1e-8));
  }

  Waveform zeros;
  zeros.sample_rate = 16000;
  zeros.samples.assign(16000, 0.0);
  CHECK_THROWS_AS((void)AddNoiseAtSnr(clean, zeros, 0.0), Error);
}

TEST_CASE("noise shorter than clean is looped") {
  Rng rng(42);
  Waveform clean = Tone(180.0, 1.0, 16000);
  Waveform shortn = NoiseSig(3000, &rng);
  Waveform x = AddNoiseAtSnr(clean, shortn, 5.0);
  CHECK(x.samples.size() == clean.samples.size());
  CHECK(Snr(clean, x).value_db == doctest::Approx(5.0).epsilon(1e-8));
}

TEST_CASE("clip") {
  Waveform w = Tone(100.0, 0.5, 16000, 0.8);
  Waveform same = Clip(w, 1.0);
  for (size_t i = 0; i < w.samples.size(); ++i)
    CHECK(same.samples[i] == w.samples[i]);

  Waveform constant;
  constant.sample_rate = 16000;
  constant.samples.assign(100, 0.7);
  Waveform half = Clip(constant, 0.5);
  for (double v : half.samples) CHECK(v == doctest::Approx(0.35));

  // Oracle round trip: the clipped sine's SI-SDR matches the measure on the
  // pair, and clipping harder lowers it.
  Waveform clipped = Clip(w, 0.5);
  double sdr = SiSdr(w, clipped).value_db;
  CHECK(sdr == SiSdr(w, clipped).value_db);
  CHECK(SiSdr(w, Clip(w, 0.2)).value_db < sdr);
  CHECK_THROWS_AS((void)Clip(w, 0.0), Error);
}

TEST_CASE("frequency mask removes a tone band and spares others") {
  Waveform tone = Tone(1000.0, 1.0, 16000);
  Waveform masked = FrequencyMask(tone, 800.0, 1200.0);
  CHECK(masked.samples.size() == tone.samples.size());
  CHECK(PowerOf(masked) < 0.01 * PowerOf(tone));

  Waveform spared = FrequencyMask(tone, 2000.0, 4000.0);
  CHECK(SiSdr(tone, spared).value_db > 30.0);

  CHECK_THROWS_AS((void)FrequencyMask(tone, 1200.0, 800.0), Error);
  CHECK_THROWS_AS((void)FrequencyMask(tone, 0.0, 9000.0), Error);
  // The narrowest legal band still removes at least one bin.
  Waveform narrow = FrequencyMask(tone, 999.0, 1001.0);
  CHECK(PowerOf(narrow) < 0.5 * PowerOf(tone));
}

TEST_CASE("mu-law companding") {
  Waveform zero;
  zero.sample_rate = 16000;
  zero.samples.assign(64, 0.0);
  Waveform z = MuLaw(zero, 255.0, 16);
  for (double v : z.samples) CHECK(v == 0.0);

  // Many levels approach the identity.
  Rng rng(43);
  Waveform w = NoiseSig(4000, &rng);
  Waveform fine = MuLaw(w, 255.0, 1 << 16);
  double worst = 0.0;
  for (size_t i = 0; i < w.samples.size(); ++i)
    worst = std::max(worst, std::fabs(fine.samples[i] - w.samples[i]));
  CHECK(worst < 1e-3);

  Waveform speechish = SynthToneComplex(&rng, 1.0, 16000);
  Waveform coarse = MuLaw(speechish, 255.0, 16);
  double sdr = SiSdr(speechish, coarse).value_db;
  CHECK(sdr >= -15.0);
  CHECK(sdr <= 25.0);
  CHECK_THROWS_AS((void)MuLaw(w, 0.0, 16), Error);
  CHECK_THROWS_AS((void)MuLaw(w, 255.0, 1), Error);
}

TEST_CASE("rir convolution") {
  Waveform w = Tone(150.0, 0.5, 16000);
  Waveform impulse;
  impulse.sample_rate = 16000;
  impulse.samples = {1.0};
  Waveform same = ConvolveRir(w, impulse);
  for (size_t i = 0; i < w.samples.size(); ++i)
    CHECK(same.samples[i] == doctest::Approx(w.samples[i]).epsilon(1e-12));

  Waveform delayed;
  delayed.sample_rate = 16000;
  delayed.samples.assign(5, 0.0);
  delayed.samples[4] = 1.0;
  Waveform shifted = ConvolveRir(w, delayed);
  for (int i = 0; i < 4; ++i) CHECK(shifted.samples[i] == 0.0);
  for (size_t i = 4; i < w.samples.size(); ++i)
    CHECK(shifted.samples[i] == doctest::Approx(w.samples[i - 4]).epsilon(1e-9));

  // Two-tap oracle.
  Waveform taps;
  taps.sample_rate = 16000;
  taps.samples = {0.6, -0.3};
  Waveform out = ConvolveRir(w, taps);
  Waveform expect = w;
  for (size_t i = 0; i < w.samples.size(); ++i) {
    expect.samples[i] = 0.6 * w.samples[i];
    if (i > 0) expect.samples[i] += -0.3 * w.samples[i - 1];
  }
  double in_peak = 0.0, out_peak = 0.0;
  for (double v : w.samples) in_peak = std::max(in_peak, std::fabs(v));
  for (double v : expect.samples) out_peak = std::max(out_peak, std::fabs(v));
  const double norm = in_peak / out_peak;
  for (size_t i = 0; i < w.samples.size(); ++i)
    CHECK(out.samples[i] ==
          doctest::Approx(expect.samples[i] * norm).epsilon(1e-9));
}

TEST_CASE("calibration lands within tolerance or saturates") {
  Rng rng(44);
  Waveform sine = Tone(260.0, 1.5, 16000, 0.7);

  CalibratedLevel hi = CalibrateLevel(DegradationKind::kClipping, 25.0, sine);
  CHECK_FALSE(hi.saturated);
  CHECK(hi.level > 0.5);  // near-transparent clipping
  double sdr_hi =
      SiSdr(sine, ApplyManipulation(DegradationKind::kClipping, hi.level, sine))
          .value_db;
  CHECK(std::fabs(sdr_hi - 25.0) <= 0.5);

  CalibratedLevel lo = CalibrateLevel(DegradationKind::kClipping, -15.0, sine);
  if (!lo.saturated) {
    double sdr_lo =
        SiSdr(sine,
              ApplyManipulation(DegradationKind::kClipping, lo.level, sine))
            .value_db;
    CHECK(std::fabs(sdr_lo - (-15.0)) <= 0.5);
    CHECK(lo.level < hi.level);
  }

  // Noise kinds are analytic.
  CalibratedLevel g = CalibrateLevel(DegradationKind::kGaussianNoise, 7.5, sine);
  CHECK_FALSE(g.saturated);
  CHECK(g.level == 7.5);

  // A speech-like probe for the mask and mu-law kinds.
  Waveform speechish = SynthToneComplex(&rng, 1.5, 16000);
  for (DegradationKind kind :
       {DegradationKind::kFrequencyMask, DegradationKind::kMuLaw}) {
    CalibratedLevel cal = CalibrateLevel(kind, 10.0, speechish);
    if (!cal.saturated) {
      double sdr =
          SiSdr(speechish, ApplyManipulation(kind, cal.level, speechish))
              .value_db;
      CHECK(std::fabs(sdr - 10.0) <= 0.5);
    }
  }
}

TEST_CASE("sampler is deterministic per seed") {
  const SynthCorpus &corpus = SharedCorpus();
  SamplerConfig cfg;
  cfg.excerpt_s = 1.0;
  PairSampler sampler(corpus.clean, corpus.noise, corpus.rir, cfg);
  Rng a(123), b(123);
  for (int i = 0; i < 3; ++i) {
    PairSample pa = sampler.Next(&a);
    PairSample pb = sampler.Next(&b);
    CHECK(pa.x_i.samples == pb.x_i.samples);
    CHECK(pa.x_j.samples == pb.x_j.samples);
    CHECK(pa.sdr_i == pb.sdr_i);
    CHECK(pa.snr_i == pb.snr_i);
  }
}

TEST_CASE("sampler invariants") {
  const SynthCorpus &corpus = SharedCorpus();
  SamplerConfig cfg;
  cfg.excerpt_s = 1.0;
  cfg.kind_weights = {{"additive_noise", 0.5}, {"clipping", 0.5}};
  PairSampler sampler(corpus.clean, corpus.noise, corpus.rir, cfg);
  Rng rng(7);
  int additive_seen = 0, manipulation_seen = 0;
  for (int i = 0; i < 24; ++i) {
    PairSample p = sampler.Next(&rng);
    // Non-matching by construction.
    CHECK(p.x_i.source_id != p.x_j.source_id);
    CHECK(p.spec_i.kind == p.spec_j.kind);
    if (p.category == PairCategory::kAdditive) {
      ++additive_seen;
      REQUIRE(p.snr_i.has_value());
      REQUIRE(p.snr_j.has_value());
      CHECK(*p.snr_i >= kSnrLevelMin);
      CHECK(*p.snr_i <= kSnrLevelMax);
      // Label round trip against the measure.
      CHECK(Snr(p.clean_i, p.x_i).value_db ==
            doctest::Approx(*p.snr_i).epsilon(1e-5));
      CHECK(Snr(p.clean_j, p.x_j).value_db ==
            doctest::Approx(*p.snr_j).epsilon(1e-5));
    } else {
      ++manipulation_seen;
      CHECK_FALSE(p.snr_i.has_value());
      CHECK_FALSE(p.snr_j.has_value());
    }
    CHECK(p.sdr_i >= kSdrLevelMin);
    CHECK(p.sdr_i <= kSdrLevelMax);
    CHECK(p.sdr_j >= kSdrLevelMin);
    CHECK(p.sdr_j <= kSdrLevelMax);
    CHECK(SiSdr(p.clean_i, p.x_i).value_db ==
          doctest::Approx(p.sdr_i_raw).epsilon(1e-9));
    CHECK(p.sdr_i_raw != p.sdr_j_raw);
  }
  CHECK(additive_seen > 0);
  CHECK(manipulation_seen > 0);
}

TEST_CASE("additive snr levels stay uniform (KS test)") {
  const SynthCorpus &corpus = SharedCorpus();
  SamplerConfig cfg;
  cfg.excerpt_s = 0.6;
  PairSampler sampler(corpus.clean, corpus.noise, {}, cfg);
  Rng rng(99);
  std::vector<double> levels;
  for (int i = 0; i < 500; ++i) {
    PairSample p = sampler.Next(&rng);
    levels.push_back(*p.snr_i);
    levels.push_back(*p.snr_j);
  }
  std::sort(levels.begin(), levels.end());
  const double n = (double)levels.size();
  double d = 0.0;
  for (size_t i = 0; i < levels.size(); ++i) {
    double u = (levels[i] - kSnrLevelMin) / (kSnrLevelMax - kSnrLevelMin);
    d = std::max(d, std::fabs(u - (i + 1) / n));
    d = std::max(d, std::fabs(u - i / n));
  }
  // Asymptotic Kolmogorov p-value.
  const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k)
    p += 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  CHECK(p > 0.01);
}

TEST_CASE("reverb is applied after labels") {
  const SynthCorpus &corpus = SharedCorpus();
  SamplerConfig cfg;
  cfg.excerpt_s = 1.0;
  cfg.reverb_prob = 1.0;
  PairSampler sampler(corpus.clean, corpus.noise, corpus.rir, cfg);
  Rng rng(5);
  PairSample p = sampler.Next(&rng);
  REQUIRE(p.spec_i.rir_id.has_value());
  // The stored snr was measured pre-reverb, so recomputing it on the
  // reverberated output must disagree.
  double post = Snr(p.clean_i, p.x_i).value_db;
  CHECK(std::fabs(post - *p.snr_i) > 1e-3);
}

TEST_CASE("empty manifests are rejected") {
  SamplerConfig cfg;
  CHECK_THROWS_AS(PairSampler({}, {}, {}, cfg), Error);
}
