// src/score.cc

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

#include "noresqa/score.h"

#include <algorithm>
#include <cmath>

namespace noresqa {

namespace {

constexpr double kScoreWindowS = 3.0;

std::vector<double> BinMidpoints(int k_classes) {
  BinningConfig bins = BinningConfig::ForSiSdr(k_classes);
  std::vector<double> mu(k_classes);
  for (int k = 1; k <= k_classes; ++k) mu[k - 1] = BinMidpoint(k, bins);
  return mu;
}

Waveform Canonicalize(const Waveform &w) {
  if (w.sample_rate == kCanonicalRate) return w;
  return Resample(w, kCanonicalRate);
}

std::vector<Waveform> SplitWindows(const Waveform &w) {
  const size_t win = (size_t)std::llround(kScoreWindowS * w.sample_rate);
  if (w.samples.size() < win)
    throw Error(ErrorCode::kSignalTooShort,
                "scoring needs at least 3 s of audio");
  const size_t hop = win / 2;
  std::vector<Waveform> out;
  for (size_t off = 0; off + win <= w.samples.size(); off += hop) {
    Waveform piece;
    piece.sample_rate = w.sample_rate;
    piece.source_id = w.source_id;
    piece.samples.assign(w.samples.begin() + off, w.samples.begin() + off + win);
    out.push_back(std::move(piece));
  }
  return out;
}

}  // namespace

NoresqaScore Noresqa(const Waveform &test, const Waveform &ref,
                     const ModelConfig &cfg, const Params &params) {
  cfg.Validate();
  const Waveform t16 = Canonicalize(test);
  const Waveform r16 = Canonicalize(ref);
  const std::vector<Waveform> tw = SplitWindows(t16);
  const std::vector<Waveform> rw = SplitWindows(r16);
  const std::vector<double> mu = BinMidpoints(cfg.k_classes);
  StftConfig stft_cfg;

  const size_t n = std::max(tw.size(), rw.size());
  double mag = 0.0;
  double p0 = 0.0, p1 = 0.0;
  for (size_t i = 0; i < n; ++i) {
    Spectrogram si = Stft(tw[i % tw.size()], stft_cfg);
    Spectrogram sj = Stft(rw[i % rw.size()], stft_cfg);
    ModelOutputs out = ForwardPair(si, sj, cfg, params, Mode::kEval);
    double m = 0.0;
    for (int k = 0; k < cfg.k_classes; ++k) m += out.sdr_pooled[k] * mu[k];
    mag += m / n;
    p0 += out.pref_pooled[0] / n;
    p1 += out.pref_pooled[1] / n;
  }
  NoresqaScore score;
  score.magnitude_db = mag;
  score.sign = p0 >= p1 ? NoresqaScore::Sign::kTestBetter
                        : NoresqaScore::Sign::kRefBetter;
  score.pref_confidence = std::max(p0, p1) / (p0 + p1);
  return score;
}

NmrScore NoresqaAvg(const Waveform &test, const std::vector<Waveform> &refs,
                    const ModelConfig &cfg, const Params &params) {
  if (refs.empty())
    throw Error(ErrorCode::kInvalidConfig, "need at least one reference");
  NmrScore out;
  Error last_error(ErrorCode::kInvalidConfig, "unset");
  bool have_error = false;
  for (const auto &ref : refs) {
    try {
      out.per_ref.push_back(Noresqa(test, ref, cfg, params));
    } catch (const Error &e) {
      last_error = e;
      have_error = true;
    }
  }
  if (out.per_ref.empty()) throw last_error;
  (void)have_error;

  double mag = 0.0;
  int votes_test = 0;
  for (const auto &s : out.per_ref) {
    mag += s.magnitude_db / out.per_ref.size();
    if (s.sign == NoresqaScore::Sign::kTestBetter) ++votes_test;
  }
  const int votes_ref = (int)out.per_ref.size() - votes_test;
  out.aggregate.magnitude_db = mag;
  if (votes_test == votes_ref) {
    out.aggregate.sign = NoresqaScore::Sign::kTestBetter;
    out.aggregate.pref_confidence = 0.5;
  } else {
    out.aggregate.sign = votes_test > votes_ref
                             ? NoresqaScore::Sign::kTestBetter
                             : NoresqaScore::Sign::kRefBetter;
    double conf = 0.0;
    int n = 0;
    for (const auto &s : out.per_ref)
      if (s.sign == out.aggregate.sign) {
        conf += s.pref_confidence;
        ++n;
      }
    out.aggregate.pref_confidence = conf / n;
  }
  return out;
}

std::vector<double> QualityEmbedding(const Waveform &x, const ModelConfig &cfg,
                                     const Params &params) {
  cfg.Validate();
  const Waveform w = Canonicalize(x);
  if (w.samples.size() <
      (size_t)std::llround(kScoreWindowS * w.sample_rate))
    throw Error(ErrorCode::kSignalTooShort,
                "embedding needs at least 3 s of audio");
  StftConfig stft_cfg;
  FrameEmbedding emb = Encode(Stft(w, stft_cfg), cfg, params);
  std::vector<double> mean(emb.dim, 0.0);
  for (int t = 0; t < emb.frames; ++t)
    for (int d = 0; d < emb.dim; ++d)
      mean[d] += emb.data[(size_t)t * emb.dim + d] / emb.frames;
  return mean;
}

double NoresqaLoss(const std::vector<double> &enhanced, int sample_rate,
                   const Waveform &nmr_clean, const ModelConfig &cfg,
                   const Params &params, std::vector<double> *grad_enhanced,
                   Gradients *param_grads) {
  cfg.Validate();
  if (sample_rate != kCanonicalRate)
    throw Error(ErrorCode::kInvalidConfig,
                "the differentiable path runs at the canonical rate");
  if (enhanced.size() < (size_t)std::llround(kScoreWindowS * sample_rate))
    throw Error(ErrorCode::kSignalTooShort,
                "loss needs at least 3 s of audio");
  Waveform ref = Canonicalize(nmr_clean);
  if (ref.samples.size() < enhanced.size())
    throw Error(ErrorCode::kSignalTooShort,
                "reference shorter than the enhanced signal");
  ref.samples.resize(enhanced.size());

  StftConfig stft_cfg;
  stft_cfg.Validate(sample_rate);
  const int frames =
      StftFrameCount(enhanced.size(), stft_cfg, sample_rate);
  if (frames <= 0)
    throw Error(ErrorCode::kSignalTooShort, "signal shorter than one window");
  const int bins = stft_cfg.n_bins_kept;

  // Waveform leaf -> differentiable spectrogram op.
  nn::Var wave = nn::Leaf({(int)enhanced.size()}, enhanced,
                          grad_enhanced != nullptr);
  const size_t n = enhanced.size();
  nn::Var spec = nn::MakeOpNode(
      {2, frames, bins}, {wave}, [=, wn = wave.node](nn::Node &node) {
        if (!wn->needs_grad) return;
        detail::StftAdjoint(node.grad.data(), node.val(), wn->val(), n,
                            sample_rate, stft_cfg, frames, wn->grad_data());
      });
  detail::StftFill(wave.val(), n, sample_rate, stft_cfg, frames,
                   spec.node->mutable_val());

  // Quality model frozen: parameters enter as constants.
  auto pvars = MakeParamVars(params, false);
  Spectrogram ref_spec = Stft(ref, stft_cfg);
  PairGraph g = BuildPairGraph(spec, SpectrogramConstant(ref_spec), cfg, pvars,
                               Mode::kEval, 0);
  nn::Var magnitude = nn::DotConst(g.sdr_pooled, BinMidpoints(cfg.k_classes));

  if (grad_enhanced) {
    nn::Backward(magnitude);
    grad_enhanced->assign(n, 0.0);
    if (!wave.node->grad.empty())
      *grad_enhanced = wave.node->grad;
  }
  if (param_grads) {
    param_grads->clear();
    for (const auto &pv : pvars)
      param_grads->emplace_back(pv.size(), 0.0);  // frozen: never touched
  }
  return magnitude.scalar();
}

}  // namespace noresqa
