// include/noresqa/score.h

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

#ifndef NORESQA_SCORE_H_
#define NORESQA_SCORE_H_

#include <vector>

#include "noresqa/labels.h"
#include "noresqa/model.h"
#include "noresqa/train.h"

namespace noresqa {

// Relative quality of a test signal against one reference: the magnitude is
// the expected |delta SI-SDR| under the SI-SDR head's pooled distribution
// (bin midpoints as class values), the sign comes from the preference head.
struct NoresqaScore {
  enum class Sign { kTestBetter, kRefBetter };
  double magnitude_db = 0.0;
  Sign sign = Sign::kTestBetter;
  double pref_confidence = 0.5;
};

struct NmrScore {
  NoresqaScore aggregate;
  std::vector<NoresqaScore> per_ref;
};

// Inputs must be at least 3 s at the canonical rate; longer inputs are split
// into 3 s windows with 50% overlap and the per-window outputs averaged.
NoresqaScore Noresqa(const Waveform &test, const Waveform &ref,
                     const ModelConfig &cfg, const Params &params);

// Mean magnitude over the references, sign by majority vote (ties resolve to
// test_better at confidence 0.5).  References that fail to score are skipped
// as long as at least one succeeds.
NmrScore NoresqaAvg(const Waveform &test, const std::vector<Waveform> &refs,
                    const ModelConfig &cfg, const Params &params);

// Temporal mean of the frame embeddings.
std::vector<double> QualityEmbedding(const Waveform &x, const ModelConfig &cfg,
                                     const Params &params);

// Differentiable score magnitude for enhancement-style pretraining: the
// quality model is frozen and the gradient flows to the enhanced samples
// only.  When grad_enhanced is non-null it receives d magnitude / d sample.
// When param_grads is non-null it is filled with one all-zero vector per
// parameter tensor (the freeze contract).
double NoresqaLoss(const std::vector<double> &enhanced, int sample_rate,
                   const Waveform &nmr_clean, const ModelConfig &cfg,
                   const Params &params, std::vector<double> *grad_enhanced,
                   Gradients *param_grads = nullptr);

}  // namespace noresqa

#endif  // NORESQA_SCORE_H_
