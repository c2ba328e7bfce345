// include/noresqa/train.h

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

#ifndef NORESQA_TRAIN_H_
#define NORESQA_TRAIN_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "noresqa/degrade.h"
#include "noresqa/labels.h"
#include "noresqa/model.h"

namespace noresqa {

struct TrainConfig {
  double learning_rate = 1e-4;
  int batch_size = 32;
  int epochs = 50;           // the full-scale run uses 1000
  int pairs_per_epoch = 10000;
  int holdout_pairs = 64;
  uint64_t seed = 0;
  std::string optimizer = "adam";
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  bool grad_clip_enabled = false;
  double grad_clip_norm = 5.0;

  void Validate() const;
};

nlohmann::json TrainConfigToJson(const TrainConfig &cfg);
TrainConfig TrainConfigFromJson(const nlohmann::json &j);

struct LossBreakdown {
  double l_p = 0.0;
  double l_sdr = 0.0;
  std::optional<double> l_snr;
  double total = 0.0;
};

struct AdamState {
  std::vector<std::vector<double>> m, v;
  int64_t step = 0;

  static AdamState For(const Params &params);
};

// A featurized pair ready for the network.
struct TrainExample {
  Spectrogram spec_i, spec_j;
  PreferenceLabel pref;
  SmoothedLabel sdr_target;
  std::optional<SmoothedLabel> snr_target;
};

TrainExample MakeExample(const PairSample &pair, const StftConfig &stft_cfg,
                         int k_classes);

// Cross-entropy of the pooled preference distribution against the one-hot
// label (log argument floored at 1e-12).
double PreferenceLoss(const ModelOutputs &outputs, const PreferenceLabel &label);

// Cross-entropy of the pooled SI-SDR distribution against its smoothed
// target, plus the SNR term when a target exists (manipulation pairs train
// the SI-SDR head only).
double QuantificationLoss(const ModelOutputs &outputs,
                          const SmoothedLabel &sdr_target,
                          const std::optional<SmoothedLabel> &snr_target);

// Builds the train-mode graph for one example and returns the loss parts;
// when grads is non-null the backward pass fills one gradient vector per
// parameter tensor (zeros where no gradient flows).
LossBreakdown PairLossGradients(const TrainExample &ex, const ModelConfig &cfg,
                                const Params &params, Mode mode,
                                uint64_t dropout_seed, Gradients *grads);

// One Adam update over the batch-mean loss.  Deterministic given
// (cfg.seed, opt.step, batch); batch items are processed in parallel but
// reduced in index order.
LossBreakdown TrainStep(const std::vector<TrainExample> &batch, Params *params,
                        AdamState *opt, const ModelConfig &model_cfg,
                        const TrainConfig &cfg);

// Epoch loop over freshly sampled pairs.  Writes ckpt_epoch{N}.bin, a
// "latest" pointer file and metrics.jsonl under run_dir; resuming from a
// checkpoint continues bit-identically because every per-epoch stream is
// derived from (seed, epoch), not from the RNG history.
std::string Fit(const PairSampler &sampler, const ModelConfig &model_cfg,
                const TrainConfig &cfg, const StftConfig &stft_cfg,
                const std::string &run_dir,
                const std::string &resume_checkpoint = "");

}  // namespace noresqa

#endif  // NORESQA_TRAIN_H_
