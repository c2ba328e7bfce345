// src/train.cc

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

#include "noresqa/train.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "noresqa/checkpoint.h"

namespace noresqa {

void TrainConfig::Validate() const {
  if (learning_rate <= 0.0)
    throw Error(ErrorCode::kInvalidConfig, "learning_rate must be positive");
  if (batch_size < 1 || epochs < 1 || pairs_per_epoch < 1)
    throw Error(ErrorCode::kInvalidConfig, "counts must be positive");
  if (optimizer != "adam")
    throw Error(ErrorCode::kInvalidConfig, "unknown optimizer " + optimizer);
}

nlohmann::json TrainConfigToJson(const TrainConfig &cfg) {
  nlohmann::json j;
  j["learning_rate"] = cfg.learning_rate;
  j["batch_size"] = cfg.batch_size;
  j["epochs"] = cfg.epochs;
  j["pairs_per_epoch"] = cfg.pairs_per_epoch;
  j["holdout_pairs"] = cfg.holdout_pairs;
  j["seed"] = cfg.seed;
  j["optimizer"] = cfg.optimizer;
  j["adam_beta1"] = cfg.adam_beta1;
  j["adam_beta2"] = cfg.adam_beta2;
  j["adam_eps"] = cfg.adam_eps;
  j["grad_clip_enabled"] = cfg.grad_clip_enabled;
  j["grad_clip_norm"] = cfg.grad_clip_norm;
  return j;
}

TrainConfig TrainConfigFromJson(const nlohmann::json &j) {
  TrainConfig cfg;
  cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
  cfg.batch_size = j.value("batch_size", cfg.batch_size);
  cfg.epochs = j.value("epochs", cfg.epochs);
  cfg.pairs_per_epoch = j.value("pairs_per_epoch", cfg.pairs_per_epoch);
  cfg.holdout_pairs = j.value("holdout_pairs", cfg.holdout_pairs);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.optimizer = j.value("optimizer", cfg.optimizer);
  cfg.adam_beta1 = j.value("adam_beta1", cfg.adam_beta1);
  cfg.adam_beta2 = j.value("adam_beta2", cfg.adam_beta2);
  cfg.adam_eps = j.value("adam_eps", cfg.adam_eps);
  cfg.grad_clip_enabled = j.value("grad_clip_enabled", cfg.grad_clip_enabled);
  cfg.grad_clip_norm = j.value("grad_clip_norm", cfg.grad_clip_norm);
  cfg.Validate();
  return cfg;
}

AdamState AdamState::For(const Params &params) {
  AdamState s;
  for (const auto &t : params.tensors) {
    s.m.emplace_back(t.size(), 0.0);
    s.v.emplace_back(t.size(), 0.0);
  }
  return s;
}

TrainExample MakeExample(const PairSample &pair, const StftConfig &stft_cfg,
                         int k_classes) {
  TrainExample ex;
  ex.spec_i = Stft(pair.x_i, stft_cfg);
  ex.spec_j = Stft(pair.x_j, stft_cfg);
  ex.pref = MakePreferenceLabel(pair.sdr_i_raw, pair.sdr_j_raw);
  BinningConfig sdr_bins = BinningConfig::ForSiSdr(k_classes);
  ex.sdr_target =
      SmoothLabels(BinIndex(std::fabs(pair.sdr_i - pair.sdr_j), sdr_bins),
                   k_classes);
  if (pair.snr_i && pair.snr_j) {
    BinningConfig snr_bins = BinningConfig::ForSnr(k_classes);
    ex.snr_target =
        SmoothLabels(BinIndex(std::fabs(*pair.snr_i - *pair.snr_j), snr_bins),
                     k_classes);
  }
  return ex;
}

namespace {

double CrossEntropyOf(const double *p, const double *y, int n) {
  double loss = 0.0;
  for (int i = 0; i < n; ++i)
    loss -= y[i] * std::log(std::max(p[i], 1e-12));
  return loss;
}

}  // namespace

double PreferenceLoss(const ModelOutputs &outputs,
                      const PreferenceLabel &label) {
  return CrossEntropyOf(outputs.pref_pooled.data(), label.probs.data(), 2);
}

double QuantificationLoss(const ModelOutputs &outputs,
                          const SmoothedLabel &sdr_target,
                          const std::optional<SmoothedLabel> &snr_target) {
  double loss = CrossEntropyOf(outputs.sdr_pooled.data(),
                               sdr_target.probs.data(), outputs.k_classes);
  if (snr_target)
    loss += CrossEntropyOf(outputs.snr_pooled.data(),
                           snr_target->probs.data(), outputs.k_classes);
  return loss;
}

LossBreakdown PairLossGradients(const TrainExample &ex, const ModelConfig &cfg,
                                const Params &params, Mode mode,
                                uint64_t dropout_seed, Gradients *grads) {
  const bool want_grads = grads != nullptr;
  auto pvars = MakeParamVars(params, want_grads);
  PairGraph g =
      BuildPairGraph(SpectrogramConstant(ex.spec_i),
                     SpectrogramConstant(ex.spec_j), cfg, pvars, mode,
                     dropout_seed);
  nn::Var l_p = nn::CrossEntropy(
      g.pref_pooled, {ex.pref.probs[0], ex.pref.probs[1]});
  nn::Var l_sdr = nn::CrossEntropy(g.sdr_pooled, ex.sdr_target.probs);
  std::vector<nn::Var> parts = {l_p, l_sdr};
  nn::Var l_snr;
  if (ex.snr_target) {
    l_snr = nn::CrossEntropy(g.snr_pooled, ex.snr_target->probs);
    parts.push_back(l_snr);
  }
  nn::Var total = nn::SumScalars(parts);

  LossBreakdown out;
  out.l_p = l_p.scalar();
  out.l_sdr = l_sdr.scalar();
  if (ex.snr_target) out.l_snr = l_snr.scalar();
  out.total = total.scalar();

  if (want_grads) {
    nn::Backward(total);
    grads->clear();
    grads->reserve(pvars.size());
    for (const auto &pv : pvars) {
      if (pv.node->grad.empty())
        grads->emplace_back(pv.size(), 0.0);
      else
        grads->push_back(pv.node->grad);
    }
  }
  return out;
}

LossBreakdown TrainStep(const std::vector<TrainExample> &batch, Params *params,
                        AdamState *opt, const ModelConfig &model_cfg,
                        const TrainConfig &cfg) {
  if (batch.empty())
    throw Error(ErrorCode::kInvalidConfig, "empty training batch");
  const int b = (int)batch.size();
  std::vector<Gradients> sample_grads(b);
  std::vector<LossBreakdown> sample_loss(b);
  const uint64_t step_seed = Rng::Derive(cfg.seed, 0x57e9, (uint64_t)opt->step);

#pragma omp parallel for schedule(dynamic, 1)
  for (int s = 0; s < b; ++s)
    sample_loss[s] =
        PairLossGradients(batch[s], model_cfg, *params, Mode::kTrain,
                          Rng::Derive(step_seed, (uint64_t)s),
                          &sample_grads[s]);

  // Reduce in sample order so the result is independent of thread count.
  Gradients grads;
  for (int s = 0; s < b; ++s) {
    if (grads.empty()) {
      grads = std::move(sample_grads[s]);
    } else {
      for (size_t t = 0; t < grads.size(); ++t)
        for (size_t i = 0; i < grads[t].size(); ++i)
          grads[t][i] += sample_grads[s][t][i];
    }
  }
  const double inv_b = 1.0 / b;
  for (auto &gt : grads)
    for (double &v : gt) v *= inv_b;

  if (cfg.grad_clip_enabled) {
    double norm2 = 0.0;
    for (const auto &gt : grads)
      for (double v : gt) norm2 += v * v;
    const double norm = std::sqrt(norm2);
    if (norm > cfg.grad_clip_norm) {
      const double scale = cfg.grad_clip_norm / norm;
      for (auto &gt : grads)
        for (double &v : gt) v *= scale;
    }
  }

  // Adam with bias correction.
  opt->step += 1;
  const double b1 = cfg.adam_beta1, b2 = cfg.adam_beta2;
  const double bc1 = 1.0 - std::pow(b1, (double)opt->step);
  const double bc2 = 1.0 - std::pow(b2, (double)opt->step);
  for (size_t t = 0; t < grads.size(); ++t) {
    auto &theta = *params->tensors[t].data;
    auto &m = opt->m[t];
    auto &v = opt->v[t];
    for (size_t i = 0; i < theta.size(); ++i) {
      const double g = grads[t][i];
      m[i] = b1 * m[i] + (1.0 - b1) * g;
      v[i] = b2 * v[i] + (1.0 - b2) * g * g;
      theta[i] -= cfg.learning_rate * (m[i] / bc1) /
                  (std::sqrt(v[i] / bc2) + cfg.adam_eps);
    }
  }

  LossBreakdown mean;
  bool any_snr = false;
  double snr_sum = 0.0;
  for (const auto &l : sample_loss) {
    mean.l_p += l.l_p * inv_b;
    mean.l_sdr += l.l_sdr * inv_b;
    if (l.l_snr) {
      any_snr = true;
      snr_sum += *l.l_snr * inv_b;
    }
  }
  if (any_snr) mean.l_snr = snr_sum;
  mean.total = mean.l_p + mean.l_sdr + (mean.l_snr ? *mean.l_snr : 0.0);
  return mean;
}

namespace {

double HoldoutAccuracy(const std::vector<TrainExample> &holdout,
                       const ModelConfig &cfg, const Params &params) {
  if (holdout.empty()) return 0.0;
  int correct = 0;
  std::vector<int> hits(holdout.size(), 0);
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < (int)holdout.size(); ++i) {
    ModelOutputs out = ForwardPair(holdout[i].spec_i, holdout[i].spec_j, cfg,
                                   params, Mode::kEval);
    int pred = out.pref_pooled[0] >= out.pref_pooled[1] ? 0 : 1;
    int truth = holdout[i].pref.probs[0] >= 0.5 ? 0 : 1;
    hits[i] = pred == truth ? 1 : 0;
  }
  for (int h : hits) correct += h;
  return (double)correct / holdout.size();
}

}  // namespace

std::string Fit(const PairSampler &sampler, const ModelConfig &model_cfg,
                const TrainConfig &cfg, const StftConfig &stft_cfg,
                const std::string &run_dir,
                const std::string &resume_checkpoint) {
  model_cfg.Validate();
  cfg.Validate();
  std::filesystem::create_directories(run_dir);

  Params params;
  AdamState opt;
  int start_epoch = 0;
  if (!resume_checkpoint.empty()) {
    Checkpoint ckpt = LoadCheckpoint(resume_checkpoint);
    params = std::move(ckpt.params);
    opt = ckpt.has_opt ? std::move(ckpt.opt) : AdamState::For(params);
    if (!ckpt.has_opt) opt = AdamState::For(params);
    start_epoch = ckpt.epoch;
  } else {
    params = InitParams(model_cfg, cfg.seed);
    opt = AdamState::For(params);
  }

  // The held-out set is a fixed substream of the seed, so resumed runs
  // evaluate the identical set.
  std::vector<TrainExample> holdout;
  {
    Rng rng(Rng::Derive(cfg.seed, 0x401d));
    for (int i = 0; i < cfg.holdout_pairs; ++i)
      holdout.push_back(
          MakeExample(sampler.Next(&rng), stft_cfg, model_cfg.k_classes));
  }

  const std::string metrics_path = run_dir + "/metrics.jsonl";
  std::ofstream metrics(metrics_path,
                        start_epoch == 0 ? std::ios::trunc : std::ios::app);
  if (!metrics)
    throw Error(ErrorCode::kIoError, "cannot write " + metrics_path);

  std::string last_path;
  const int batches = std::max(1, cfg.pairs_per_epoch / cfg.batch_size);
  for (int epoch = start_epoch + 1; epoch <= cfg.epochs; ++epoch) {
    Rng rng(Rng::Derive(cfg.seed, 0xe90c, (uint64_t)epoch));
    LossBreakdown epoch_mean;
    bool any_snr = false;
    double snr_sum = 0.0;
    for (int bidx = 0; bidx < batches; ++bidx) {
      std::vector<TrainExample> batch;
      batch.reserve(cfg.batch_size);
      for (int i = 0; i < cfg.batch_size; ++i)
        batch.push_back(
            MakeExample(sampler.Next(&rng), stft_cfg, model_cfg.k_classes));
      LossBreakdown l = TrainStep(batch, &params, &opt, model_cfg, cfg);
      epoch_mean.l_p += l.l_p / batches;
      epoch_mean.l_sdr += l.l_sdr / batches;
      if (l.l_snr) {
        any_snr = true;
        snr_sum += *l.l_snr / batches;
      }
    }
    if (any_snr) epoch_mean.l_snr = snr_sum;
    epoch_mean.total = epoch_mean.l_p + epoch_mean.l_sdr +
                       (epoch_mean.l_snr ? *epoch_mean.l_snr : 0.0);

    const double acc = HoldoutAccuracy(holdout, model_cfg, params);
    nlohmann::json line;
    line["epoch"] = epoch;
    line["l_p"] = epoch_mean.l_p;
    line["l_sdr"] = epoch_mean.l_sdr;
    if (epoch_mean.l_snr)
      line["l_snr"] = *epoch_mean.l_snr;
    else
      line["l_snr"] = nullptr;
    line["total"] = epoch_mean.total;
    line["pref_accuracy"] = acc;
    metrics << line.dump() << "\n";
    metrics.flush();

    Checkpoint ckpt;
    ckpt.config = model_cfg;
    ckpt.params = CloneParams(params);
    ckpt.has_opt = true;
    ckpt.opt = opt;
    ckpt.seed = cfg.seed;
    ckpt.epoch = epoch;
    last_path = run_dir + "/ckpt_epoch" + std::to_string(epoch) + ".bin";
    SaveCheckpoint(last_path, ckpt);
    std::ofstream latest(run_dir + "/latest", std::ios::trunc);
    latest << "ckpt_epoch" << epoch << ".bin\n";
  }
  return last_path;
}

}  // namespace noresqa
