// include/noresqa/model.h

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

#ifndef NORESQA_MODEL_H_
#define NORESQA_MODEL_H_

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "noresqa/autodiff.h"
#include "noresqa/dsp.h"

namespace noresqa {

// Two-input shared-encoder network: an inception feature block over the
// magnitude/phase spectrogram, a dilated TCN over time, and three
// convolutional heads (preference, SI-SDR quantification, SNR
// quantification).  The encoder is fully convolutional over time, so any
// frame count works; the frequency extent is fixed by the config.
//
// Frequency arithmetic: the 256 input bins are zero-padded to freq_pad and
// each inception block ends in a 1 x pool frequency max-pool, so the final
// frequency extent is freq_pad / pool^blocks.  The per-frame feature fed to
// the TCN flattens channels x final frequency.
struct ModelConfig {
  int freq_bins = 256;
  int freq_pad = 512;
  int inception_blocks = 4;
  int inception_f1 = 24;
  int inception_f3 = 32;
  int inception_f5 = 8;
  int pool = 4;
  std::vector<int> tcn_channels = {32, 64, 64, 128};
  std::vector<int> tcn_dilations = {2, 4, 8, 16};
  int tcn_kernel = 3;
  double dropout = 0.2;
  std::vector<int> pref_head = {32, 8, 2};
  std::vector<int> quant_head = {64, 50, 40};
  int head_kernel = 5;
  int k_classes = 40;
  double init_std = 0.01;

  int InceptionFilters() const {
    return inception_f1 + inception_f3 + inception_f5;
  }
  int FinalFreq() const;
  int TcnInputDim() const { return InceptionFilters() * FinalFreq(); }
  int EmbeddingDim() const { return tcn_channels.back(); }
  void Validate() const;

  // The architecture from the config defaults above.
  static ModelConfig Full() { return ModelConfig(); }
  // Desk-scale probe used by the training/evaluation test suites.
  static ModelConfig Desk();
  // Tiny config for finite-difference gradient checks.
  static ModelConfig Tiny();
};

nlohmann::json ModelConfigToJson(const ModelConfig &cfg);
ModelConfig ModelConfigFromJson(const nlohmann::json &j);

struct ParamTensor {
  std::string name;
  std::vector<int> dims;
  std::shared_ptr<std::vector<double>> data;

  size_t size() const {
    size_t s = 1;
    for (int d : dims) s *= (size_t)d;
    return s;
  }
};

struct Params {
  std::vector<ParamTensor> tensors;

  size_t TotalCount() const {
    size_t s = 0;
    for (const auto &t : tensors) s += t.size();
    return s;
  }
  const ParamTensor *Find(const std::string &name) const;
};

using Gradients = std::vector<std::vector<double>>;

enum class Mode { kTrain, kEval };

struct FrameEmbedding {
  int frames = 0;
  int dim = 0;
  std::vector<double> data;  // [T][dim]
};

struct ModelOutputs {
  int frames = 0;
  int k_classes = 0;
  std::vector<double> pref_frame;  // [T][2] probability rows
  std::vector<double> sdr_frame;   // [T][K]
  std::vector<double> snr_frame;   // [T][K]
  std::array<double, 2> pref_pooled{};
  std::vector<double> sdr_pooled;
  std::vector<double> snr_pooled;
};

// Gaussian-initialized parameters, identical for identical seeds.  All
// weights and biases are drawn from N(0, init_std^2); weight-norm gains are
// set to the row norms of their direction tensors so the effective weights
// at initialization equal the raw draws.
Params InitParams(const ModelConfig &cfg, uint64_t seed);

// Deep copy (checkpoint loading and tests).
Params CloneParams(const Params &p);

// Per-frame quality embedding: the TCN output, [T][embedding_dim].
FrameEmbedding Encode(const Spectrogram &spec, const ModelConfig &cfg,
                      const Params &params);

// Runs the shared encoder on both inputs, concatenates per-frame embeddings
// and applies the three heads.  Dropout is active only in train mode and is
// drawn deterministically from dropout_seed.
ModelOutputs ForwardPair(const Spectrogram &spec_i, const Spectrogram &spec_j,
                         const ModelConfig &cfg, const Params &params,
                         Mode mode, uint64_t dropout_seed = 0);

// Graph-level access for the training and scoring paths.
struct PairGraph {
  nn::Var emb_i, emb_j;          // [emb][T]
  nn::Var pref_frame, sdr_frame, snr_frame;  // softmax outputs [C][T]
  nn::Var pref_pooled, sdr_pooled, snr_pooled;  // [C]
};

std::vector<nn::Var> MakeParamVars(const Params &params, bool needs_grad);

nn::Var BuildEncoderGraph(const nn::Var &spec, const ModelConfig &cfg,
                          const std::vector<nn::Var> &pvars, size_t *cursor,
                          Mode mode, Rng *dropout_rng);

PairGraph BuildPairGraph(const nn::Var &spec_i, const nn::Var &spec_j,
                         const ModelConfig &cfg,
                         const std::vector<nn::Var> &pvars, Mode mode,
                         uint64_t dropout_seed);

nn::Var SpectrogramConstant(const Spectrogram &spec);

}  // namespace noresqa

#endif  // NORESQA_MODEL_H_
