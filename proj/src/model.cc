// src/model.cc

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

#include "noresqa/model.h"

#include <cmath>

namespace noresqa {

int ModelConfig::FinalFreq() const {
  int f = freq_pad;
  for (int b = 0; b < inception_blocks; ++b) {
    if (f % pool != 0) return 0;
    f /= pool;
  }
  return f;
}

void ModelConfig::Validate() const {
  if (freq_bins <= 0 || freq_pad < freq_bins)
    throw Error(ErrorCode::kInvalidConfig, "freq_pad must cover freq_bins");
  if (inception_blocks < 1 || InceptionFilters() < 1)
    throw Error(ErrorCode::kInvalidConfig, "empty feature block");
  if (FinalFreq() < 1)
    throw Error(ErrorCode::kInvalidConfig,
                "pool does not evenly divide freq_pad across blocks");
  if (tcn_channels.empty() || tcn_channels.size() != tcn_dilations.size())
    throw Error(ErrorCode::kInvalidConfig, "tcn channel/dilation mismatch");
  if (pref_head.empty() || pref_head.back() != 2)
    throw Error(ErrorCode::kInvalidConfig, "preference head must end in 2");
  if (quant_head.empty() || quant_head.back() != k_classes)
    throw Error(ErrorCode::kInvalidConfig,
                "quantification head must end in k_classes");
  if (dropout < 0.0 || dropout >= 1.0)
    throw Error(ErrorCode::kInvalidConfig, "dropout out of [0, 1)");
  if (tcn_kernel % 2 == 0 || head_kernel % 2 == 0)
    throw Error(ErrorCode::kInvalidConfig, "kernels must be odd");
  if (init_std <= 0.0)
    throw Error(ErrorCode::kInvalidConfig, "init_std must be positive");
}

ModelConfig ModelConfig::Desk() {
  ModelConfig cfg;
  cfg.inception_blocks = 2;
  cfg.inception_f1 = 4;
  cfg.inception_f3 = 6;
  cfg.inception_f5 = 2;
  cfg.pool = 8;
  cfg.tcn_channels = {24, 48};
  cfg.tcn_dilations = {2, 4};
  cfg.pref_head = {16, 8, 2};
  cfg.quant_head = {32, 40};
  return cfg;
}

ModelConfig ModelConfig::Tiny() {
  ModelConfig cfg;
  cfg.freq_pad = 256;
  cfg.inception_blocks = 1;
  cfg.inception_f1 = 1;
  cfg.inception_f3 = 1;
  cfg.inception_f5 = 0;
  cfg.pool = 4;
  cfg.tcn_channels = {8};
  cfg.tcn_dilations = {2};
  cfg.pref_head = {4, 2};
  cfg.quant_head = {8, 4};
  cfg.k_classes = 4;
  return cfg;
}

nlohmann::json ModelConfigToJson(const ModelConfig &cfg) {
  nlohmann::json j;
  j["freq_bins"] = cfg.freq_bins;
  j["freq_pad"] = cfg.freq_pad;
  j["inception_blocks"] = cfg.inception_blocks;
  j["inception_f1"] = cfg.inception_f1;
  j["inception_f3"] = cfg.inception_f3;
  j["inception_f5"] = cfg.inception_f5;
  j["pool"] = cfg.pool;
  j["tcn_channels"] = cfg.tcn_channels;
  j["tcn_dilations"] = cfg.tcn_dilations;
  j["tcn_kernel"] = cfg.tcn_kernel;
  j["dropout"] = cfg.dropout;
  j["pref_head"] = cfg.pref_head;
  j["quant_head"] = cfg.quant_head;
  j["head_kernel"] = cfg.head_kernel;
  j["k_classes"] = cfg.k_classes;
  j["init_std"] = cfg.init_std;
  return j;
}

ModelConfig ModelConfigFromJson(const nlohmann::json &j) {
  ModelConfig cfg;
  cfg.freq_bins = j.value("freq_bins", cfg.freq_bins);
  cfg.freq_pad = j.value("freq_pad", cfg.freq_pad);
  cfg.inception_blocks = j.value("inception_blocks", cfg.inception_blocks);
  cfg.inception_f1 = j.value("inception_f1", cfg.inception_f1);
  cfg.inception_f3 = j.value("inception_f3", cfg.inception_f3);
  cfg.inception_f5 = j.value("inception_f5", cfg.inception_f5);
  cfg.pool = j.value("pool", cfg.pool);
  if (j.contains("tcn_channels"))
    cfg.tcn_channels = j["tcn_channels"].get<std::vector<int>>();
  if (j.contains("tcn_dilations"))
    cfg.tcn_dilations = j["tcn_dilations"].get<std::vector<int>>();
  cfg.tcn_kernel = j.value("tcn_kernel", cfg.tcn_kernel);
  cfg.dropout = j.value("dropout", cfg.dropout);
  if (j.contains("pref_head"))
    cfg.pref_head = j["pref_head"].get<std::vector<int>>();
  if (j.contains("quant_head"))
    cfg.quant_head = j["quant_head"].get<std::vector<int>>();
  cfg.head_kernel = j.value("head_kernel", cfg.head_kernel);
  cfg.k_classes = j.value("k_classes", cfg.k_classes);
  cfg.init_std = j.value("init_std", cfg.init_std);
  cfg.Validate();
  return cfg;
}

const ParamTensor *Params::Find(const std::string &name) const {
  for (const auto &t : tensors)
    if (t.name == name) return &t;
  return nullptr;
}

namespace {

// The parameter inventory is walked in one fixed order everywhere:
// inception blocks (w1,b1,w3,b3,w5,b5), TCN blocks (conv1.v,g,b, conv2.v,g,b,
// down.w,b when channels change), then the pref/sdr/snr heads (w,b per
// layer).  InitParams allocates along this walk; the graph builders consume
// pvars along it with a cursor and assert full consumption.

void AppendTensor(Params *out, Rng *rng, double std, const std::string &name,
                  std::vector<int> dims) {
  ParamTensor t;
  t.name = name;
  t.dims = std::move(dims);
  auto data = std::make_shared<std::vector<double>>(t.size());
  for (auto &v : *data) v = rng->Gaussian() * std;
  t.data = std::move(data);
  out->tensors.push_back(std::move(t));
}

void AppendGain(Params *out, const std::string &name, int rows) {
  const ParamTensor &v = out->tensors.back();
  ParamTensor t;
  t.name = name;
  t.dims = {rows};
  auto data = std::make_shared<std::vector<double>>(rows);
  const size_t cols = v.size() / rows;
  for (int r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (size_t j = 0; j < cols; ++j) {
      double x = (*v.data)[(size_t)r * cols + j];
      acc += x * x;
    }
    (*data)[r] = std::sqrt(std::max(acc, 1e-30));
  }
  t.data = std::move(data);
  out->tensors.push_back(std::move(t));
}

}  // namespace

Params InitParams(const ModelConfig &cfg, uint64_t seed) {
  cfg.Validate();
  Params params;
  Rng rng(Rng::Derive(seed, 0x1a17));
  int in_ch = 2;
  for (int b = 0; b < cfg.inception_blocks; ++b) {
    std::string p = "inc" + std::to_string(b + 1) + ".";
    if (cfg.inception_f1 > 0) {
      AppendTensor(&params, &rng, cfg.init_std, p + "w1",
                   {cfg.inception_f1, in_ch, 1, 1});
      AppendTensor(&params, &rng, cfg.init_std, p + "b1", {cfg.inception_f1});
    }
    if (cfg.inception_f3 > 0) {
      AppendTensor(&params, &rng, cfg.init_std, p + "w3",
                   {cfg.inception_f3, in_ch, 3, 3});
      AppendTensor(&params, &rng, cfg.init_std, p + "b3", {cfg.inception_f3});
    }
    if (cfg.inception_f5 > 0) {
      AppendTensor(&params, &rng, cfg.init_std, p + "w5",
                   {cfg.inception_f5, in_ch, 5, 5});
      AppendTensor(&params, &rng, cfg.init_std, p + "b5", {cfg.inception_f5});
    }
    in_ch = cfg.InceptionFilters();
  }
  int tcn_in = cfg.TcnInputDim();
  for (size_t b = 0; b < cfg.tcn_channels.size(); ++b) {
    std::string p = "tcn" + std::to_string(b + 1) + ".";
    const int out_ch = cfg.tcn_channels[b];
    const int k = cfg.tcn_kernel;
    AppendTensor(&params, &rng, cfg.init_std, p + "conv1.v",
                 {out_ch, tcn_in, k});
    AppendGain(&params, p + "conv1.g", out_ch);
    AppendTensor(&params, &rng, cfg.init_std, p + "conv1.b", {out_ch});
    AppendTensor(&params, &rng, cfg.init_std, p + "conv2.v",
                 {out_ch, out_ch, k});
    AppendGain(&params, p + "conv2.g", out_ch);
    AppendTensor(&params, &rng, cfg.init_std, p + "conv2.b", {out_ch});
    if (tcn_in != out_ch) {
      AppendTensor(&params, &rng, cfg.init_std, p + "down.w",
                   {out_ch, tcn_in, 1});
      AppendTensor(&params, &rng, cfg.init_std, p + "down.b", {out_ch});
    }
    tcn_in = out_ch;
  }
  const int cat = 2 * cfg.EmbeddingDim();
  const char *head_names[3] = {"pref", "sdr", "snr"};
  const std::vector<int> *head_dims[3] = {&cfg.pref_head, &cfg.quant_head,
                                          &cfg.quant_head};
  for (int h = 0; h < 3; ++h) {
    int prev = cat;
    for (size_t l = 0; l < head_dims[h]->size(); ++l) {
      std::string p = std::string(head_names[h]) + std::to_string(l + 1) + ".";
      int ch = (*head_dims[h])[l];
      AppendTensor(&params, &rng, cfg.init_std, p + "w",
                   {ch, prev, cfg.head_kernel});
      AppendTensor(&params, &rng, cfg.init_std, p + "b", {ch});
      prev = ch;
    }
  }
  return params;
}

Params CloneParams(const Params &p) {
  Params out;
  for (const auto &t : p.tensors) {
    ParamTensor c;
    c.name = t.name;
    c.dims = t.dims;
    c.data = std::make_shared<std::vector<double>>(*t.data);
    out.tensors.push_back(std::move(c));
  }
  return out;
}

std::vector<nn::Var> MakeParamVars(const Params &params, bool needs_grad) {
  std::vector<nn::Var> vars;
  vars.reserve(params.tensors.size());
  for (const auto &t : params.tensors)
    vars.push_back(nn::SharedLeaf(
        t.dims, std::shared_ptr<const std::vector<double>>(t.data),
        needs_grad));
  return vars;
}

nn::Var SpectrogramConstant(const Spectrogram &spec) {
  return nn::Constant({2, spec.frames, spec.bins}, spec.data);
}

nn::Var BuildEncoderGraph(const nn::Var &spec, const ModelConfig &cfg,
                          const std::vector<nn::Var> &pvars, size_t *cursor,
                          Mode mode, Rng *dropout_rng) {
  if (spec.dims().size() != 3 || spec.dims()[0] != 2 ||
      spec.dims()[2] != cfg.freq_bins)
    throw Error(ErrorCode::kShapeMismatch,
                "spectrogram must be [2][T][" + std::to_string(cfg.freq_bins) +
                    "]");
  const bool train = mode == Mode::kTrain;
  auto next = [&]() -> const nn::Var & { return pvars.at((*cursor)++); };

  nn::Var x = nn::PadFreq(spec, cfg.freq_pad);

  // Feature-extraction block: parallel 1x1/3x3/5x5 towers, concatenated,
  // then a frequency max-pool.
  for (int b = 0; b < cfg.inception_blocks; ++b) {
    std::vector<nn::Var> towers;
    if (cfg.inception_f1 > 0) {
      const nn::Var &w = next(), &bias = next();
      towers.push_back(nn::Relu(nn::Conv2d(x, w, bias, 1)));
    }
    if (cfg.inception_f3 > 0) {
      const nn::Var &w = next(), &bias = next();
      towers.push_back(nn::Relu(nn::Conv2d(x, w, bias, 3)));
    }
    if (cfg.inception_f5 > 0) {
      const nn::Var &w = next(), &bias = next();
      towers.push_back(nn::Relu(nn::Conv2d(x, w, bias, 5)));
    }
    nn::Var cat = towers[0];
    for (size_t i = 1; i < towers.size(); ++i)
      cat = nn::ConcatChannels(cat, towers[i]);
    x = nn::MaxPoolFreq(cat, cfg.pool);
  }

  nn::Var h = nn::FlattenChannelFreq(x);

  // Temporal-learning block: per block two weight-normalized dilated
  // convolutions with ReLU + dropout, and a residual connection (1x1
  // projection when the channel count changes).
  int tcn_in = cfg.TcnInputDim();
  for (size_t b = 0; b < cfg.tcn_channels.size(); ++b) {
    const int out_ch = cfg.tcn_channels[b];
    const int dil = cfg.tcn_dilations[b];
    const nn::Var &v1 = next(), &g1 = next(), &b1 = next();
    const nn::Var &v2 = next(), &g2 = next(), &b2 = next();
    nn::Var w1 = nn::WeightNorm(v1, g1);
    nn::Var w2 = nn::WeightNorm(v2, g2);
    nn::Var y =
        nn::Dropout(nn::Relu(nn::Conv1d(h, w1, b1, cfg.tcn_kernel, dil)),
                    cfg.dropout, dropout_rng, train);
    y = nn::Dropout(nn::Relu(nn::Conv1d(y, w2, b2, cfg.tcn_kernel, dil)),
                    cfg.dropout, dropout_rng, train);
    nn::Var res = h;
    if (tcn_in != out_ch) {
      const nn::Var &wd = next(), &bd = next();
      res = nn::Conv1d(h, wd, bd, 1, 1);
    }
    h = nn::Relu(nn::Add(y, res));
    tcn_in = out_ch;
  }
  return h;
}

namespace {

nn::Var BuildHead(const nn::Var &cat, const std::vector<int> &channels,
                  const ModelConfig &cfg, const std::vector<nn::Var> &pvars,
                  size_t *cursor) {
  nn::Var h = cat;
  for (size_t l = 0; l < channels.size(); ++l) {
    const nn::Var &w = pvars.at((*cursor)++);
    const nn::Var &b = pvars.at((*cursor)++);
    h = nn::Relu(nn::Conv1d(h, w, b, cfg.head_kernel, 1));
  }
  return nn::SoftmaxChannels(h);
}

}  // namespace

PairGraph BuildPairGraph(const nn::Var &spec_i, const nn::Var &spec_j,
                         const ModelConfig &cfg,
                         const std::vector<nn::Var> &pvars, Mode mode,
                         uint64_t dropout_seed) {
  if (spec_i.dims() != spec_j.dims())
    throw Error(ErrorCode::kShapeMismatch,
                "paired spectrograms must share frame and bin counts");
  Rng dropout_rng(Rng::Derive(dropout_seed, 0xd801));
  PairGraph g;
  size_t cursor = 0;
  g.emb_i = BuildEncoderGraph(spec_i, cfg, pvars, &cursor, mode, &dropout_rng);
  const size_t encoder_end = cursor;
  cursor = 0;  // shared encoder: the second input re-reads the same tensors
  g.emb_j = BuildEncoderGraph(spec_j, cfg, pvars, &cursor, mode, &dropout_rng);
  cursor = encoder_end;

  nn::Var cat = nn::ConcatChannels(g.emb_i, g.emb_j);
  g.pref_frame = BuildHead(cat, cfg.pref_head, cfg, pvars, &cursor);
  g.sdr_frame = BuildHead(cat, cfg.quant_head, cfg, pvars, &cursor);
  g.snr_frame = BuildHead(cat, cfg.quant_head, cfg, pvars, &cursor);
  if (cursor != pvars.size())
    throw Error(ErrorCode::kShapeMismatch,
                "parameter inventory does not match the architecture walk");
  g.pref_pooled = nn::MeanOverTime(g.pref_frame);
  g.sdr_pooled = nn::MeanOverTime(g.sdr_frame);
  g.snr_pooled = nn::MeanOverTime(g.snr_frame);
  return g;
}

FrameEmbedding Encode(const Spectrogram &spec, const ModelConfig &cfg,
                      const Params &params) {
  cfg.Validate();
  auto pvars = MakeParamVars(params, false);
  size_t cursor = 0;
  nn::Var emb = BuildEncoderGraph(SpectrogramConstant(spec), cfg, pvars,
                                  &cursor, Mode::kEval, nullptr);
  FrameEmbedding out;
  out.frames = spec.frames;
  out.dim = cfg.EmbeddingDim();
  out.data.resize((size_t)out.frames * out.dim);
  const double *v = emb.val();  // [dim][T]
  for (int t = 0; t < out.frames; ++t)
    for (int d = 0; d < out.dim; ++d)
      out.data[(size_t)t * out.dim + d] = v[(size_t)d * out.frames + t];
  return out;
}

ModelOutputs ForwardPair(const Spectrogram &spec_i, const Spectrogram &spec_j,
                         const ModelConfig &cfg, const Params &params,
                         Mode mode, uint64_t dropout_seed) {
  cfg.Validate();
  auto pvars = MakeParamVars(params, false);
  PairGraph g = BuildPairGraph(SpectrogramConstant(spec_i),
                               SpectrogramConstant(spec_j), cfg, pvars, mode,
                               dropout_seed);
  ModelOutputs out;
  out.frames = spec_i.frames;
  out.k_classes = cfg.k_classes;
  const int t = out.frames, k = cfg.k_classes;
  out.pref_frame.resize((size_t)t * 2);
  out.sdr_frame.resize((size_t)t * k);
  out.snr_frame.resize((size_t)t * k);
  for (int ti = 0; ti < t; ++ti) {
    for (int c = 0; c < 2; ++c)
      out.pref_frame[(size_t)ti * 2 + c] =
          g.pref_frame.val()[(size_t)c * t + ti];
    for (int c = 0; c < k; ++c) {
      out.sdr_frame[(size_t)ti * k + c] = g.sdr_frame.val()[(size_t)c * t + ti];
      out.snr_frame[(size_t)ti * k + c] = g.snr_frame.val()[(size_t)c * t + ti];
    }
  }
  out.pref_pooled = {g.pref_pooled.val()[0], g.pref_pooled.val()[1]};
  out.sdr_pooled.assign(g.sdr_pooled.val(), g.sdr_pooled.val() + k);
  out.snr_pooled.assign(g.snr_pooled.val(), g.snr_pooled.val() + k);
  return out;
}

}  // namespace noresqa
