// src/labels.cc

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

#include "noresqa/labels.h"

#include <cmath>

namespace noresqa {

int BinIndex(double delta, const BinningConfig &cfg) {
  if (delta < 0.0)
    throw Error(ErrorCode::kIndexOutOfRange, "delta must be non-negative");
  if (delta >= cfg.delta_max) return cfg.k_classes;
  int k = (int)std::floor(delta / cfg.BinWidth()) + 1;
  if (k > cfg.k_classes) k = cfg.k_classes;
  return k;
}

SmoothedLabel SmoothLabels(int v, int k_classes) {
  if (v < 1 || v > k_classes)
    throw Error(ErrorCode::kIndexOutOfRange, "class index out of [1, K]");
  SmoothedLabel out;
  out.probs.assign(k_classes, 0.0);
  const bool has_lo = v > 1;
  const bool has_hi = v < k_classes;
  if (has_lo && has_hi) {
    out.probs[v - 2] = 0.2;
    out.probs[v - 1] = 0.6;
    out.probs[v] = 0.2;
  } else if (has_lo || has_hi) {
    out.probs[v - 1] = 0.75;
    out.probs[has_hi ? v : v - 2] = 0.25;
  } else {
    out.probs[v - 1] = 1.0;  // K = 1 degenerate
  }
  return out;
}

PreferenceLabel MakePreferenceLabel(double sdr_i, double sdr_j) {
  if (sdr_i == sdr_j)
    throw Error(ErrorCode::kTiedQuality, "equal quality labels");
  if (sdr_i > sdr_j) return {{1.0, 0.0}};
  return {{0.0, 1.0}};
}

double BinMidpoint(int k, const BinningConfig &cfg) {
  if (k < 1 || k > cfg.k_classes)
    throw Error(ErrorCode::kIndexOutOfRange, "class index out of [1, K]");
  return (k - 0.5) * cfg.BinWidth();
}

}  // namespace noresqa
