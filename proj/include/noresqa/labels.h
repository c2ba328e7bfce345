// include/noresqa/labels.h

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

#ifndef NORESQA_LABELS_H_
#define NORESQA_LABELS_H_

#include <array>
#include <vector>

#include "noresqa/common.h"

namespace noresqa {

// Discretization of |delta| quality differences into K classes.  The delta
// ranges are fixed from the training level ranges rather than recomputed per
// dataset, so labels are reproducible: SI-SDR spans 40 dB (-15..25) and SNR
// spans 75 dB (-15..60).
struct BinningConfig {
  enum class Measure { kSnr, kSiSdr };
  int k_classes = 40;
  double delta_max = 40.0;
  Measure measure = Measure::kSiSdr;

  double BinWidth() const { return delta_max / k_classes; }

  static BinningConfig ForSiSdr(int k = 40) {
    return {k, 40.0, Measure::kSiSdr};
  }
  static BinningConfig ForSnr(int k = 40) { return {k, 75.0, Measure::kSnr}; }
};

struct SmoothedLabel {
  std::vector<double> probs;  // sums to 1; at most 3 non-zero entries
};

struct PreferenceLabel {
  std::array<double, 2> probs;  // one-hot
};

// Class index in [1, K] for a non-negative delta; deltas at or above
// delta_max map to K, bin edges belong to the upper bin.
int BinIndex(double delta, const BinningConfig &cfg);

// 0.6 on the true class, 0.2 on each existing neighbor.  At the boundary
// classes the missing neighbor's mass is redistributed proportionally,
// keeping the 3:1 center-to-neighbor ratio (0.75 / 0.25).
SmoothedLabel SmoothLabels(int v, int k_classes);

// [1, 0] when the first input is cleaner, [0, 1] otherwise; exact ties are
// rejected.
PreferenceLabel MakePreferenceLabel(double sdr_i, double sdr_j);

// Arithmetic mean of the bin's edges.
double BinMidpoint(int k, const BinningConfig &cfg);

}  // namespace noresqa

#endif  // NORESQA_LABELS_H_
