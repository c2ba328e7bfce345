// include/noresqa/eval.h

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

#ifndef NORESQA_EVAL_H_
#define NORESQA_EVAL_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "noresqa/score.h"

namespace noresqa {

struct RatedItem {
  std::string path;
  double predicted = 0.0;
  double reference_rating = 0.0;
};

struct TwoAfcItem {
  std::string reference;
  std::string candidate_a;
  std::string candidate_b;
  char human_choice = 'a';
};

// Sample Pearson correlation; needs >= 3 items with variance on both
// coordinates.
double Pearson(const std::vector<RatedItem> &items);

// Pearson over fractional ranks with average-rank ties.
double Spearman(const std::vector<RatedItem> &items);

struct TwoAfcReport {
  double accuracy = 0.0;
  int evaluated = 0;
  int dropped = 0;
};

// The metric prefers the candidate with the smaller score magnitude against
// the reference; exact ties count as incorrect.  Items whose files fail to
// score are dropped and reported.
TwoAfcReport TwoAfcAccuracy(const std::vector<TwoAfcItem> &items,
                            const ModelConfig &cfg, const Params &params);

// Mean precision@K of same-level retrieval under Euclidean distance; the
// query itself is excluded from its neighbor list.
double PrecisionAtK(const std::vector<std::vector<double>> &embeddings,
                    const std::vector<int> &level_tags, int k);

// Runs the commutativity, preference-flip, indiscernibility-of-identicals,
// monotonicity and quantification-curve checks against a trained model on a
// synthetic corpus; returns measured statistics plus pass flags.
nlohmann::json PropertySuite(const ModelConfig &cfg, const Params &params,
                             const std::vector<ManifestEntry> &clean,
                             const std::vector<ManifestEntry> &noise,
                             uint64_t seed, int commutativity_pairs = 200,
                             int identical_pairs = 100);

}  // namespace noresqa

#endif  // NORESQA_EVAL_H_
