// src/eval.cc

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

#include "noresqa/eval.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "noresqa/degrade.h"
#include "noresqa/dsp.h"

namespace noresqa {

namespace {

// Desk-scale pass thresholds for the property suite.
constexpr double kCommutativityTolDb = 2.0;
constexpr double kCommutativityPassFrac = 0.95;
constexpr double kFlipConfidence = 0.7;
constexpr double kFlipPassFrac = 0.95;
constexpr double kIdenticalsMaxConfidence = 0.65;
constexpr double kMonotonicSpearmanMin = 0.9;
constexpr double kQuantCurveTolDb = 3.0;

double PearsonRaw(const std::vector<double> &x, const std::vector<double> &y) {
  const size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0)
    throw Error(ErrorCode::kDegenerateVariance,
                "constant coordinate in correlation input");
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> FractionalRanks(const std::vector<double> &v) {
  const size_t n = v.size();
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = (double)(i + j) / 2.0 + 1.0;  // average rank for ties
    for (size_t k = i; k <= j; ++k) ranks[idx[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double Pearson(const std::vector<RatedItem> &items) {
  if (items.size() < 3)
    throw Error(ErrorCode::kInsufficientItems, "need at least 3 rated items");
  std::vector<double> x, y;
  for (const auto &it : items) {
    x.push_back(it.predicted);
    y.push_back(it.reference_rating);
  }
  return PearsonRaw(x, y);
}

double Spearman(const std::vector<RatedItem> &items) {
  if (items.size() < 3)
    throw Error(ErrorCode::kInsufficientItems, "need at least 3 rated items");
  std::vector<double> x, y;
  for (const auto &it : items) {
    x.push_back(it.predicted);
    y.push_back(it.reference_rating);
  }
  return PearsonRaw(FractionalRanks(x), FractionalRanks(y));
}

TwoAfcReport TwoAfcAccuracy(const std::vector<TwoAfcItem> &items,
                            const ModelConfig &cfg, const Params &params) {
  if (items.empty())
    throw Error(ErrorCode::kInsufficientItems, "no 2AFC items");
  TwoAfcReport report;
  int correct = 0;
  for (const auto &item : items) {
    try {
      Waveform ref = LoadCanonical(item.reference);
      Waveform a = LoadCanonical(item.candidate_a);
      Waveform b = LoadCanonical(item.candidate_b);
      const double ma = Noresqa(a, ref, cfg, params).magnitude_db;
      const double mb = Noresqa(b, ref, cfg, params).magnitude_db;
      ++report.evaluated;
      if (ma == mb) continue;  // tie counts as incorrect
      const char pred = ma < mb ? 'a' : 'b';
      if (pred == item.human_choice) ++correct;
    } catch (const Error &) {
      ++report.dropped;
    }
  }
  if (report.evaluated == 0)
    throw Error(ErrorCode::kInsufficientItems, "every 2AFC item failed");
  report.accuracy = (double)correct / report.evaluated;
  return report;
}

double PrecisionAtK(const std::vector<std::vector<double>> &embeddings,
                    const std::vector<int> &level_tags, int k) {
  const size_t n = embeddings.size();
  if (n != level_tags.size() || n == 0)
    throw Error(ErrorCode::kInsufficientItems, "embedding/tag size mismatch");
  // Every level must offer at least k items.
  std::vector<std::pair<int, int>> counts;
  for (int tag : level_tags) {
    bool found = false;
    for (auto &[t, c] : counts)
      if (t == tag) {
        ++c;
        found = true;
      }
    if (!found) counts.push_back({tag, 1});
  }
  for (auto &[t, c] : counts)
    if (c < k)
      throw Error(ErrorCode::kInsufficientItems,
                  "level " + std::to_string(t) + " has fewer than K items");

  double mean_precision = 0.0;
  std::vector<std::pair<double, size_t>> dists(n);
  for (size_t q = 0; q < n; ++q) {
    size_t m = 0;
    for (size_t j = 0; j < n; ++j) {
      if (j == q) continue;
      double d2 = 0.0;
      for (size_t d = 0; d < embeddings[q].size(); ++d) {
        const double diff = embeddings[q][d] - embeddings[j][d];
        d2 += diff * diff;
      }
      dists[m++] = {d2, j};
    }
    std::partial_sort(dists.begin(), dists.begin() + k, dists.begin() + m);
    int hits = 0;
    for (int i = 0; i < k; ++i)
      if (level_tags[dists[i].second] == level_tags[q]) ++hits;
    mean_precision += (double)hits / k / n;
  }
  return mean_precision;
}

namespace {

Waveform ExcerptOf(const ManifestEntry &entry, double seconds, Rng *rng) {
  Waveform full = LoadCanonical(entry.path);
  const size_t want = (size_t)std::llround(seconds * full.sample_rate);
  if (full.samples.size() < want)
    throw Error(ErrorCode::kSignalTooShort, entry.path);
  const size_t margin = full.samples.size() - want;
  const size_t off = margin == 0 ? 0 : rng->Integer(margin + 1);
  Waveform ex;
  ex.sample_rate = full.sample_rate;
  ex.source_id = entry.path;
  ex.samples.assign(full.samples.begin() + off,
                    full.samples.begin() + off + want);
  return ex;
}

}  // namespace

nlohmann::json PropertySuite(const ModelConfig &cfg, const Params &params,
                             const std::vector<ManifestEntry> &clean,
                             const std::vector<ManifestEntry> &noise,
                             uint64_t seed, int commutativity_pairs,
                             int identical_pairs) {
  nlohmann::json report;
  SamplerConfig scfg;
  scfg.excerpt_s = 3.0;
  scfg.kind_weights = {{"additive_noise", 1.0}};
  scfg.seed = seed;
  PairSampler sampler(clean, noise, {}, scfg);

  // Commutativity: swap the input order; the magnitude should agree and the
  // preference should flip.
  Rng rng(Rng::Derive(seed, 0xc0));
  int within_tol = 0;
  int confident = 0, flipped = 0;
  for (int i = 0; i < commutativity_pairs; ++i) {
    PairSample pair = sampler.Next(&rng);
    NoresqaScore fwd = Noresqa(pair.x_i, pair.x_j, cfg, params);
    NoresqaScore rev = Noresqa(pair.x_j, pair.x_i, cfg, params);
    if (std::fabs(fwd.magnitude_db - rev.magnitude_db) <= kCommutativityTolDb)
      ++within_tol;
    if (fwd.pref_confidence >= kFlipConfidence) {
      ++confident;
      if (fwd.sign != rev.sign) ++flipped;
    }
  }
  const double comm_frac = (double)within_tol / commutativity_pairs;
  const double flip_frac = confident > 0 ? (double)flipped / confident : 1.0;
  report["commutativity"] = {
      {"pairs", commutativity_pairs},
      {"magnitude_within_2db_frac", comm_frac},
      {"confident_pairs", confident},
      {"preference_flip_frac", flip_frac},
      {"pass", comm_frac >= kCommutativityPassFrac &&
                   flip_frac >= kFlipPassFrac},
  };

  // Indiscernibility of identicals.
  double mean_conf = 0.0, mean_mag = 0.0;
  for (int i = 0; i < identical_pairs; ++i) {
    PairSample pair = sampler.Next(&rng);
    NoresqaScore s = Noresqa(pair.x_i, pair.x_i, cfg, params);
    mean_conf += s.pref_confidence / identical_pairs;
    mean_mag += s.magnitude_db / identical_pairs;
  }
  report["identicals"] = {
      {"pairs", identical_pairs},
      {"mean_pref_confidence", mean_conf},
      {"mean_magnitude_db", mean_mag},
      {"pass", mean_conf <= kIdenticalsMaxConfidence},
  };

  // Monotonicity: one clean source at 8 increasing noise levels against a
  // fixed clean reference.
  {
    const double levels[8] = {24.0, 18.0, 12.0, 6.0, 0.0, -6.0, -12.0, -15.0};
    std::vector<double> idx(8), mags(8, 0.0);
    const int reps = 3;
    Waveform ref = ExcerptOf(clean[0], 3.0, &rng);
    for (int r = 0; r < reps; ++r) {
      Waveform src = ExcerptOf(clean[1 + rng.Integer(clean.size() - 1)], 3.0,
                               &rng);
      Waveform nz = ExcerptOf(noise[rng.Integer(noise.size())], 3.0, &rng);
      for (int l = 0; l < 8; ++l) {
        Waveform degraded = AddNoiseAtSnr(src, nz, levels[l]);
        mags[l] += Noresqa(degraded, ref, cfg, params).magnitude_db / reps;
      }
    }
    for (int l = 0; l < 8; ++l) idx[l] = l;
    const double rho = PearsonRaw(FractionalRanks(idx), FractionalRanks(mags));
    report["monotonicity"] = {
        {"levels", 8},
        {"spearman", rho},
        {"pass", rho >= kMonotonicSpearmanMin},
    };
  }

  // Quantification curve: mean predicted magnitude against the measured
  // delta SI-SDR at spaced targets.
  {
    const double targets[6] = {5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
    const int per_target = 12;
    nlohmann::json curve = nlohmann::json::array();
    double worst = 0.0;
    for (double delta : targets) {
      double mean_pred = 0.0, mean_true = 0.0;
      for (int i = 0; i < per_target; ++i) {
        const size_t c1 = rng.Integer(clean.size());
        size_t c2;
        do {
          c2 = rng.Integer(clean.size());
        } while (c2 == c1);
        Waveform s1 = ExcerptOf(clean[c1], 3.0, &rng);
        Waveform s2 = ExcerptOf(clean[c2], 3.0, &rng);
        Waveform nz = ExcerptOf(noise[rng.Integer(noise.size())], 3.0, &rng);
        const double lo = rng.Uniform(kSdrLevelMin, kSdrLevelMax - delta);
        Waveform x1 = AddNoiseAtSnr(s1, nz, lo + delta);
        Waveform x2 = AddNoiseAtSnr(s2, nz, lo);
        const double true_delta =
            std::fabs(SiSdr(s1, x1).value_db - SiSdr(s2, x2).value_db);
        mean_pred +=
            Noresqa(x1, x2, cfg, params).magnitude_db / per_target;
        mean_true += true_delta / per_target;
      }
      worst = std::max(worst, std::fabs(mean_pred - mean_true));
      curve.push_back({{"target_delta_db", delta},
                       {"mean_true_delta_db", mean_true},
                       {"mean_predicted_db", mean_pred}});
    }
    report["quantification_curve"] = {
        {"points", curve},
        {"max_abs_error_db", worst},
        {"pass", worst <= kQuantCurveTolDb},
    };
  }

  bool all_pass = true;
  for (const char *key :
       {"commutativity", "identicals", "monotonicity", "quantification_curve"})
    all_pass = all_pass && report[key]["pass"].get<bool>();
  report["pass"] = all_pass;
  return report;
}

}  // namespace noresqa
