// tests/test_labels.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "noresqa/labels.h"

using namespace noresqa;

TEST_CASE("bin index: boundaries and edges") {
  BinningConfig cfg = BinningConfig::ForSiSdr();
  CHECK(cfg.BinWidth() == doctest::Approx(1.0));
  CHECK(BinIndex(0.0, cfg) == 1);
  CHECK(BinIndex(39.99, cfg) == 40);
  CHECK(BinIndex(1.0, cfg) == 2);  // bin edges belong to the upper bin
  CHECK(BinIndex(40.0, cfg) == 40);
  CHECK(BinIndex(75.0, cfg) == 40);
  CHECK_THROWS_AS((void)BinIndex(-0.1, cfg), Error);
}

TEST_CASE("smoothed labels match the 0.6/0.2 scheme") {
  SmoothedLabel mid = SmoothLabels(5, 40);
  CHECK(mid.probs[3] == doctest::Approx(0.2));
  CHECK(mid.probs[4] == doctest::Approx(0.6));
  CHECK(mid.probs[5] == doctest::Approx(0.2));
  int nonzero = 0;
  for (double p : mid.probs)
    if (p != 0.0) ++nonzero;
  CHECK(nonzero == 3);

  SmoothedLabel lo = SmoothLabels(1, 40);
  CHECK(lo.probs[0] == doctest::Approx(0.75));
  CHECK(lo.probs[1] == doctest::Approx(0.25));
  SmoothedLabel hi = SmoothLabels(40, 40);
  CHECK(hi.probs[39] == doctest::Approx(0.75));
  CHECK(hi.probs[38] == doctest::Approx(0.25));

  for (int v = 1; v <= 40; ++v) {
    SmoothedLabel l = SmoothLabels(v, 40);
    double sum = 0.0;
    for (double p : l.probs) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK_THROWS_AS((void)SmoothLabels(0, 40), Error);
  CHECK_THROWS_AS((void)SmoothLabels(41, 40), Error);
}

TEST_CASE("smoothed labels mirror under index reflection") {
  for (int v = 2; v < 40; ++v) {
    SmoothedLabel a = SmoothLabels(v, 40);
    SmoothedLabel b = SmoothLabels(41 - v, 40);
    for (int k = 0; k < 40; ++k)
      CHECK(a.probs[k] == doctest::Approx(b.probs[39 - k]));
  }
}

TEST_CASE("expected midpoint of a smoothed label is its own midpoint") {
  BinningConfig cfg = BinningConfig::ForSiSdr();
  for (int v = 2; v < 40; ++v) {
    SmoothedLabel l = SmoothLabels(v, 40);
    double e = 0.0;
    for (int k = 1; k <= 40; ++k) e += l.probs[k - 1] * BinMidpoint(k, cfg);
    CHECK(std::fabs(e - BinMidpoint(v, cfg)) <= cfg.BinWidth());
  }
}

TEST_CASE("preference labels and ties") {
  PreferenceLabel a = MakePreferenceLabel(10.0, 5.0);
  CHECK(a.probs[0] == 1.0);
  CHECK(a.probs[1] == 0.0);
  PreferenceLabel b = MakePreferenceLabel(5.0, 10.0);
  CHECK(b.probs[0] == 0.0);
  CHECK(b.probs[1] == 1.0);
  CHECK_THROWS_AS((void)MakePreferenceLabel(5.0, 5.0), Error);
}

TEST_CASE("bin midpoints") {
  BinningConfig sdr = BinningConfig::ForSiSdr();
  CHECK(BinMidpoint(1, sdr) == doctest::Approx(0.5));
  CHECK(BinMidpoint(40, sdr) == doctest::Approx(39.5));
  BinningConfig snr = BinningConfig::ForSnr();
  CHECK(BinMidpoint(20, snr) == doctest::Approx(36.5625));
  CHECK_THROWS_AS((void)BinMidpoint(0, sdr), Error);
  CHECK_THROWS_AS((void)BinMidpoint(41, sdr), Error);
}

TEST_CASE("bin round trip is the identity on all classes") {
  for (const BinningConfig &cfg :
       {BinningConfig::ForSiSdr(), BinningConfig::ForSnr()}) {
    for (int k = 1; k <= cfg.k_classes; ++k)
      CHECK(BinIndex(BinMidpoint(k, cfg), cfg) == k);
  }
}

TEST_CASE("uniform distribution over the si-sdr bins has mean 20 dB") {
  // Backs the score op: a maximally uncertain head predicts mid-range.
  BinningConfig cfg = BinningConfig::ForSiSdr();
  double mean = 0.0;
  for (int k = 1; k <= 40; ++k) mean += BinMidpoint(k, cfg) / 40.0;
  CHECK(mean == doctest::Approx(20.0).epsilon(1e-12));
}
