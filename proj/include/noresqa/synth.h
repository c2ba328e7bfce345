// include/noresqa/synth.h

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

#ifndef NORESQA_SYNTH_H_
#define NORESQA_SYNTH_H_

#include <string>
#include <vector>

#include "noresqa/audio_io.h"
#include "noresqa/rng.h"

namespace noresqa {

// Synthetic benchmark corpus: harmonic tone complexes and filtered noise as
// "clean" material, white and babble-like recordings as noise, exponentially
// decaying impulse responses.  Everything is derived from the seed.
struct SynthCorpusConfig {
  int clean_files = 24;
  int noise_files = 12;
  int rir_files = 4;
  double file_s = 4.0;
  int sample_rate = kCanonicalRate;
  uint64_t seed = 1;
};

struct SynthCorpus {
  std::vector<ManifestEntry> clean, noise, rir;
};

Waveform SynthToneComplex(Rng *rng, double seconds, int rate);
Waveform SynthFilteredNoise(Rng *rng, double seconds, int rate);
Waveform SynthBabble(Rng *rng, double seconds, int rate);
Waveform SynthWhiteNoise(Rng *rng, double seconds, int rate);
Waveform SynthRir(Rng *rng, int rate);

// Writes WAV files plus clean/noise/rir manifests under dir.
SynthCorpus BuildSynthCorpus(const std::string &dir,
                             const SynthCorpusConfig &cfg);

}  // namespace noresqa

#endif  // NORESQA_SYNTH_H_
