// include/noresqa/audio_io.h

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

#ifndef NORESQA_AUDIO_IO_H_
#define NORESQA_AUDIO_IO_H_

#include <string>
#include <vector>

#include "noresqa/common.h"

namespace noresqa {

// Every catalogue recording is normalized to mono at this rate at ingest.
constexpr int kCanonicalRate = 16000;

struct Waveform {
  std::vector<double> samples;  // mono, nominal range [-1, 1]
  int sample_rate = kCanonicalRate;
  std::string source_id;

  double DurationSeconds() const {
    return (double)samples.size() / sample_rate;
  }
};

struct ManifestEntry {
  enum class Role { kClean, kNoise, kRir };
  std::string path;
  Role role = Role::kClean;
  double duration_s = 0.0;
};

const char *RoleName(ManifestEntry::Role role);
ManifestEntry::Role RoleFromName(const std::string &name);

// Reads a PCM RIFF/WAVE file.  Multi-channel audio is averaged to mono and
// integer samples are rescaled by 2^(bits-1).
Waveform LoadWav(const std::string &path);

// Writes 16-bit PCM at w.sample_rate.  Samples are clamped to [-1, 1] before
// quantization, so a round trip is exact to within one quantization step.
void SaveWav(const std::string &path, const Waveform &w);

// Windowed-sinc resampler.  Output length is round(n * target / source), so
// duration is preserved to within one output sample.
Waveform Resample(const Waveform &w, int target_rate);

// LoadWav + Resample to the canonical rate, with an optional on-disk cache of
// resampled files under $NORESQA_CACHE.
Waveform LoadCanonical(const std::string &path, int rate = kCanonicalRate);

// Manifest files are JSON lines: {"path": ..., "role": ..., "duration_s": ...}
std::vector<ManifestEntry> ReadManifest(const std::string &path);
void WriteManifest(const std::string &path,
                   const std::vector<ManifestEntry> &entries);

}  // namespace noresqa

#endif  // NORESQA_AUDIO_IO_H_
