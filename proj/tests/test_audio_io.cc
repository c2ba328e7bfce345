// tests/test_audio_io.cc

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
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "noresqa/audio_io.h"
#include "noresqa/dsp.h"
#include "noresqa/rng.h"

using namespace noresqa;

namespace {

std::string TempDir() {
  static int counter = 0;
  std::string dir = std::filesystem::temp_directory_path().string() +
                    "/noresqa_audio_test" + std::to_string(counter++);
  std::filesystem::create_directories(dir);
  return dir;
}

void PutU32(std::string *s, uint32_t v) {
  for (int i = 0; i < 4; ++i) s->push_back((char)((v >> (8 * i)) & 0xff));
}
void PutU16(std::string *s, uint16_t v) {
  s->push_back((char)(v & 0xff));
  s->push_back((char)((v >> 8) & 0xff));
}

// Hand-built multi-channel PCM16 file.
void WriteRawWav(const std::string &path, const std::vector<int16_t> &frames,
                 int channels, int rate) {
  std::string out = "RIFF";
  PutU32(&out, 36 + 2 * (uint32_t)frames.size());
  out += "WAVEfmt ";
  PutU32(&out, 16);
  PutU16(&out, 1);
  PutU16(&out, (uint16_t)channels);
  PutU32(&out, (uint32_t)rate);
  PutU32(&out, (uint32_t)(rate * 2 * channels));
  PutU16(&out, (uint16_t)(2 * channels));
  PutU16(&out, 16);
  out += "data";
  PutU32(&out, 2 * (uint32_t)frames.size());
  for (int16_t v : frames) PutU16(&out, (uint16_t)v);
  std::ofstream f(path, std::ios::binary);
  f.write(out.data(), (std::streamsize)out.size());
}

}  // namespace

TEST_CASE("silence loads as zeros") {
  const std::string dir = TempDir();
  const std::string path = dir + "/silence.wav";
  WriteRawWav(path, std::vector<int16_t>(16000, 0), 1, 16000);
  Waveform w = LoadWav(path);
  CHECK(w.sample_rate == 16000);
  CHECK(w.samples.size() == 16000);
  for (double v : w.samples) CHECK(v == 0.0);
}

TEST_CASE("opposite stereo channels cancel to zero") {
  const std::string dir = TempDir();
  const std::string path = dir + "/stereo.wav";
  std::vector<int16_t> frames;
  Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    int16_t a = (int16_t)(rng.Integer(60000)) - 30000;
    frames.push_back(a);
    frames.push_back((int16_t)-a);
  }
  WriteRawWav(path, frames, 2, 16000);
  Waveform w = LoadWav(path);
  CHECK(w.samples.size() == 1000);
  for (double v : w.samples) CHECK(v == 0.0);
}

TEST_CASE("16-bit full-scale codes rescale by 1/32768") {
  const std::string dir = TempDir();
  const std::string path = dir + "/square.wav";
  std::vector<int16_t> frames;
  for (int i = 0; i < 64; ++i) frames.push_back(i % 2 == 0 ? 32767 : -32768);
  WriteRawWav(path, frames, 1, 16000);
  Waveform w = LoadWav(path);
  for (size_t i = 0; i < w.samples.size(); ++i) {
    if (i % 2 == 0)
      CHECK(w.samples[i] == doctest::Approx(32767.0 / 32768.0).epsilon(1e-12));
    else
      CHECK(w.samples[i] == doctest::Approx(-1.0).epsilon(1e-12));
  }
}

TEST_CASE("save/load round trip stays within one quantization step") {
  const std::string dir = TempDir();
  Rng rng(32);
  Waveform w;
  w.sample_rate = 16000;
  w.samples.resize(4096);
  for (auto &v : w.samples) v = std::clamp(0.4 * rng.Gaussian(), -1.0, 1.0);
  const std::string path = dir + "/rt.wav";
  SaveWav(path, w);
  Waveform r = LoadWav(path);
  REQUIRE(r.samples.size() == w.samples.size());
  double worst = 0.0;
  for (size_t i = 0; i < w.samples.size(); ++i)
    worst = std::max(worst, std::fabs(r.samples[i] - w.samples[i]));
  CHECK(worst <= 1.0 / 32768.0);
  for (double v : r.samples) CHECK(std::isfinite(v));
}

TEST_CASE("values at exactly +/-1 stay at the PCM extremes") {
  const std::string dir = TempDir();
  Waveform w;
  w.sample_rate = 16000;
  w.samples = {1.0, -1.0, 1.0, -1.0};
  const std::string path = dir + "/extremes.wav";
  SaveWav(path, w);
  Waveform r = LoadWav(path);
  CHECK(r.samples[0] == doctest::Approx(32767.0 / 32768.0));
  CHECK(r.samples[1] == doctest::Approx(-1.0));
}

TEST_CASE("load errors are typed") {
  const std::string dir = TempDir();
  CHECK_THROWS_WITH_AS((void)LoadWav(dir + "/missing.wav"),
                       doctest::Contains("UnreadableFile"), Error);
  // Float (non-PCM) wav.
  std::string out = "RIFF";
  PutU32(&out, 36);
  out += "WAVEfmt ";
  PutU32(&out, 16);
  PutU16(&out, 3);  // IEEE float
  PutU16(&out, 1);
  PutU32(&out, 16000);
  PutU32(&out, 64000);
  PutU16(&out, 4);
  PutU16(&out, 32);
  out += "data";
  PutU32(&out, 8);
  out.append(8, '\0');
  const std::string fpath = dir + "/float.wav";
  std::ofstream(fpath, std::ios::binary).write(out.data(), (long)out.size());
  try {
    (void)LoadWav(fpath);
    CHECK(false);
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kUnsupportedEncoding);
  }
}

TEST_CASE("resample is the identity at the same rate") {
  Rng rng(33);
  Waveform w;
  w.sample_rate = 16000;
  w.samples.resize(2048);
  for (auto &v : w.samples) v = rng.Gaussian();
  Waveform r = Resample(w, 16000);
  CHECK(r.samples == w.samples);
}

TEST_CASE("resample preserves duration") {
  Waveform w;
  w.sample_rate = 8000;
  w.samples.assign(8000, 0.25);
  Waveform r = Resample(w, 16000);
  CHECK(r.sample_rate == 16000);
  CHECK(r.samples.size() == 16000);
}

TEST_CASE("a 1 kHz tone survives 48k->16k with its spectral peak intact") {
  const int src = 48000;
  Waveform w;
  w.sample_rate = src;
  w.samples.resize(src);
  for (int i = 0; i < src; ++i)
    w.samples[i] = 0.5 * std::sin(2.0 * 3.14159265358979323846 * 1000.0 * i / src);
  Waveform r = Resample(w, 16000);
  REQUIRE(r.samples.size() == 16000);
  // DFT peak over a 4096-sample slice: bin = f * n / rate.
  const size_t n = 4096;
  std::vector<std::complex<double>> buf(n);
  for (size_t i = 0; i < n; ++i) buf[i] = {r.samples[i + 4000], 0.0};
  Fft(&buf, false);
  size_t best = 1;
  for (size_t b = 1; b < n / 2; ++b)
    if (std::abs(buf[b]) > std::abs(buf[best])) best = b;
  const double peak_hz = (double)best * 16000.0 / n;
  CHECK(peak_hz == doctest::Approx(1000.0).epsilon(0.01));
}

TEST_CASE("manifests round trip and reject bad roles") {
  const std::string dir = TempDir();
  std::vector<ManifestEntry> entries = {
      {"/a/x.wav", ManifestEntry::Role::kClean, 3.5},
      {"/a/y.wav", ManifestEntry::Role::kNoise, 10.0},
      {"/a/z.wav", ManifestEntry::Role::kRir, 0.5},
  };
  const std::string path = dir + "/manifest.jsonl";
  WriteManifest(path, entries);
  auto got = ReadManifest(path);
  REQUIRE(got.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(got[i].path == entries[i].path);
    CHECK(got[i].role == entries[i].role);
    CHECK(got[i].duration_s == entries[i].duration_s);
  }
  CHECK_THROWS_AS((void)RoleFromName("other"), Error);
}

TEST_CASE("canonical loading caches resampled audio") {
  const std::string dir = TempDir();
  const std::string cache = dir + "/cache";
  Waveform w;
  w.sample_rate = 8000;
  w.samples.assign(8000, 0.0);
  for (size_t i = 0; i < w.samples.size(); ++i)
    w.samples[i] = 0.3 * std::sin(0.05 * (double)i);
  const std::string path = dir + "/src.wav";
  SaveWav(path, w);

  setenv("NORESQA_CACHE", cache.c_str(), 1);
  Waveform first = LoadCanonical(path);
  CHECK(first.sample_rate == kCanonicalRate);
  CHECK(std::filesystem::exists(cache));
  size_t cached_files =
      std::distance(std::filesystem::directory_iterator(cache),
                    std::filesystem::directory_iterator{});
  CHECK(cached_files == 1);
  Waveform second = LoadCanonical(path);
  CHECK(second.sample_rate == kCanonicalRate);
  CHECK(second.samples.size() == first.samples.size());
  unsetenv("NORESQA_CACHE");
}
