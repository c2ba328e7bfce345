// src/audio_io.cc

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

#include "noresqa/audio_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "json.hpp"
#include "noresqa/kernels.h"

namespace noresqa {

namespace {

uint32_t ReadU32(const unsigned char *p) {
  return (uint32_t)p[0] | ((uint32_t)p[1] << 8) | ((uint32_t)p[2] << 16) |
         ((uint32_t)p[3] << 24);
}

uint16_t ReadU16(const unsigned char *p) {
  return (uint16_t)((uint16_t)p[0] | ((uint16_t)p[1] << 8));
}

void PutU32(std::string *s, uint32_t v) {
  s->push_back((char)(v & 0xff));
  s->push_back((char)((v >> 8) & 0xff));
  s->push_back((char)((v >> 16) & 0xff));
  s->push_back((char)((v >> 24) & 0xff));
}

void PutU16(std::string *s, uint16_t v) {
  s->push_back((char)(v & 0xff));
  s->push_back((char)((v >> 8) & 0xff));
}

}  // namespace

const char *RoleName(ManifestEntry::Role role) {
  switch (role) {
    case ManifestEntry::Role::kClean: return "clean";
    case ManifestEntry::Role::kNoise: return "noise";
    case ManifestEntry::Role::kRir: return "rir";
  }
  return "clean";
}

ManifestEntry::Role RoleFromName(const std::string &name) {
  if (name == "clean") return ManifestEntry::Role::kClean;
  if (name == "noise") return ManifestEntry::Role::kNoise;
  if (name == "rir") return ManifestEntry::Role::kRir;
  throw Error(ErrorCode::kInvalidConfig, "unknown manifest role '" + name + "'");
}

Waveform LoadWav(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::kUnreadableFile, "cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (bytes.size() < 44)
    throw Error(ErrorCode::kUnreadableFile, path + ": truncated header");
  const unsigned char *p = (const unsigned char *)bytes.data();
  if (std::memcmp(p, "RIFF", 4) != 0 || std::memcmp(p + 8, "WAVE", 4) != 0)
    throw Error(ErrorCode::kUnreadableFile, path + ": not a RIFF/WAVE file");

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t data_off = 0, data_len = 0;
  bool have_fmt = false;
  size_t off = 12;
  while (off + 8 <= bytes.size()) {
    uint32_t chunk_len = ReadU32(p + off + 4);
    const char *id = bytes.data() + off;
    size_t body = off + 8;
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (body + 16 > bytes.size())
        throw Error(ErrorCode::kUnreadableFile, path + ": bad fmt chunk");
      format = ReadU16(p + body);
      channels = ReadU16(p + body + 2);
      rate = ReadU32(p + body + 4);
      bits = ReadU16(p + body + 14);
      // WAVE_FORMAT_EXTENSIBLE wraps the real format in a sub-GUID.
      if (format == 0xfffe && chunk_len >= 40)
        format = ReadU16(p + body + 24);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data_off = body;
      data_len = std::min((size_t)chunk_len, bytes.size() - body);
    }
    off = body + chunk_len + (chunk_len & 1);
  }
  if (!have_fmt || data_off == 0)
    throw Error(ErrorCode::kUnreadableFile, path + ": missing fmt or data");
  if (format != 1)
    throw Error(ErrorCode::kUnsupportedEncoding,
                path + ": only PCM wav is supported");
  if (channels == 0 || rate == 0)
    throw Error(ErrorCode::kUnreadableFile, path + ": bad fmt fields");
  if (bits != 8 && bits != 16 && bits != 24 && bits != 32)
    throw Error(ErrorCode::kUnsupportedEncoding,
                path + ": unsupported bit depth");

  const size_t bytes_per = bits / 8;
  const size_t frame_bytes = bytes_per * channels;
  const size_t frames = data_len / frame_bytes;
  if (frames == 0)
    throw Error(ErrorCode::kUnreadableFile, path + ": empty data chunk");

  Waveform w;
  w.sample_rate = (int)rate;
  w.source_id = path;
  w.samples.resize(frames);
  const unsigned char *d = p + data_off;
  const double scale = 1.0 / std::ldexp(1.0, bits - 1);
  for (size_t n = 0; n < frames; ++n) {
    double acc = 0.0;
    for (int c = 0; c < channels; ++c) {
      const unsigned char *s = d + n * frame_bytes + c * bytes_per;
      int32_t v = 0;
      switch (bits) {
        case 8: v = (int32_t)s[0] - 128; break;
        case 16: v = (int16_t)ReadU16(s); break;
        case 24:
          v = (int32_t)((uint32_t)s[0] | ((uint32_t)s[1] << 8) |
                        ((uint32_t)s[2] << 16));
          if (v & 0x800000) v -= 0x1000000;
          break;
        case 32: v = (int32_t)ReadU32(s); break;
      }
      acc += v * scale;
    }
    w.samples[n] = acc / channels;
  }
  for (double v : w.samples)
    if (!std::isfinite(v))
      throw Error(ErrorCode::kUnreadableFile, path + ": non-finite sample");
  return w;
}

void SaveWav(const std::string &path, const Waveform &w) {
  const uint32_t n = (uint32_t)w.samples.size();
  std::string out;
  out.reserve(44 + 2 * n);
  out += "RIFF";
  PutU32(&out, 36 + 2 * n);
  out += "WAVEfmt ";
  PutU32(&out, 16);
  PutU16(&out, 1);  // PCM
  PutU16(&out, 1);  // mono
  PutU32(&out, (uint32_t)w.sample_rate);
  PutU32(&out, (uint32_t)w.sample_rate * 2);
  PutU16(&out, 2);
  PutU16(&out, 16);
  out += "data";
  PutU32(&out, 2 * n);
  for (uint32_t i = 0; i < n; ++i) {
    double v = std::clamp(w.samples[i], -1.0, 1.0);
    long q = std::lround(v * 32768.0);
    q = std::clamp(q, -32768l, 32767l);
    PutU16(&out, (uint16_t)(int16_t)q);
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIoError, "cannot write " + path);
  f.write(out.data(), (std::streamsize)out.size());
  if (!f) throw Error(ErrorCode::kIoError, "short write to " + path);
}

Waveform Resample(const Waveform &w, int target_rate) {
  if (target_rate <= 0)
    throw Error(ErrorCode::kInvalidConfig, "target_rate must be positive");
  if (target_rate == w.sample_rate) return w;
  Waveform out;
  out.sample_rate = target_rate;
  out.source_id = w.source_id;
  const double ratio = (double)target_rate / w.sample_rate;
  size_t ny = (size_t)std::llround((double)w.samples.size() * ratio);
  if (ny == 0) ny = 1;
  out.samples.resize(ny);
  // Anti-aliasing cutoff at the narrower of the two Nyquist bands.
  const double cutoff = std::min(1.0, ratio) * 0.945;
  kernels::ResampleSinc(w.samples.data(), w.samples.size(), ratio, cutoff, 32,
                        out.samples.data(), ny);
  return out;
}

Waveform LoadCanonical(const std::string &path, int rate) {
  const char *cache_dir = std::getenv("NORESQA_CACHE");
  std::string cache_path;
  if (cache_dir && *cache_dir) {
    // FNV-1a over path+rate; stable across runs, unlike std::hash.
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const std::string &s) {
      for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
      }
    };
    mix(path);
    mix("@" + std::to_string(rate));
    char name[32];
    std::snprintf(name, sizeof(name), "%016llx.wav", (unsigned long long)h);
    cache_path = std::string(cache_dir) + "/" + name;
    if (std::filesystem::exists(cache_path)) {
      Waveform w = LoadWav(cache_path);
      w.source_id = path;
      return w;
    }
  }
  Waveform w = Resample(LoadWav(path), rate);
  if (!cache_path.empty()) {
    std::filesystem::create_directories(cache_dir);
    SaveWav(cache_path, w);
  }
  return w;
}

std::vector<ManifestEntry> ReadManifest(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open manifest " + path);
  std::vector<ManifestEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw Error(ErrorCode::kInvalidConfig, "bad manifest line in " + path);
    ManifestEntry e;
    e.path = j.at("path").get<std::string>();
    e.role = RoleFromName(j.at("role").get<std::string>());
    e.duration_s = j.at("duration_s").get<double>();
    if (e.duration_s <= 0.0)
      throw Error(ErrorCode::kInvalidConfig,
                  "non-positive duration in " + path);
    entries.push_back(std::move(e));
  }
  return entries;
}

void WriteManifest(const std::string &path,
                   const std::vector<ManifestEntry> &entries) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write manifest " + path);
  for (const auto &e : entries) {
    nlohmann::json j;
    j["path"] = e.path;
    j["role"] = RoleName(e.role);
    j["duration_s"] = e.duration_s;
    out << j.dump() << "\n";
  }
}

}  // namespace noresqa
