// src/checkpoint.cc

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

#include "noresqa/checkpoint.h"

#include <cstring>
#include <fstream>

namespace noresqa {

namespace {

constexpr char kMagic[8] = {'N', 'R', 'S', 'Q', 'C', 'K', 'P', '1'};

void WriteU64(std::ofstream &out, uint64_t v) {
  out.write(reinterpret_cast<const char *>(&v), sizeof(v));
}

uint64_t ReadU64(std::ifstream &in) {
  uint64_t v = 0;
  in.read(reinterpret_cast<char *>(&v), sizeof(v));
  return v;
}

void WriteDoubles(std::ofstream &out, const std::vector<double> &v) {
  WriteU64(out, v.size());
  out.write(reinterpret_cast<const char *>(v.data()),
            (std::streamsize)(v.size() * sizeof(double)));
}

std::vector<double> ReadDoubles(std::ifstream &in) {
  std::vector<double> v(ReadU64(in));
  in.read(reinterpret_cast<char *>(v.data()),
          (std::streamsize)(v.size() * sizeof(double)));
  return v;
}

void WriteString(std::ofstream &out, const std::string &s) {
  WriteU64(out, s.size());
  out.write(s.data(), (std::streamsize)s.size());
}

std::string ReadString(std::ifstream &in) {
  std::string s(ReadU64(in), '\0');
  in.read(s.data(), (std::streamsize)s.size());
  return s;
}

}  // namespace

void SaveCheckpoint(const std::string &path, const Checkpoint &ckpt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  nlohmann::json meta;
  meta["config"] = ModelConfigToJson(ckpt.config);
  meta["seed"] = ckpt.seed;
  meta["epoch"] = ckpt.epoch;
  meta["has_opt"] = ckpt.has_opt;
  meta["step"] = ckpt.opt.step;
  WriteString(out, meta.dump());
  WriteU64(out, ckpt.params.tensors.size());
  for (const auto &t : ckpt.params.tensors) {
    WriteString(out, t.name);
    WriteU64(out, t.dims.size());
    for (int d : t.dims) WriteU64(out, (uint64_t)d);
    WriteDoubles(out, *t.data);
  }
  if (ckpt.has_opt) {
    for (const auto &m : ckpt.opt.m) WriteDoubles(out, m);
    for (const auto &v : ckpt.opt.v) WriteDoubles(out, v);
  }
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path);
}

Checkpoint LoadCheckpoint(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kUnreadableFile, "cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw Error(ErrorCode::kUnreadableFile, path + ": not a checkpoint");
  Checkpoint ckpt;
  nlohmann::json meta = nlohmann::json::parse(ReadString(in), nullptr, false);
  if (meta.is_discarded())
    throw Error(ErrorCode::kUnreadableFile, path + ": bad metadata");
  ckpt.config = ModelConfigFromJson(meta.at("config"));
  ckpt.seed = meta.value("seed", 0ull);
  ckpt.epoch = meta.value("epoch", 0);
  ckpt.has_opt = meta.value("has_opt", false);
  ckpt.opt.step = meta.value("step", (int64_t)0);
  const uint64_t n = ReadU64(in);
  for (uint64_t i = 0; i < n; ++i) {
    ParamTensor t;
    t.name = ReadString(in);
    const uint64_t nd = ReadU64(in);
    for (uint64_t d = 0; d < nd; ++d) t.dims.push_back((int)ReadU64(in));
    t.data = std::make_shared<std::vector<double>>(ReadDoubles(in));
    if (t.data->size() != t.size())
      throw Error(ErrorCode::kUnreadableFile, path + ": tensor size mismatch");
    ckpt.params.tensors.push_back(std::move(t));
  }
  if (ckpt.has_opt) {
    for (uint64_t i = 0; i < n; ++i) ckpt.opt.m.push_back(ReadDoubles(in));
    for (uint64_t i = 0; i < n; ++i) ckpt.opt.v.push_back(ReadDoubles(in));
  }
  if (!in) throw Error(ErrorCode::kUnreadableFile, path + ": truncated");
  // Shape compatibility against the stored config.
  Params expected = InitParams(ckpt.config, 0);
  if (expected.tensors.size() != ckpt.params.tensors.size())
    throw Error(ErrorCode::kShapeMismatch,
                path + ": parameter inventory mismatch");
  for (size_t i = 0; i < expected.tensors.size(); ++i)
    if (expected.tensors[i].dims != ckpt.params.tensors[i].dims ||
        expected.tensors[i].name != ckpt.params.tensors[i].name)
      throw Error(ErrorCode::kShapeMismatch,
                  path + ": tensor " + ckpt.params.tensors[i].name +
                      " does not match the stored config");
  return ckpt;
}

}  // namespace noresqa
