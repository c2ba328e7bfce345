// include/noresqa/checkpoint.h

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

#ifndef NORESQA_CHECKPOINT_H_
#define NORESQA_CHECKPOINT_H_

#include <string>

#include "noresqa/train.h"

namespace noresqa {

// Versioned binary container: model config, parameter tensors, optimizer
// state and the training seed.  Shape compatibility is checked on load;
// bit-reproducibility across machines is not promised.
struct Checkpoint {
  ModelConfig config;
  Params params;
  bool has_opt = false;
  AdamState opt;
  uint64_t seed = 0;
  int epoch = 0;
};

void SaveCheckpoint(const std::string &path, const Checkpoint &ckpt);
Checkpoint LoadCheckpoint(const std::string &path);

}  // namespace noresqa

#endif  // NORESQA_CHECKPOINT_H_
