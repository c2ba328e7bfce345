// include/noresqa/common.h

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

#ifndef NORESQA_COMMON_H_
#define NORESQA_COMMON_H_

#include <stdexcept>
#include <string>

namespace noresqa {

enum class ErrorCode {
  kUnreadableFile,
  kUnsupportedEncoding,
  kIoError,
  kSignalTooShort,
  kLengthMismatch,
  kDegenerateClean,
  kDegenerateTest,
  kDegenerateNoise,
  kInvalidBand,
  kNonMonotoneResponse,
  kEmptyManifest,
  kTiedQuality,
  kIndexOutOfRange,
  kShapeMismatch,
  kInsufficientItems,
  kDegenerateVariance,
  kInvalidConfig,
};

const char *ErrorCodeName(ErrorCode code);

// Validation errors map to CLI exit code 1, everything else to 2.
bool IsValidationError(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &msg)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + msg),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace noresqa

#endif  // NORESQA_COMMON_H_
