// src/common.cc

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

#include "noresqa/common.h"

namespace noresqa {

const char *ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnreadableFile: return "UnreadableFile";
    case ErrorCode::kUnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kSignalTooShort: return "SignalTooShort";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kDegenerateClean: return "DegenerateClean";
    case ErrorCode::kDegenerateTest: return "DegenerateTest";
    case ErrorCode::kDegenerateNoise: return "DegenerateNoise";
    case ErrorCode::kInvalidBand: return "InvalidBand";
    case ErrorCode::kNonMonotoneResponse: return "NonMonotoneResponse";
    case ErrorCode::kEmptyManifest: return "EmptyManifest";
    case ErrorCode::kTiedQuality: return "TiedQuality";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kInsufficientItems: return "InsufficientItems";
    case ErrorCode::kDegenerateVariance: return "DegenerateVariance";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
  }
  return "UnknownError";
}

bool IsValidationError(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnreadableFile:
    case ErrorCode::kIoError:
      return false;
    default:
      return true;
  }
}

}  // namespace noresqa
