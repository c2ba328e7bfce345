// include/noresqa/cli.h

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

#ifndef NORESQA_CLI_H_
#define NORESQA_CLI_H_

#include <string>
#include <vector>

namespace noresqa {

// Subcommands: ingest, degrade, train, score, evaluate, embed.  Returns 0 on
// success, 1 on validation errors, 2 on runtime errors.  All randomness is
// derived from --seed; with --json errors are also emitted as one JSON line
// on stderr.
int RunCommand(const std::vector<std::string> &args);

}  // namespace noresqa

#endif  // NORESQA_CLI_H_
