// Copyright 2026 The ReCo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RECO_CLI_H_
#define RECO_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace reco::cli {

inline constexpr const char* kArtifactVersion = "reco 0.1.0";

// Exit codes: 0 success, 2 input error, 3 numeric error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNumericError = 3;

// Runs the full command line (excluding argv[0]) against the given streams.
// Never throws; every failure is reported on `err` and mapped to an exit
// code. Output files are written only after the command has fully
// succeeded, so failed runs never leave partial results.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace reco::cli

#endif  // RECO_CLI_H_
