// Copyright (C) 2026 The droidsel Authors
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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace droidsel::cli {

// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kRuntimeError = 1,
    kUsage = 2,
    kInvalidConfig = 3,
    kBadInput = 4,
    kDimensionMismatch = 5,
    kNoInputs = 6,
    kTrainingFailed = 7,
};

// Runs one command line. `args` excludes the program name. Data goes to
// `out` unless a command writes to a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace droidsel::cli
