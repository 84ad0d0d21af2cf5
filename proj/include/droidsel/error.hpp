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

#include <stdexcept>
#include <string>
#include <string_view>

namespace droidsel {

// Every failure surfaced by the library carries one of these codes.
enum class ErrorCode {
    // apk-extractor
    NotAnArchive,
    TruncatedArchive,
    CorruptArchive,
    UnsupportedCompression,
    MissingManifest,
    MalformedAxml,
    MalformedDex,
    // vectorizer
    EmptyCorpus,
    FormatError,
    DimensionMismatch,
    // learners
    SingleClassData,
    NonFiniteLoss,
    InvalidSpec,
    // ensemble / ga
    AllZeroWeights,
    EmptyDataset,
    InvalidConfig,
    // evaluation
    TooSmall,
    LengthMismatch,
    // generic I/O
    IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace droidsel
