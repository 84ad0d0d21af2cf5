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

#include "droidsel/error.hpp"

namespace droidsel {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotAnArchive: return "NotAnArchive";
    case ErrorCode::TruncatedArchive: return "TruncatedArchive";
    case ErrorCode::CorruptArchive: return "CorruptArchive";
    case ErrorCode::UnsupportedCompression: return "UnsupportedCompression";
    case ErrorCode::MissingManifest: return "MissingManifest";
    case ErrorCode::MalformedAxml: return "MalformedAxml";
    case ErrorCode::MalformedDex: return "MalformedDex";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingleClassData: return "SingleClassData";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::AllZeroWeights: return "AllZeroWeights";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace droidsel
