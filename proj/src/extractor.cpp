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

#include "droidsel/extractor.hpp"

#include "droidsel/axml.hpp"
#include "droidsel/dex.hpp"
#include "droidsel/error.hpp"

namespace droidsel {

FeatureRecord extract_features(const ApkArchive& archive, std::string app_id,
                               std::optional<Label> label) {
    if (app_id.empty()) {
        fail(ErrorCode::FormatError, "app_id must be non-empty");
    }
    const ArchiveEntry* manifest = archive.manifest_entry();
    if (manifest == nullptr) {
        fail(ErrorCode::MissingManifest, app_id + ": archive has no AndroidManifest.xml");
    }

    FeatureRecord record;
    record.app_id = std::move(app_id);
    record.label = label;
    record.manifest = parse_manifest(archive.read(*manifest));
    for (const ArchiveEntry* dex : archive.dex_entries()) {
        record.dex.api_refs.merge(parse_dex(archive.read(*dex)).api_refs);
    }
    return record;
}

} // namespace droidsel
