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

#include <optional>
#include <string>

#include "droidsel/apk_archive.hpp"
#include "droidsel/features.hpp"

namespace droidsel {

// Manifest features plus the union of API references over every classes*.dex
// entry, taken in multidex load order. Throws MissingManifest when the
// archive has no AndroidManifest.xml; parser errors propagate.
FeatureRecord extract_features(const ApkArchive& archive, std::string app_id,
                               std::optional<Label> label);

} // namespace droidsel
