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

#include <cstdint>
#include <span>

#include "droidsel/features.hpp"

namespace droidsel {

inline constexpr std::string_view kAndroidNamespaceUri =
    "http://schemas.android.com/apk/res/android";
// Resource id of the framework attribute android:name.
inline constexpr std::uint32_t kAndroidNameAttrId = 0x01010003;

// Reads a binary XML AndroidManifest.xml and collects:
//  - android:name of every <uses-permission> element;
//  - android:name of every <action> whose parent is an <intent-filter>.
// Throws Error(MalformedAxml) on bad chunk headers, string indices out of
// range or unbalanced element nesting.
ManifestFeatures parse_manifest(std::span<const std::uint8_t> payload);

} // namespace droidsel
