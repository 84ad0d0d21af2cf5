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

// Renders every method_id_item of a DEX file as
// "<declaring-class-descriptor>-><method-name>", in table order.
// Throws Error(MalformedDex) on a bad magic, out-of-bounds table or string
// offsets, or strings that are not well-formed MUTF-8.
DexFeatures parse_dex(std::span<const std::uint8_t> payload);

} // namespace droidsel
