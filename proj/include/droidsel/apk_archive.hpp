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
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace droidsel {

struct ArchiveEntry {
    std::string path;
    std::uint16_t method = 0;  // 0 = stored, 8 = deflate
    std::uint32_t crc32 = 0;
    std::uint64_t compressed_size = 0;
    std::uint64_t uncompressed_size = 0;
    std::uint64_t data_offset = 0;  // start of the payload, past the local header
};

// Read-only view of a ZIP container. The entry table is taken from the
// central directory and each entry's local header is validated up front;
// payloads are decoded on demand by read().
class ApkArchive {
public:
    static constexpr std::string_view kManifestPath = "AndroidManifest.xml";
    // Upper bound on any single decoded payload.
    static constexpr std::uint64_t kMaxEntrySize = 256ULL << 20;

    static ApkArchive open(const std::filesystem::path& path);
    static ApkArchive from_bytes(std::vector<std::uint8_t> bytes);

    const std::vector<ArchiveEntry>& entries() const noexcept { return entries_; }
    const ArchiveEntry* find(std::string_view path) const noexcept;
    const ArchiveEntry* manifest_entry() const noexcept { return find(kManifestPath); }

    // classes.dex, classes2.dex, classes3.dex, ... in load order.
    std::vector<const ArchiveEntry*> dex_entries() const;

    std::vector<std::uint8_t> read(const ArchiveEntry& entry) const;

private:
    ApkArchive(std::shared_ptr<const std::vector<std::uint8_t>> bytes,
               std::vector<ArchiveEntry> entries)
        : bytes_(std::move(bytes)), entries_(std::move(entries)) {}

    std::shared_ptr<const std::vector<std::uint8_t>> bytes_;
    std::vector<ArchiveEntry> entries_;
};

// Position of a root-level "classes<N>.dex" name in multidex load order, or -1.
int dex_load_index(std::string_view path) noexcept;

} // namespace droidsel
