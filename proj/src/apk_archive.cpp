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

#include "droidsel/apk_archive.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <unordered_set>

#include "droidsel/byte_reader.hpp"
#include "droidsel/error.hpp"

namespace droidsel {
namespace {

constexpr std::uint32_t kLocalHeaderMagic = 0x04034b50;
constexpr std::uint32_t kCentralHeaderMagic = 0x02014b50;
constexpr std::uint32_t kEndOfCentralDirMagic = 0x06054b50;
constexpr std::size_t kEndOfCentralDirSize = 22;
constexpr std::size_t kMaxCommentSize = 0xffff;
constexpr std::size_t kCentralHeaderSize = 46;
constexpr std::size_t kLocalHeaderSize = 30;

constexpr std::uint16_t kMethodStored = 0;
constexpr std::uint16_t kMethodDeflate = 8;

bool starts_with_local_magic(std::span<const std::uint8_t> bytes) {
    return bytes.size() >= 4 && bytes[0] == 'P' && bytes[1] == 'K' && bytes[2] == 3 &&
           bytes[3] == 4;
}

// Scans backwards for the end-of-central-directory record.
std::size_t find_end_of_central_dir(const ByteReader& in) {
    if (in.size() < kEndOfCentralDirSize) {
        if (starts_with_local_magic(in.bytes())) {
            fail(ErrorCode::TruncatedArchive, "archive ends before the central directory");
        }
        fail(ErrorCode::NotAnArchive, "no ZIP signature");
    }
    const std::size_t last = in.size() - kEndOfCentralDirSize;
    const std::size_t first = last > kMaxCommentSize ? last - kMaxCommentSize : 0;
    for (std::size_t pos = last + 1; pos-- > first;) {
        if (in.u32(pos) == kEndOfCentralDirMagic) {
            return pos;
        }
    }
    if (starts_with_local_magic(in.bytes())) {
        fail(ErrorCode::TruncatedArchive, "end of central directory record not found");
    }
    fail(ErrorCode::NotAnArchive, "no ZIP signature");
}

std::vector<ArchiveEntry> parse_central_directory(const ByteReader& in) {
    const std::size_t eocd = find_end_of_central_dir(in);
    const std::uint16_t disk = in.u16(eocd + 4);
    const std::uint16_t cd_disk = in.u16(eocd + 6);
    const std::uint16_t count = in.u16(eocd + 10);
    const std::uint32_t cd_size = in.u32(eocd + 12);
    const std::uint32_t cd_offset = in.u32(eocd + 16);

    if (disk != 0 || cd_disk != 0) {
        fail(ErrorCode::CorruptArchive, "multi-disk archives are not supported");
    }
    if (count == 0xffff || cd_offset == 0xffffffffu || cd_size == 0xffffffffu) {
        fail(ErrorCode::UnsupportedCompression, "ZIP64 archives are not supported");
    }
    if (!in.in_bounds(cd_offset, cd_size) || cd_offset + std::uint64_t{cd_size} > eocd) {
        fail(ErrorCode::TruncatedArchive, "central directory lies outside the archive");
    }

    std::vector<ArchiveEntry> entries;
    entries.reserve(count);
    std::unordered_set<std::string> seen;
    std::uint64_t pos = cd_offset;
    const std::uint64_t cd_end = cd_offset + std::uint64_t{cd_size};
    for (std::uint16_t i = 0; i < count; ++i) {
        if (pos + kCentralHeaderSize > cd_end) {
            fail(ErrorCode::TruncatedArchive, "central directory shorter than its entry count");
        }
        if (in.u32(pos) != kCentralHeaderMagic) {
            fail(ErrorCode::CorruptArchive, "bad central directory header signature");
        }
        ArchiveEntry entry;
        const std::uint16_t flags = in.u16(pos + 8);
        entry.method = in.u16(pos + 10);
        entry.crc32 = in.u32(pos + 16);
        entry.compressed_size = in.u32(pos + 20);
        entry.uncompressed_size = in.u32(pos + 24);
        const std::uint16_t name_len = in.u16(pos + 28);
        const std::uint16_t extra_len = in.u16(pos + 30);
        const std::uint16_t comment_len = in.u16(pos + 32);
        const std::uint32_t local_offset = in.u32(pos + 42);
        const std::uint64_t record_end =
            pos + kCentralHeaderSize + name_len + extra_len + comment_len;
        if (record_end > cd_end) {
            fail(ErrorCode::TruncatedArchive, "central directory entry overruns directory");
        }
        const auto name = in.slice(pos + kCentralHeaderSize, name_len);
        entry.path.assign(name.begin(), name.end());
        if (flags & 0x1) {
            fail(ErrorCode::UnsupportedCompression, "encrypted entry: " + entry.path);
        }
        if (!seen.insert(entry.path).second) {
            fail(ErrorCode::CorruptArchive, "duplicate entry path: " + entry.path);
        }

        // The local header carries its own name/extra lengths, which may differ
        // from the central copy.
        if (!in.in_bounds(local_offset, kLocalHeaderSize) || local_offset >= cd_offset) {
            fail(ErrorCode::TruncatedArchive, "local header outside archive: " + entry.path);
        }
        if (in.u32(local_offset) != kLocalHeaderMagic) {
            fail(ErrorCode::CorruptArchive, "bad local header signature: " + entry.path);
        }
        const std::uint16_t local_name_len = in.u16(local_offset + 26);
        const std::uint16_t local_extra_len = in.u16(local_offset + 28);
        entry.data_offset = std::uint64_t{local_offset} + kLocalHeaderSize + local_name_len +
                            local_extra_len;
        if (entry.data_offset + entry.compressed_size > cd_offset) {
            fail(ErrorCode::TruncatedArchive,
                 "payload of " + entry.path + " extends past the end of the entry data");
        }
        entries.push_back(std::move(entry));
        pos = record_end;
    }
    return entries;
}

std::vector<std::uint8_t> inflate_raw(std::span<const std::uint8_t> input,
                                      std::uint64_t expected_size, const std::string& path) {
    std::vector<std::uint8_t> out(static_cast<std::size_t>(expected_size));
    z_stream stream{};
    if (inflateInit2(&stream, -MAX_WBITS) != Z_OK) {
        fail(ErrorCode::CorruptArchive, "cannot initialise inflater");
    }
    stream.next_in = const_cast<Bytef*>(input.data());
    stream.avail_in = static_cast<uInt>(input.size());
    stream.next_out = out.data();
    stream.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&stream, Z_FINISH);
    // A payload that fills the buffer exactly without reaching the stream end
    // decodes to more bytes than declared.
    std::uint8_t probe = 0;
    if (rc == Z_BUF_ERROR && stream.avail_out == 0 && stream.avail_in > 0) {
        stream.next_out = &probe;
        stream.avail_out = 1;
        rc = inflate(&stream, Z_FINISH);
        if (stream.avail_out == 0) {
            inflateEnd(&stream);
            fail(ErrorCode::CorruptArchive, path + ": inflated size exceeds declared size");
        }
    }
    const auto produced = stream.total_out;
    inflateEnd(&stream);
    if (rc != Z_STREAM_END) {
        fail(ErrorCode::CorruptArchive, path + ": invalid deflate stream");
    }
    if (produced != expected_size) {
        fail(ErrorCode::CorruptArchive, path + ": inflated size " + std::to_string(produced) +
                                            " does not match declared size " +
                                            std::to_string(expected_size));
    }
    return out;
}

} // namespace

ApkArchive ApkArchive::open(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        fail(ErrorCode::IoError, "cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(file)),
                                    std::istreambuf_iterator<char>());
    if (file.bad()) {
        fail(ErrorCode::IoError, "read error on " + path.string());
    }
    return from_bytes(std::move(bytes));
}

ApkArchive ApkArchive::from_bytes(std::vector<std::uint8_t> bytes) {
    auto shared = std::make_shared<const std::vector<std::uint8_t>>(std::move(bytes));
    ByteReader in(*shared, ErrorCode::TruncatedArchive);
    auto entries = parse_central_directory(in);
    return ApkArchive(std::move(shared), std::move(entries));
}

const ArchiveEntry* ApkArchive::find(std::string_view path) const noexcept {
    for (const auto& entry : entries_) {
        if (entry.path == path) {
            return &entry;
        }
    }
    return nullptr;
}

int dex_load_index(std::string_view path) noexcept {
    constexpr std::string_view prefix = "classes";
    constexpr std::string_view suffix = ".dex";
    if (path.size() < prefix.size() + suffix.size() || !path.starts_with(prefix) ||
        !path.ends_with(suffix)) {
        return -1;
    }
    const auto middle = path.substr(prefix.size(), path.size() - prefix.size() - suffix.size());
    if (middle.empty()) {
        return 1;
    }
    if (middle.front() == '0') {
        return -1;
    }
    int n = 0;
    const auto [ptr, ec] = std::from_chars(middle.data(), middle.data() + middle.size(), n);
    if (ec != std::errc() || ptr != middle.data() + middle.size() || n < 2) {
        return -1;
    }
    return n;
}

std::vector<const ArchiveEntry*> ApkArchive::dex_entries() const {
    std::vector<const ArchiveEntry*> dex;
    for (const auto& entry : entries_) {
        if (dex_load_index(entry.path) > 0) {
            dex.push_back(&entry);
        }
    }
    std::sort(dex.begin(), dex.end(), [](const ArchiveEntry* a, const ArchiveEntry* b) {
        return dex_load_index(a->path) < dex_load_index(b->path);
    });
    return dex;
}

std::vector<std::uint8_t> ApkArchive::read(const ArchiveEntry& entry) const {
    ByteReader in(*bytes_, ErrorCode::TruncatedArchive);
    const auto payload = in.slice(entry.data_offset, entry.compressed_size);
    if (entry.uncompressed_size > kMaxEntrySize) {
        fail(ErrorCode::CorruptArchive, entry.path + ": declared size exceeds limit");
    }

    std::vector<std::uint8_t> out;
    switch (entry.method) {
    case kMethodStored:
        if (entry.compressed_size != entry.uncompressed_size) {
            fail(ErrorCode::CorruptArchive,
                 entry.path + ": stored entry with differing compressed/uncompressed sizes");
        }
        out.assign(payload.begin(), payload.end());
        break;
    case kMethodDeflate:
        out = inflate_raw(payload, entry.uncompressed_size, entry.path);
        break;
    default:
        fail(ErrorCode::UnsupportedCompression,
             entry.path + ": compression method " + std::to_string(entry.method));
    }

    const auto crc = ::crc32(0L, out.data(), static_cast<uInt>(out.size()));
    if (crc != entry.crc32) {
        fail(ErrorCode::CorruptArchive, entry.path + ": CRC-32 mismatch");
    }
    return out;
}

} // namespace droidsel
