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

#include "droidsel/dex.hpp"

#include <optional>
#include <string>
#include <vector>

#include "droidsel/byte_reader.hpp"
#include "droidsel/error.hpp"

namespace droidsel {
namespace {

constexpr std::size_t kHeaderSize = 0x70;
constexpr std::size_t kStringIdSize = 4;
constexpr std::size_t kTypeIdSize = 4;
constexpr std::size_t kMethodIdSize = 8;

struct Table {
    std::uint32_t size;
    std::uint32_t offset;
};

void check_magic(const ByteReader& in) {
    if (in.size() < kHeaderSize) {
        fail(ErrorCode::MalformedDex, "file shorter than the DEX header");
    }
    const auto m = in.slice(0, 8);
    const bool ok = m[0] == 'd' && m[1] == 'e' && m[2] == 'x' && m[3] == '\n' &&
                    m[4] >= '0' && m[4] <= '9' && m[5] >= '0' && m[5] <= '9' &&
                    m[6] >= '0' && m[6] <= '9' && m[7] == '\0';
    if (!ok) {
        fail(ErrorCode::MalformedDex, "bad DEX magic");
    }
}

Table read_table(const ByteReader& in, std::size_t at, std::size_t item_size, const char* what) {
    Table t{in.u32(at), in.u32(at + 4)};
    if (t.size != 0 && !in.in_bounds(t.offset, std::uint64_t{t.size} * item_size)) {
        fail(ErrorCode::MalformedDex, std::string(what) + " table out of bounds");
    }
    return t;
}

class DexReader {
public:
    explicit DexReader(std::span<const std::uint8_t> payload)
        : in_(payload, ErrorCode::MalformedDex) {
        check_magic(in_);
        const std::uint32_t file_size = in_.u32(0x20);
        if (file_size > in_.size()) {
            fail(ErrorCode::MalformedDex, "declared file size exceeds payload");
        }
        strings_ = read_table(in_, 0x38, kStringIdSize, "string_ids");
        types_ = read_table(in_, 0x40, kTypeIdSize, "type_ids");
        methods_ = read_table(in_, 0x58, kMethodIdSize, "method_ids");
        string_cache_.resize(strings_.size);
    }

    DexFeatures run() {
        DexFeatures features;
        for (std::uint32_t i = 0; i < methods_.size; ++i) {
            const std::uint64_t item = methods_.offset + std::uint64_t{i} * kMethodIdSize;
            const std::uint16_t class_idx = in_.u16(item);
            const std::uint32_t name_idx = in_.u32(item + 4);
            const std::string& descriptor = type_descriptor(class_idx);
            const std::string& name = string_at(name_idx);
            if (descriptor.empty() || name.empty()) {
                fail(ErrorCode::MalformedDex, "method_id " + std::to_string(i) +
                                                  " has an empty class or name");
            }
            features.api_refs.insert(descriptor + "->" + name);
        }
        return features;
    }

private:
    const std::string& type_descriptor(std::uint32_t type_idx) {
        if (type_idx >= types_.size) {
            fail(ErrorCode::MalformedDex, "type index " + std::to_string(type_idx) +
                                              " out of range");
        }
        return string_at(in_.u32(types_.offset + std::uint64_t{type_idx} * kTypeIdSize));
    }

    const std::string& string_at(std::uint32_t string_idx) {
        if (string_idx >= strings_.size) {
            fail(ErrorCode::MalformedDex, "string index " + std::to_string(string_idx) +
                                              " out of range");
        }
        auto& slot = string_cache_[string_idx];
        if (!slot) {
            slot = decode_string(in_.u32(strings_.offset + std::uint64_t{string_idx} * kStringIdSize));
        }
        return *slot;
    }

    // string_data_item: uleb128 utf16_size followed by NUL-terminated MUTF-8.
    std::string decode_string(std::uint64_t pos) const {
        std::uint32_t utf16_size = 0;
        for (int shift = 0;; shift += 7) {
            if (shift > 28) {
                fail(ErrorCode::MalformedDex, "overlong uleb128 string length");
            }
            const std::uint8_t b = in_.u8(pos++);
            utf16_size |= static_cast<std::uint32_t>(b & 0x7f) << shift;
            if (!(b & 0x80)) {
                break;
            }
        }

        std::string out;
        std::uint32_t units = 0;
        while (true) {
            const std::uint8_t b = in_.u8(pos);
            if (b == 0) {
                break;
            }
            std::size_t len;
            if (b < 0x80) {
                len = 1;
            } else if ((b & 0xe0) == 0xc0) {
                len = 2;
            } else if ((b & 0xf0) == 0xe0) {
                len = 3;
            } else {
                fail(ErrorCode::MalformedDex, "invalid MUTF-8 lead byte");
            }
            for (std::size_t k = 1; k < len; ++k) {
                if ((in_.u8(pos + k) & 0xc0) != 0x80) {
                    fail(ErrorCode::MalformedDex, "invalid MUTF-8 continuation byte");
                }
            }
            const auto bytes = in_.slice(pos, len);
            out.append(bytes.begin(), bytes.end());
            pos += len;
            ++units;
        }
        if (units != utf16_size) {
            fail(ErrorCode::MalformedDex, "string length does not match its MUTF-8 data");
        }
        return out;
    }

    ByteReader in_;
    Table strings_{};
    Table types_{};
    Table methods_{};
    std::vector<std::optional<std::string>> string_cache_;
};

} // namespace

DexFeatures parse_dex(std::span<const std::uint8_t> payload) {
    return DexReader(payload).run();
}

} // namespace droidsel
