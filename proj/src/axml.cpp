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

#include "droidsel/axml.hpp"

#include <optional>
#include <string>
#include <vector>

#include "droidsel/byte_reader.hpp"
#include "droidsel/error.hpp"

namespace droidsel {
namespace {

constexpr std::uint16_t kStringPoolType = 0x0001;
constexpr std::uint16_t kXmlType = 0x0003;
constexpr std::uint16_t kStartNamespaceType = 0x0100;
constexpr std::uint16_t kEndNamespaceType = 0x0101;
constexpr std::uint16_t kStartElementType = 0x0102;
constexpr std::uint16_t kEndElementType = 0x0103;
constexpr std::uint16_t kResourceMapType = 0x0180;

constexpr std::uint32_t kUtf8Flag = 1u << 8;
constexpr std::uint32_t kNoIndex = 0xffffffffu;
constexpr std::uint8_t kTypeString = 0x03;
constexpr std::size_t kMinAttributeSize = 20;

struct ChunkHeader {
    std::uint16_t type;
    std::uint16_t header_size;
    std::uint32_t size;
};

ChunkHeader read_chunk_header(const ByteReader& in, std::uint64_t offset, std::uint64_t limit) {
    if (offset + 8 > limit) {
        fail(ErrorCode::MalformedAxml, "chunk header at " + std::to_string(offset) +
                                           " runs past its parent");
    }
    ChunkHeader h{in.u16(offset), in.u16(offset + 2), in.u32(offset + 4)};
    if (h.header_size < 8 || h.size < h.header_size || offset + h.size > limit) {
        fail(ErrorCode::MalformedAxml, "bad chunk header at " + std::to_string(offset));
    }
    return h;
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xc0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3f));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xe0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
        out += static_cast<char>(0x80 | (cp & 0x3f));
    } else {
        out += static_cast<char>(0xf0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3f));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
        out += static_cast<char>(0x80 | (cp & 0x3f));
    }
}

// String pool with lazy decoding; only referenced strings are validated.
class StringPool {
public:
    StringPool() = default;

    StringPool(const ByteReader& in, std::uint64_t chunk, const ChunkHeader& h)
        : in_(&in), chunk_(chunk), chunk_end_(chunk + h.size) {
        if (h.header_size < 28) {
            fail(ErrorCode::MalformedAxml, "string pool header too small");
        }
        const std::uint32_t count = in.u32(chunk + 8);
        const std::uint32_t flags = in.u32(chunk + 16);
        strings_start_ = in.u32(chunk + 20);
        utf8_ = (flags & kUtf8Flag) != 0;
        offsets_at_ = chunk + h.header_size;
        if (std::uint64_t{count} * 4 > h.size - h.header_size) {
            fail(ErrorCode::MalformedAxml, "string pool offset table overruns chunk");
        }
        if (count > 0 && (strings_start_ < h.header_size || strings_start_ > h.size)) {
            fail(ErrorCode::MalformedAxml, "string pool data start out of range");
        }
        count_ = count;
        cache_.resize(count);
    }

    std::size_t size() const noexcept { return count_; }

    const std::string& get(std::uint32_t index) {
        if (index >= count_) {
            fail(ErrorCode::MalformedAxml, "string index " + std::to_string(index) +
                                               " out of range (pool has " +
                                               std::to_string(count_) + ")");
        }
        if (!cache_[index]) {
            cache_[index] = decode(index);
        }
        return *cache_[index];
    }

    std::optional<std::string> get_optional(std::uint32_t index) {
        if (index == kNoIndex) {
            return std::nullopt;
        }
        return get(index);
    }

private:
    void check(std::uint64_t offset, std::uint64_t length) const {
        if (offset + length > chunk_end_) {
            fail(ErrorCode::MalformedAxml, "string data overruns string pool");
        }
    }

    std::string decode(std::uint32_t index) const {
        const ByteReader& in = *in_;
        std::uint64_t pos = chunk_ + strings_start_ + in.u32(offsets_at_ + 4ull * index);
        std::string out;
        if (utf8_) {
            auto read_len = [&]() -> std::uint32_t {
                check(pos, 1);
                std::uint32_t len = in.u8(pos++);
                if (len & 0x80) {
                    check(pos, 1);
                    len = ((len & 0x7f) << 8) | in.u8(pos++);
                }
                return len;
            };
            read_len();  // UTF-16 length, unused
            const std::uint32_t bytes = read_len();
            check(pos, bytes);
            const auto data = in.slice(pos, bytes);
            out.assign(data.begin(), data.end());
        } else {
            check(pos, 2);
            std::uint32_t len = in.u16(pos);
            pos += 2;
            if (len & 0x8000) {
                check(pos, 2);
                len = ((len & 0x7fff) << 16) | in.u16(pos);
                pos += 2;
            }
            check(pos, std::uint64_t{len} * 2);
            out.reserve(len);
            for (std::uint32_t i = 0; i < len; ++i) {
                std::uint32_t unit = in.u16(pos + 2ull * i);
                if (unit >= 0xd800 && unit < 0xdc00 && i + 1 < len) {
                    const std::uint32_t low = in.u16(pos + 2ull * (i + 1));
                    if (low >= 0xdc00 && low < 0xe000) {
                        append_utf8(out, 0x10000 + ((unit - 0xd800) << 10) + (low - 0xdc00));
                        ++i;
                        continue;
                    }
                }
                if (unit >= 0xd800 && unit < 0xe000) {
                    unit = 0xfffd;
                }
                append_utf8(out, unit);
            }
        }
        return out;
    }

    const ByteReader* in_ = nullptr;
    std::uint64_t chunk_ = 0;
    std::uint64_t chunk_end_ = 0;
    std::uint64_t offsets_at_ = 0;
    std::uint32_t strings_start_ = 0;
    std::uint32_t count_ = 0;
    bool utf8_ = false;
    std::vector<std::optional<std::string>> cache_;
};

class ManifestReader {
public:
    explicit ManifestReader(std::span<const std::uint8_t> payload)
        : in_(payload, ErrorCode::MalformedAxml) {}

    ManifestFeatures run() {
        const ChunkHeader root = read_chunk_header(in_, 0, in_.size());
        if (root.type != kXmlType) {
            fail(ErrorCode::MalformedAxml, "not a binary XML document");
        }
        std::uint64_t pos = root.header_size;
        while (pos < root.size) {
            const ChunkHeader h = read_chunk_header(in_, pos, root.size);
            switch (h.type) {
            case kStringPoolType:
                pool_ = StringPool(in_, pos, h);
                have_pool_ = true;
                break;
            case kResourceMapType:
                read_resource_map(pos, h);
                break;
            case kStartNamespaceType:
                on_start_namespace(pos, h);
                break;
            case kEndNamespaceType:
                break;
            case kStartElementType:
                on_start_element(pos, h);
                break;
            case kEndElementType:
                on_end_element();
                break;
            default:
                // CDATA and unknown chunks carry nothing we need.
                break;
            }
            pos += h.size;
        }
        return std::move(features_);
    }

private:
    StringPool& pool() {
        if (!have_pool_) {
            fail(ErrorCode::MalformedAxml, "string reference before string pool");
        }
        return pool_;
    }

    void read_resource_map(std::uint64_t chunk, const ChunkHeader& h) {
        const std::uint64_t count = (h.size - h.header_size) / 4;
        resource_ids_.clear();
        resource_ids_.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            resource_ids_.push_back(in_.u32(chunk + h.header_size + 4 * i));
        }
    }

    void on_start_namespace(std::uint64_t chunk, const ChunkHeader& h) {
        if (h.size < std::uint32_t{h.header_size} + 8) {
            fail(ErrorCode::MalformedAxml, "namespace chunk too small");
        }
        const std::uint32_t uri = in_.u32(chunk + h.header_size + 4);
        if (uri != kNoIndex && pool().get(uri) == kAndroidNamespaceUri) {
            android_namespace_declared_ = true;
        }
    }

    bool is_name_attribute(std::uint32_t ns, std::uint32_t name) {
        bool local_match = false;
        if (name != kNoIndex) {
            const std::string& local = pool().get(name);
            local_match = local == "name" ||
                          (local.empty() && name < resource_ids_.size() &&
                           resource_ids_[name] == kAndroidNameAttrId);
        }
        if (!local_match) {
            return false;
        }
        if (!android_namespace_declared_) {
            return true;
        }
        return ns != kNoIndex && pool().get(ns) == kAndroidNamespaceUri;
    }

    void on_start_element(std::uint64_t chunk, const ChunkHeader& h) {
        const std::uint64_t body = chunk + h.header_size;
        if (body + 20 > chunk + h.size) {
            fail(ErrorCode::MalformedAxml, "start element chunk too small");
        }
        const std::uint32_t name_index = in_.u32(body + 4);
        const std::uint16_t attr_start = in_.u16(body + 8);
        const std::uint16_t attr_size = in_.u16(body + 10);
        const std::uint16_t attr_count = in_.u16(body + 12);
        const std::string element = pool().get(name_index);

        std::optional<std::string> name_value;
        if (attr_count > 0) {
            if (attr_size < kMinAttributeSize) {
                fail(ErrorCode::MalformedAxml, "attribute record too small");
            }
            const std::uint64_t first = body + attr_start;
            if (first + std::uint64_t{attr_count} * attr_size > chunk + h.size) {
                fail(ErrorCode::MalformedAxml, "attributes overrun element chunk");
            }
            for (std::uint16_t i = 0; i < attr_count; ++i) {
                const std::uint64_t attr = first + std::uint64_t{i} * attr_size;
                const std::uint32_t ns = in_.u32(attr);
                const std::uint32_t name = in_.u32(attr + 4);
                if (!is_name_attribute(ns, name)) {
                    continue;
                }
                const std::uint32_t raw = in_.u32(attr + 8);
                const std::uint8_t data_type = in_.u8(attr + 15);
                const std::uint32_t data = in_.u32(attr + 16);
                if (raw != kNoIndex) {
                    name_value = pool().get(raw);
                } else if (data_type == kTypeString) {
                    name_value = pool().get(data);
                }
                break;
            }
        }

        if (name_value && !name_value->empty()) {
            if (element == "uses-permission") {
                features_.permissions.insert(*name_value);
            } else if (element == "action" && !stack_.empty() &&
                       stack_.back() == "intent-filter") {
                features_.intent_actions.insert(*name_value);
            }
        }
        stack_.push_back(element);
    }

    void on_end_element() {
        if (stack_.empty()) {
            fail(ErrorCode::MalformedAxml, "end element without matching start");
        }
        stack_.pop_back();
    }

    ByteReader in_;
    StringPool pool_;
    bool have_pool_ = false;
    bool android_namespace_declared_ = false;
    std::vector<std::uint32_t> resource_ids_;
    std::vector<std::string> stack_;
    ManifestFeatures features_;
};

} // namespace

ManifestFeatures parse_manifest(std::span<const std::uint8_t> payload) {
    return ManifestReader(payload).run();
}

} // namespace droidsel
