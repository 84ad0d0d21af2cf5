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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "droidsel/error.hpp"

namespace droidsel {

// Bounds-checked little-endian reads over an immutable byte span. Every
// out-of-range access raises `error_code` instead of touching memory.
class ByteReader {
public:
    ByteReader(std::span<const std::uint8_t> bytes, ErrorCode error_code)
        : bytes_(bytes), error_code_(error_code) {}

    std::size_t size() const noexcept { return bytes_.size(); }
    std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }

    bool in_bounds(std::uint64_t offset, std::uint64_t length) const noexcept {
        return offset <= bytes_.size() && length <= bytes_.size() - offset;
    }

    void require(std::uint64_t offset, std::uint64_t length, const char* what) const {
        if (!in_bounds(offset, length)) {
            fail(error_code_, std::string(what) + " out of bounds (offset " +
                                  std::to_string(offset) + ", length " +
                                  std::to_string(length) + ", size " +
                                  std::to_string(bytes_.size()) + ")");
        }
    }

    std::uint8_t u8(std::uint64_t offset) const {
        require(offset, 1, "u8");
        return bytes_[offset];
    }

    std::uint16_t u16(std::uint64_t offset) const {
        require(offset, 2, "u16");
        return static_cast<std::uint16_t>(bytes_[offset] | (bytes_[offset + 1] << 8));
    }

    std::uint32_t u32(std::uint64_t offset) const {
        require(offset, 4, "u32");
        return static_cast<std::uint32_t>(bytes_[offset]) |
               (static_cast<std::uint32_t>(bytes_[offset + 1]) << 8) |
               (static_cast<std::uint32_t>(bytes_[offset + 2]) << 16) |
               (static_cast<std::uint32_t>(bytes_[offset + 3]) << 24);
    }

    std::span<const std::uint8_t> slice(std::uint64_t offset, std::uint64_t length) const {
        require(offset, length, "slice");
        return bytes_.subspan(offset, length);
    }

    ErrorCode error_code() const noexcept { return error_code_; }

private:
    std::span<const std::uint8_t> bytes_;
    ErrorCode error_code_;
};

} // namespace droidsel
