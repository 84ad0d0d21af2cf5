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

// Byte-level builders for the archive, binary XML and DEX fixtures used by
// the tests. They write the formats directly so parser tests do not depend on
// any Android tooling.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "droidsel/dataset.hpp"
#include "droidsel/ensemble.hpp"

namespace droidsel::testing {

using Bytes = std::vector<std::uint8_t>;

Bytes to_bytes(const std::string& s);

// Minimal ZIP writer: local headers, central directory, end record.
class ZipBuilder {
public:
    ZipBuilder& add(const std::string& path, const Bytes& data, bool deflate = false);
    Bytes build() const;

private:
    struct Item {
        std::string path;
        Bytes data;
        bool deflate;
    };
    std::vector<Item> items_;
};

Bytes deflate_raw(const Bytes& data);
std::uint32_t crc32_of(const Bytes& data);

// Binary XML writer. Strings are interned into one pool; the android
// namespace and resource map are emitted only when requested.
class AxmlBuilder {
public:
    static constexpr std::uint32_t kNone = 0xffffffffu;

    struct Attr {
        std::string ns;  // empty = no namespace
        std::string name;
        std::string value;
        bool typed_only = false;  // store the value only as a typed string
    };

    explicit AxmlBuilder(bool utf8 = false) : utf8_(utf8) {}

    AxmlBuilder& start_namespace(const std::string& prefix, const std::string& uri);
    AxmlBuilder& end_namespace(const std::string& prefix, const std::string& uri);
    AxmlBuilder& start(const std::string& element, const std::vector<Attr>& attrs = {});
    AxmlBuilder& end(const std::string& element);

    // Maps the given pool string to a resource id in a resource-map chunk.
    AxmlBuilder& resource(const std::string& name, std::uint32_t id);

    Bytes build() const;

    std::uint32_t intern(const std::string& s);

private:
    bool utf8_;
    std::vector<std::string> strings_;
    std::vector<std::pair<std::string, std::uint32_t>> resources_;
    std::vector<Bytes> chunks_;
};

// Android manifest with the usual android namespace declaration.
Bytes make_manifest(const std::vector<std::string>& permissions,
                    const std::vector<std::string>& actions, bool utf8 = false);

class DexBuilder {
public:
    DexBuilder& method(const std::string& class_descriptor, const std::string& name);
    Bytes build() const;

private:
    std::vector<std::pair<std::string, std::string>> methods_;
};

Bytes make_apk(const std::vector<std::string>& permissions,
               const std::vector<std::string>& actions,
               const std::vector<std::pair<std::string, std::string>>& methods,
               bool deflate = true);

// Pool whose learner i predicts preds[i][k] on sample k of one_hot_samples():
// a linear learner with weight preds[i][k] on column k and zero bias.
EnsemblePool pool_from_matrix(const std::vector<std::vector<int>>& preds);
Dataset one_hot_samples(const std::vector<int>& labels);

void write_file(const std::filesystem::path& path, const Bytes& bytes);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace droidsel::testing
