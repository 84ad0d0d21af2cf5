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

#include "fixtures.hpp"

#include <zlib.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace droidsel::testing {
namespace {

void put16(Bytes& b, std::uint32_t v) {
    b.push_back(static_cast<std::uint8_t>(v));
    b.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(Bytes& b, std::uint32_t v) {
    put16(b, v & 0xffff);
    put16(b, v >> 16);
}

void set32(Bytes& b, std::size_t at, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        b[at + i] = static_cast<std::uint8_t>(v >> (8 * i));
    }
}

void append(Bytes& b, const std::string& s) { b.insert(b.end(), s.begin(), s.end()); }
void append(Bytes& b, const Bytes& s) { b.insert(b.end(), s.begin(), s.end()); }

void pad4(Bytes& b) {
    while (b.size() % 4) {
        b.push_back(0);
    }
}

// Number of UTF-16 units for a string of 1-3 byte sequences.
std::uint32_t utf16_units(const std::string& s) {
    std::uint32_t n = 0;
    for (unsigned char c : s) {
        if ((c & 0xc0) != 0x80) {
            ++n;
        }
    }
    return n;
}

} // namespace

Bytes to_bytes(const std::string& s) { return Bytes(s.begin(), s.end()); }

std::uint32_t crc32_of(const Bytes& data) {
    return static_cast<std::uint32_t>(::crc32(0L, data.data(), static_cast<uInt>(data.size())));
}

Bytes deflate_raw(const Bytes& data) {
    z_stream s{};
    if (deflateInit2(&s, Z_BEST_COMPRESSION, Z_DEFLATED, -MAX_WBITS, 8, Z_DEFAULT_STRATEGY) !=
        Z_OK) {
        throw std::runtime_error("deflateInit2 failed");
    }
    Bytes out(deflateBound(&s, static_cast<uLong>(data.size())));
    s.next_in = const_cast<Bytef*>(data.data());
    s.avail_in = static_cast<uInt>(data.size());
    s.next_out = out.data();
    s.avail_out = static_cast<uInt>(out.size());
    if (deflate(&s, Z_FINISH) != Z_STREAM_END) {
        deflateEnd(&s);
        throw std::runtime_error("deflate failed");
    }
    out.resize(s.total_out);
    deflateEnd(&s);
    return out;
}

ZipBuilder& ZipBuilder::add(const std::string& path, const Bytes& data, bool deflate) {
    items_.push_back({path, data, deflate});
    return *this;
}

Bytes ZipBuilder::build() const {
    Bytes out;
    Bytes central;
    for (const auto& item : items_) {
        const Bytes payload = item.deflate ? deflate_raw(item.data) : item.data;
        const std::uint32_t crc = crc32_of(item.data);
        const auto offset = static_cast<std::uint32_t>(out.size());
        const std::uint16_t method = item.deflate ? 8 : 0;

        put32(out, 0x04034b50);
        put16(out, 20);
        put16(out, 0);
        put16(out, method);
        put16(out, 0);
        put16(out, 0);
        put32(out, crc);
        put32(out, static_cast<std::uint32_t>(payload.size()));
        put32(out, static_cast<std::uint32_t>(item.data.size()));
        put16(out, static_cast<std::uint32_t>(item.path.size()));
        put16(out, 0);
        append(out, item.path);
        append(out, payload);

        put32(central, 0x02014b50);
        put16(central, 20);
        put16(central, 20);
        put16(central, 0);
        put16(central, method);
        put16(central, 0);
        put16(central, 0);
        put32(central, crc);
        put32(central, static_cast<std::uint32_t>(payload.size()));
        put32(central, static_cast<std::uint32_t>(item.data.size()));
        put16(central, static_cast<std::uint32_t>(item.path.size()));
        put16(central, 0);
        put16(central, 0);
        put16(central, 0);
        put16(central, 0);
        put32(central, 0);
        put32(central, offset);
        append(central, item.path);
    }
    const auto cd_offset = static_cast<std::uint32_t>(out.size());
    append(out, central);
    put32(out, 0x06054b50);
    put16(out, 0);
    put16(out, 0);
    put16(out, static_cast<std::uint32_t>(items_.size()));
    put16(out, static_cast<std::uint32_t>(items_.size()));
    put32(out, static_cast<std::uint32_t>(central.size()));
    put32(out, cd_offset);
    put16(out, 0);
    return out;
}

std::uint32_t AxmlBuilder::intern(const std::string& s) {
    const auto it = std::find(strings_.begin(), strings_.end(), s);
    if (it != strings_.end()) {
        return static_cast<std::uint32_t>(it - strings_.begin());
    }
    strings_.push_back(s);
    return static_cast<std::uint32_t>(strings_.size() - 1);
}

AxmlBuilder& AxmlBuilder::resource(const std::string& name, std::uint32_t id) {
    // Resource ids map onto the leading pool entries, so these strings must
    // be interned first.
    if (strings_.size() != resources_.size()) {
        throw std::logic_error("resource() must precede other strings");
    }
    strings_.push_back(name);
    resources_.emplace_back(name, id);
    return *this;
}

AxmlBuilder& AxmlBuilder::start_namespace(const std::string& prefix, const std::string& uri) {
    Bytes c;
    put16(c, 0x0100);
    put16(c, 16);
    put32(c, 24);
    put32(c, 1);
    put32(c, kNone);
    put32(c, intern(prefix));
    put32(c, intern(uri));
    chunks_.push_back(std::move(c));
    return *this;
}

AxmlBuilder& AxmlBuilder::end_namespace(const std::string& prefix, const std::string& uri) {
    Bytes c;
    put16(c, 0x0101);
    put16(c, 16);
    put32(c, 24);
    put32(c, 1);
    put32(c, kNone);
    put32(c, intern(prefix));
    put32(c, intern(uri));
    chunks_.push_back(std::move(c));
    return *this;
}

AxmlBuilder& AxmlBuilder::start(const std::string& element, const std::vector<Attr>& attrs) {
    Bytes c;
    put16(c, 0x0102);
    put16(c, 16);
    put32(c, static_cast<std::uint32_t>(16 + 20 + 20 * attrs.size()));
    put32(c, 1);
    put32(c, kNone);
    put32(c, kNone);
    put32(c, intern(element));
    put16(c, 20);
    put16(c, 20);
    put16(c, static_cast<std::uint32_t>(attrs.size()));
    put16(c, 0);
    put16(c, 0);
    put16(c, 0);
    for (const auto& a : attrs) {
        put32(c, a.ns.empty() ? kNone : intern(a.ns));
        put32(c, intern(a.name));
        const std::uint32_t value = intern(a.value);
        put32(c, a.typed_only ? kNone : value);
        put16(c, 8);
        c.push_back(0);
        c.push_back(0x03);
        put32(c, value);
    }
    chunks_.push_back(std::move(c));
    return *this;
}

AxmlBuilder& AxmlBuilder::end(const std::string& element) {
    Bytes c;
    put16(c, 0x0103);
    put16(c, 16);
    put32(c, 24);
    put32(c, 1);
    put32(c, kNone);
    put32(c, kNone);
    put32(c, intern(element));
    chunks_.push_back(std::move(c));
    return *this;
}

Bytes AxmlBuilder::build() const {
    Bytes data;
    std::vector<std::uint32_t> offsets;
    for (const auto& s : strings_) {
        offsets.push_back(static_cast<std::uint32_t>(data.size()));
        if (utf8_) {
            data.push_back(static_cast<std::uint8_t>(utf16_units(s)));
            data.push_back(static_cast<std::uint8_t>(s.size()));
            append(data, s);
            data.push_back(0);
        } else {
            // ASCII-only in UTF-16 mode.
            put16(data, static_cast<std::uint32_t>(s.size()));
            for (unsigned char ch : s) {
                put16(data, ch);
            }
            put16(data, 0);
        }
    }
    pad4(data);

    Bytes pool;
    const auto strings_start = static_cast<std::uint32_t>(28 + 4 * strings_.size());
    put16(pool, 0x0001);
    put16(pool, 28);
    put32(pool, static_cast<std::uint32_t>(strings_start + data.size()));
    put32(pool, static_cast<std::uint32_t>(strings_.size()));
    put32(pool, 0);
    put32(pool, utf8_ ? (1u << 8) : 0);
    put32(pool, strings_start);
    put32(pool, 0);
    for (auto o : offsets) {
        put32(pool, o);
    }
    append(pool, data);

    Bytes body = pool;
    if (!resources_.empty()) {
        put16(body, 0x0180);
        put16(body, 8);
        put32(body, static_cast<std::uint32_t>(8 + 4 * resources_.size()));
        for (const auto& r : resources_) {
            put32(body, r.second);
        }
    }
    for (const auto& c : chunks_) {
        append(body, c);
    }

    Bytes out;
    put16(out, 0x0003);
    put16(out, 8);
    put32(out, static_cast<std::uint32_t>(8 + body.size()));
    append(out, body);
    return out;
}

Bytes make_manifest(const std::vector<std::string>& permissions,
                    const std::vector<std::string>& actions, bool utf8) {
    const std::string android = "http://schemas.android.com/apk/res/android";
    AxmlBuilder b(utf8);
    b.start_namespace("android", android);
    b.start("manifest", {{"", "package", "com.example.app"}});
    for (const auto& p : permissions) {
        b.start("uses-permission", {{android, "name", p}}).end("uses-permission");
    }
    b.start("application", {{android, "label", "Example"}});
    b.start("activity", {{android, "name", ".Main"}});
    if (!actions.empty()) {
        b.start("intent-filter");
        for (const auto& a : actions) {
            b.start("action", {{android, "name", a}}).end("action");
        }
        b.end("intent-filter");
    }
    b.end("activity").end("application").end("manifest");
    b.end_namespace("android", android);
    return b.build();
}

DexBuilder& DexBuilder::method(const std::string& class_descriptor, const std::string& name) {
    methods_.emplace_back(class_descriptor, name);
    return *this;
}

Bytes DexBuilder::build() const {
    std::set<std::string> string_set;
    std::set<std::string> type_set;
    for (const auto& [cls, name] : methods_) {
        string_set.insert(cls);
        string_set.insert(name);
        type_set.insert(cls);
    }
    const std::vector<std::string> strings(string_set.begin(), string_set.end());
    const std::vector<std::string> types(type_set.begin(), type_set.end());
    auto string_index = [&](const std::string& s) {
        return static_cast<std::uint32_t>(std::lower_bound(strings.begin(), strings.end(), s) -
                                          strings.begin());
    };
    auto type_index = [&](const std::string& s) {
        return static_cast<std::uint32_t>(std::lower_bound(types.begin(), types.end(), s) -
                                          types.begin());
    };

    const std::uint32_t string_ids_off = 0x70;
    const auto type_ids_off = static_cast<std::uint32_t>(string_ids_off + 4 * strings.size());
    const auto method_ids_off = static_cast<std::uint32_t>(type_ids_off + 4 * types.size());
    const auto data_off = static_cast<std::uint32_t>(method_ids_off + 8 * methods_.size());

    Bytes out(0x70, 0);
    const char magic[8] = {'d', 'e', 'x', '\n', '0', '3', '5', '\0'};
    std::copy(magic, magic + 8, out.begin());
    set32(out, 0x24, 0x70);
    set32(out, 0x28, 0x12345678);
    set32(out, 0x38, static_cast<std::uint32_t>(strings.size()));
    set32(out, 0x3c, strings.empty() ? 0 : string_ids_off);
    set32(out, 0x40, static_cast<std::uint32_t>(types.size()));
    set32(out, 0x44, types.empty() ? 0 : type_ids_off);
    set32(out, 0x58, static_cast<std::uint32_t>(methods_.size()));
    set32(out, 0x5c, methods_.empty() ? 0 : method_ids_off);

    Bytes data;
    std::vector<std::uint32_t> string_offsets;
    for (const auto& s : strings) {
        string_offsets.push_back(static_cast<std::uint32_t>(data_off + data.size()));
        std::uint32_t n = utf16_units(s);
        do {
            std::uint8_t b = n & 0x7f;
            n >>= 7;
            data.push_back(n ? (b | 0x80) : b);
        } while (n);
        append(data, s);
        data.push_back(0);
    }
    for (auto o : string_offsets) {
        put32(out, o);
    }
    for (const auto& t : types) {
        put32(out, string_index(t));
    }
    for (const auto& [cls, name] : methods_) {
        put16(out, type_index(cls));
        put16(out, 0);
        put32(out, string_index(name));
    }
    append(out, data);
    set32(out, 0x20, static_cast<std::uint32_t>(out.size()));
    return out;
}

Bytes make_apk(const std::vector<std::string>& permissions,
               const std::vector<std::string>& actions,
               const std::vector<std::pair<std::string, std::string>>& methods, bool deflate) {
    DexBuilder dex;
    for (const auto& [cls, name] : methods) {
        dex.method(cls, name);
    }
    return ZipBuilder()
        .add("AndroidManifest.xml", make_manifest(permissions, actions), deflate)
        .add("classes.dex", dex.build(), deflate)
        .add("res/values/strings.txt", to_bytes("hello"), false)
        .build();
}

EnsemblePool pool_from_matrix(const std::vector<std::vector<int>>& preds) {
    EnsemblePool pool;
    const std::size_t m = preds.empty() ? 0 : preds[0].size();
    for (std::size_t i = 0; i < preds.size(); ++i) {
        std::vector<double> params(m + 1, 0.0);
        for (std::size_t k = 0; k < m; ++k) {
            params[k] = preds[i][k];
        }
        pool.learners.emplace_back(LearnerSpec{}, m, std::move(params));
        pool.bootstrap_seeds.push_back(i);
    }
    return pool;
}

Dataset one_hot_samples(const std::vector<int>& labels) {
    Dataset data{labels.size(), {}};
    for (std::size_t k = 0; k < labels.size(); ++k) {
        data.vectors.push_back({labels.size(), {static_cast<std::uint32_t>(k)},
                                labels[k] > 0 ? Label::Malicious : Label::Benign});
    }
    return data;
}

void write_file(const std::filesystem::path& path, const Bytes& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    write_file(path, to_bytes(text));
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TempDir::TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("droidsel-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

} // namespace droidsel::testing
