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

#include <doctest.h>

#include "droidsel/apk_archive.hpp"
#include "droidsel/error.hpp"
#include "fixtures.hpp"

using namespace droidsel;
using namespace droidsel::testing;

namespace {

ErrorCode open_error(Bytes bytes) {
    try {
        const auto archive = ApkArchive::from_bytes(std::move(bytes));
        for (const auto& e : archive.entries()) {
            archive.read(e);
        }
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::IoError;
}

// Offsets inside the single-entry archive built by one_entry().
constexpr std::size_t kLocalCompressedSize = 18;
constexpr std::size_t kLocalNameLength = 26;

Bytes one_entry(const Bytes& payload, bool deflate = false) {
    return ZipBuilder().add("AndroidManifest.xml", payload, deflate).build();
}

std::size_t central_offset(const Bytes& zip) {
    const std::size_t eocd = zip.size() - 22;
    return zip[eocd + 16] | (zip[eocd + 17] << 8) | (zip[eocd + 18] << 16) |
           (std::size_t{zip[eocd + 19]} << 24);
}

void poke32(Bytes& b, std::size_t at, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        b[at + i] = static_cast<std::uint8_t>(v >> (8 * i));
    }
}

} // namespace

TEST_CASE("stored single-entry archive lists one entry") {
    const Bytes payload = to_bytes("manifest bytes");
    const auto archive = ApkArchive::from_bytes(one_entry(payload));
    REQUIRE(archive.entries().size() == 1);
    const auto& e = archive.entries()[0];
    CHECK(e.path == "AndroidManifest.xml");
    CHECK(e.method == 0);
    CHECK(e.uncompressed_size == payload.size());
    REQUIRE(archive.manifest_entry() != nullptr);
    CHECK(archive.read(*archive.manifest_entry()) == payload);
}

TEST_CASE("deflated entries decode to their original bytes") {
    Bytes payload;
    for (int i = 0; i < 5000; ++i) {
        payload.push_back(static_cast<std::uint8_t>((i * 7) % 13));
    }
    const auto archive = ApkArchive::from_bytes(one_entry(payload, true));
    const auto& e = archive.entries()[0];
    CHECK(e.method == 8);
    CHECK(e.compressed_size < payload.size());
    CHECK(archive.read(e) == payload);
}

TEST_CASE("empty and foreign files are not archives") {
    CHECK(open_error({}) == ErrorCode::NotAnArchive);
    CHECK(open_error(to_bytes("this is plainly not a zip file at all, just some text")) ==
          ErrorCode::NotAnArchive);
}

TEST_CASE("archive cut short is truncated") {
    const Bytes zip = one_entry(to_bytes("0123456789"));
    CHECK(open_error(Bytes(zip.begin(), zip.begin() + 12)) == ErrorCode::TruncatedArchive);
    CHECK(open_error(Bytes(zip.begin(), zip.end() - 30)) == ErrorCode::TruncatedArchive);
}

TEST_CASE("entry declaring 100 bytes over a 50-byte payload is truncated") {
    const Bytes payload(50, 'x');
    Bytes zip = one_entry(payload);
    const std::size_t cd = central_offset(zip);
    poke32(zip, kLocalCompressedSize, 100);
    poke32(zip, kLocalCompressedSize + 4, 100);
    poke32(zip, cd + 20, 100);
    poke32(zip, cd + 24, 100);
    CHECK(open_error(zip) == ErrorCode::TruncatedArchive);
}

TEST_CASE("CRC and size mismatches are corrupt, not silent") {
    const Bytes payload = to_bytes("payload for the crc check");
    SUBCASE("crc") {
        Bytes zip = one_entry(payload);
        poke32(zip, central_offset(zip) + 16, 0xdeadbeef);
        CHECK(open_error(zip) == ErrorCode::CorruptArchive);
    }
    SUBCASE("inflated size larger than declared") {
        Bytes zip = one_entry(payload, true);
        poke32(zip, central_offset(zip) + 24, static_cast<std::uint32_t>(payload.size() - 3));
        CHECK(open_error(zip) == ErrorCode::CorruptArchive);
    }
    SUBCASE("inflated size smaller than declared") {
        Bytes zip = one_entry(payload, true);
        poke32(zip, central_offset(zip) + 24, static_cast<std::uint32_t>(payload.size() + 3));
        CHECK(open_error(zip) == ErrorCode::CorruptArchive);
    }
    SUBCASE("garbage deflate stream") {
        Bytes zip = one_entry(payload, true);
        const std::size_t data = 30 + zip[kLocalNameLength];
        for (std::size_t i = data; i < data + 6; ++i) {
            zip[i] = 0xff;
        }
        CHECK(open_error(zip) == ErrorCode::CorruptArchive);
    }
}

TEST_CASE("duplicate entry paths are rejected") {
    const Bytes zip = ZipBuilder()
                          .add("AndroidManifest.xml", to_bytes("a"))
                          .add("AndroidManifest.xml", to_bytes("b"))
                          .build();
    CHECK(open_error(zip) == ErrorCode::CorruptArchive);
}

TEST_CASE("unsupported methods and encryption are typed errors") {
    SUBCASE("method 12") {
        Bytes zip = one_entry(to_bytes("abc"));
        zip[8] = 12;
        zip[central_offset(zip) + 10] = 12;
        CHECK(open_error(zip) == ErrorCode::UnsupportedCompression);
    }
    SUBCASE("encrypted flag") {
        Bytes zip = one_entry(to_bytes("abc"));
        zip[central_offset(zip) + 8] = 1;
        CHECK(open_error(zip) == ErrorCode::UnsupportedCompression);
    }
}

TEST_CASE("dex entries come back in load order") {
    const Bytes zip = ZipBuilder()
                          .add("classes10.dex", to_bytes("j"))
                          .add("classes2.dex", to_bytes("b"))
                          .add("AndroidManifest.xml", to_bytes("m"))
                          .add("classes.dex", to_bytes("a"))
                          .add("classes02.dex", to_bytes("x"))
                          .add("lib/classes3.dex", to_bytes("y"))
                          .add("classes1.dex", to_bytes("z"))
                          .build();
    const auto archive = ApkArchive::from_bytes(zip);
    std::vector<std::string> names;
    for (const auto* e : archive.dex_entries()) {
        names.push_back(e->path);
    }
    CHECK(names == std::vector<std::string>{"classes.dex", "classes2.dex", "classes10.dex"});
}

TEST_CASE("dex_load_index") {
    CHECK(dex_load_index("classes.dex") == 1);
    CHECK(dex_load_index("classes2.dex") == 2);
    CHECK(dex_load_index("classes1.dex") == -1);
    CHECK(dex_load_index("classes02.dex") == -1);
    CHECK(dex_load_index("classesX.dex") == -1);
    CHECK(dex_load_index("classes.jar") == -1);
}

TEST_CASE("random byte corruption never escapes as anything but a typed error") {
    const Bytes good = make_apk({"android.permission.INTERNET"}, {"a.B"},
                                {{"Lcom/x/Y;", "run"}});
    std::uint64_t state = 12345;
    auto next = [&] {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return state >> 33;
    };
    for (int trial = 0; trial < 2000; ++trial) {
        Bytes bad = good;
        const int flips = 1 + static_cast<int>(next() % 4);
        for (int f = 0; f < flips; ++f) {
            bad[next() % bad.size()] = static_cast<std::uint8_t>(next());
        }
        if (trial % 5 == 0) {
            bad.resize(next() % bad.size());
        }
        try {
            const auto archive = ApkArchive::from_bytes(bad);
            for (const auto& e : archive.entries()) {
                archive.read(e);
            }
        } catch (const Error&) {
        }
    }
}

TEST_CASE("missing file is an IO error") {
    CHECK_THROWS_AS(ApkArchive::open("/nonexistent/droidsel/file.apk"), Error);
}
