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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace droidsel {

// Insertion-ordered set of non-empty strings; duplicates are dropped and the
// first occurrence fixes the position.
class OrderedStringSet {
public:
    bool insert(std::string value);
    bool contains(std::string_view value) const;
    void merge(const OrderedStringSet& other);

    const std::vector<std::string>& items() const noexcept { return items_; }
    std::size_t size() const noexcept { return items_.size(); }
    bool empty() const noexcept { return items_.empty(); }

    friend bool operator==(const OrderedStringSet& a, const OrderedStringSet& b) {
        return a.items_ == b.items_;
    }

private:
    std::vector<std::string> items_;
    std::unordered_set<std::string> index_;
};

struct ManifestFeatures {
    OrderedStringSet permissions;
    OrderedStringSet intent_actions;

    friend bool operator==(const ManifestFeatures&, const ManifestFeatures&) = default;
};

struct DexFeatures {
    OrderedStringSet api_refs;  // "<class-descriptor>-><method-name>"

    friend bool operator==(const DexFeatures&, const DexFeatures&) = default;
};

// +1 malicious, -1 benign.
enum class Label : std::int8_t { Benign = -1, Malicious = 1 };

constexpr int label_value(Label l) noexcept { return static_cast<int>(l); }
constexpr Label label_from_sign(int v) noexcept { return v < 0 ? Label::Benign : Label::Malicious; }
constexpr Label flipped(Label l) noexcept {
    return l == Label::Malicious ? Label::Benign : Label::Malicious;
}

struct FeatureRecord {
    std::string app_id;
    std::optional<Label> label;
    ManifestFeatures manifest;
    DexFeatures dex;

    friend bool operator==(const FeatureRecord&, const FeatureRecord&) = default;
};

// Feature-name prefixes used by the record stream and the vocabulary.
inline constexpr std::string_view kPermPrefix = "perm:";
inline constexpr std::string_view kActionPrefix = "action:";
inline constexpr std::string_view kApiPrefix = "api:";

// Record stream: one record per line,
//   app_id \t label \t perm:<name> ... \t action:<name> ... \t api:<name> ...
// with label in {+1, -1, ?}. Each feature is its own tab-separated field;
// tab, newline, carriage return and backslash inside names are escaped.
std::string format_record(const FeatureRecord& record);
FeatureRecord parse_record(std::string_view line, std::size_t line_number = 0);

void write_records(std::ostream& out, const std::vector<FeatureRecord>& records);
std::vector<FeatureRecord> read_records(std::istream& in);

std::string format_label(std::optional<Label> label);
std::optional<Label> parse_label(std::string_view text, std::size_t line_number);

} // namespace droidsel
