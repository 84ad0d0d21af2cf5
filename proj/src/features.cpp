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

#include "droidsel/features.hpp"

#include <istream>
#include <ostream>

#include "droidsel/error.hpp"

namespace droidsel {

bool OrderedStringSet::insert(std::string value) {
    if (value.empty() || index_.contains(value)) {
        return false;
    }
    index_.insert(value);
    items_.push_back(std::move(value));
    return true;
}

bool OrderedStringSet::contains(std::string_view value) const {
    return index_.contains(std::string(value));
}

void OrderedStringSet::merge(const OrderedStringSet& other) {
    for (const auto& item : other.items_) {
        insert(item);
    }
}

namespace {

void append_escaped(std::string& out, std::string_view text) {
    for (char c : text) {
        switch (c) {
        case '\\': out += "\\\\"; break;
        case '\t': out += "\\t"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
        }
    }
}

std::string unescape(std::string_view text, std::size_t line_number) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '\\') {
            out += text[i];
            continue;
        }
        if (++i == text.size()) {
            fail(ErrorCode::FormatError,
                 "line " + std::to_string(line_number) + ": dangling escape");
        }
        switch (text[i]) {
        case '\\': out += '\\'; break;
        case 't': out += '\t'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        default:
            fail(ErrorCode::FormatError,
                 "line " + std::to_string(line_number) + ": unknown escape");
        }
    }
    return out;
}

} // namespace

std::string format_label(std::optional<Label> label) {
    if (!label) {
        return "?";
    }
    return *label == Label::Malicious ? "+1" : "-1";
}

std::optional<Label> parse_label(std::string_view text, std::size_t line_number) {
    if (text == "+1" || text == "1") {
        return Label::Malicious;
    }
    if (text == "-1") {
        return Label::Benign;
    }
    if (text == "?") {
        return std::nullopt;
    }
    fail(ErrorCode::FormatError,
         "line " + std::to_string(line_number) + ": bad label '" + std::string(text) + "'");
}

std::string format_record(const FeatureRecord& record) {
    std::string line;
    append_escaped(line, record.app_id);
    line += '\t';
    line += format_label(record.label);
    auto emit = [&line](std::string_view prefix, const OrderedStringSet& set) {
        for (const auto& name : set.items()) {
            line += '\t';
            line += prefix;
            append_escaped(line, name);
        }
    };
    emit(kPermPrefix, record.manifest.permissions);
    emit(kActionPrefix, record.manifest.intent_actions);
    emit(kApiPrefix, record.dex.api_refs);
    return line;
}

FeatureRecord parse_record(std::string_view line, std::size_t line_number) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
        if (tab == std::string_view::npos) {
            break;
        }
        start = tab + 1;
    }
    if (fields.size() < 2) {
        fail(ErrorCode::FormatError,
             "line " + std::to_string(line_number) + ": expected app_id and label");
    }

    FeatureRecord record;
    record.app_id = unescape(fields[0], line_number);
    if (record.app_id.empty()) {
        fail(ErrorCode::FormatError, "line " + std::to_string(line_number) + ": empty app_id");
    }
    record.label = parse_label(fields[1], line_number);

    // Blocks must appear in perm, action, api order.
    int block = 0;
    for (std::size_t i = 2; i < fields.size(); ++i) {
        const auto field = fields[i];
        int field_block;
        std::string_view name;
        if (field.starts_with(kPermPrefix)) {
            field_block = 0;
            name = field.substr(kPermPrefix.size());
        } else if (field.starts_with(kActionPrefix)) {
            field_block = 1;
            name = field.substr(kActionPrefix.size());
        } else if (field.starts_with(kApiPrefix)) {
            field_block = 2;
            name = field.substr(kApiPrefix.size());
        } else {
            fail(ErrorCode::FormatError, "line " + std::to_string(line_number) +
                                             ": unknown feature prefix in '" +
                                             std::string(field) + "'");
        }
        if (field_block < block) {
            fail(ErrorCode::FormatError, "line " + std::to_string(line_number) +
                                             ": feature blocks out of order");
        }
        block = field_block;
        auto value = unescape(name, line_number);
        if (value.empty()) {
            fail(ErrorCode::FormatError,
                 "line " + std::to_string(line_number) + ": empty feature name");
        }
        switch (field_block) {
        case 0: record.manifest.permissions.insert(std::move(value)); break;
        case 1: record.manifest.intent_actions.insert(std::move(value)); break;
        default: record.dex.api_refs.insert(std::move(value)); break;
        }
    }
    return record;
}

void write_records(std::ostream& out, const std::vector<FeatureRecord>& records) {
    for (const auto& record : records) {
        out << format_record(record) << '\n';
    }
}

std::vector<FeatureRecord> read_records(std::istream& in) {
    std::vector<FeatureRecord> records;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        records.push_back(parse_record(line, line_number));
    }
    return records;
}

} // namespace droidsel
