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

#include "droidsel/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "droidsel/error.hpp"

namespace droidsel {

bool FeatureVector::is_active(std::uint32_t index) const {
    return std::binary_search(active.begin(), active.end(), index);
}

int Dataset::label_at(std::size_t i) const {
    const auto& label = vectors.at(i).label;
    if (!label) {
        fail(ErrorCode::FormatError, "sample " + std::to_string(i) + " is unlabeled");
    }
    return label_value(*label);
}

std::vector<int> Dataset::labels() const {
    std::vector<int> out(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        out[i] = label_at(i);
    }
    return out;
}

bool Dataset::has_both_classes() const {
    bool pos = false;
    bool neg = false;
    for (const auto& v : vectors) {
        if (v.label == Label::Malicious) {
            pos = true;
        } else if (v.label == Label::Benign) {
            neg = true;
        }
    }
    return pos && neg;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    Dataset out;
    out.dimension = dimension;
    out.vectors.reserve(indices.size());
    for (std::size_t i : indices) {
        out.vectors.push_back(vectors.at(i));
    }
    return out;
}

void validate_vector(const FeatureVector& v, std::size_t dimension) {
    if (v.dimension != dimension) {
        fail(ErrorCode::DimensionMismatch, "vector dimension " + std::to_string(v.dimension) +
                                               " != " + std::to_string(dimension));
    }
    for (std::size_t i = 0; i < v.active.size(); ++i) {
        if (v.active[i] >= dimension || (i > 0 && v.active[i] <= v.active[i - 1])) {
            fail(ErrorCode::FormatError, "active indices must be increasing and below dim");
        }
    }
}

void save_dataset(const Dataset& data, std::ostream& out) {
    out << "dim=" << data.dimension << " n=" << data.size() << '\n';
    for (const auto& v : data.vectors) {
        validate_vector(v, data.dimension);
        out << format_label(v.label);
        for (std::uint32_t idx : v.active) {
            out << ' ' << idx;
        }
        out << '\n';
    }
}

namespace {

[[noreturn]] void format_error(std::size_t line, const std::string& what) {
    fail(ErrorCode::FormatError, "line " + std::to_string(line) + ": " + what);
}

std::uint64_t parse_uint(std::string_view text, std::size_t line) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        format_error(line, "expected an unsigned integer, got '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::string_view> split_spaces(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) {
            ++i;
        }
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') {
            ++i;
        }
        if (i > start) {
            tokens.push_back(line.substr(start, i - start));
        }
    }
    return tokens;
}

} // namespace

Dataset load_dataset(std::istream& in) {
    std::string line;
    std::size_t line_number = 0;
    if (!std::getline(in, line)) {
        format_error(1, "missing header");
    }
    ++line_number;
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    const auto header = split_spaces(line);
    if (header.size() != 2 || !header[0].starts_with("dim=") || !header[1].starts_with("n=")) {
        format_error(line_number, "header must be 'dim=<d> n=<M>'");
    }
    Dataset data;
    data.dimension = parse_uint(header[0].substr(4), line_number);
    const std::uint64_t declared = parse_uint(header[1].substr(2), line_number);
    if (data.dimension == 0) {
        format_error(line_number, "dimension must be positive");
    }

    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const auto tokens = split_spaces(line);
        if (tokens.empty()) {
            continue;
        }
        FeatureVector v;
        v.dimension = data.dimension;
        v.label = parse_label(tokens[0], line_number);
        v.active.reserve(tokens.size() - 1);
        for (std::size_t t = 1; t < tokens.size(); ++t) {
            const std::uint64_t idx = parse_uint(tokens[t], line_number);
            if (idx >= data.dimension) {
                format_error(line_number, "index " + std::to_string(idx) +
                                              " >= dimension " + std::to_string(data.dimension));
            }
            if (!v.active.empty() && idx <= v.active.back()) {
                format_error(line_number, "indices must be strictly increasing");
            }
            v.active.push_back(static_cast<std::uint32_t>(idx));
        }
        data.vectors.push_back(std::move(v));
    }
    if (data.vectors.size() != declared) {
        fail(ErrorCode::DimensionMismatch, "header declares n=" + std::to_string(declared) +
                                               " but file holds " +
                                               std::to_string(data.vectors.size()) + " samples");
    }
    return data;
}

void save_dataset(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        fail(ErrorCode::IoError, "cannot write " + path.string());
    }
    save_dataset(data, out);
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::IoError, "cannot read " + path.string());
    }
    return load_dataset(in);
}

} // namespace droidsel
