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

#include "droidsel/vocabulary.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "droidsel/error.hpp"

namespace droidsel {
namespace {

int block_of(std::string_view name) {
    if (name.starts_with(kPermPrefix)) return 0;
    if (name.starts_with(kActionPrefix)) return 1;
    if (name.starts_with(kApiPrefix)) return 2;
    return -1;
}

// Names that would break the line-oriented vocabulary file never become columns.
bool storable(std::string_view name) {
    return name.find_first_of("\t\n\r") == std::string_view::npos;
}

std::string prefixed(std::string_view prefix, std::string_view name) {
    std::string out(prefix);
    out += name;
    return out;
}

} // namespace

Vocabulary::Vocabulary(std::vector<VocabularyEntry> entries) : entries_(std::move(entries)) {
    int block = 0;
    index_.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& name = entries_[i].name;
        const int b = block_of(name);
        if (b < 0 || name.size() == (b == 0   ? kPermPrefix.size()
                                     : b == 1 ? kActionPrefix.size()
                                              : kApiPrefix.size())) {
            fail(ErrorCode::FormatError, "vocabulary entry '" + name + "' has no valid prefix");
        }
        if (b < block) {
            fail(ErrorCode::FormatError, "vocabulary blocks out of order at '" + name + "'");
        }
        block = b;
        if (b == 0) ++perm_count_;
        if (b == 1) ++action_count_;
        if (!index_.emplace(name, static_cast<std::uint32_t>(i)).second) {
            fail(ErrorCode::FormatError, "duplicate vocabulary entry '" + name + "'");
        }
    }
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view prefixed_name) const {
    const auto it = index_.find(std::string(prefixed_name));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

FeatureVector Vocabulary::vectorize(const FeatureRecord& record) const {
    FeatureVector v;
    v.dimension = dimension();
    v.label = record.label;
    auto add = [&](std::string_view prefix, const OrderedStringSet& set) {
        for (const auto& name : set.items()) {
            if (const auto idx = index_of(prefixed(prefix, name))) {
                v.active.push_back(*idx);
            }
        }
    };
    add(kPermPrefix, record.manifest.permissions);
    add(kActionPrefix, record.manifest.intent_actions);
    add(kApiPrefix, record.dex.api_refs);
    std::sort(v.active.begin(), v.active.end());
    v.active.erase(std::unique(v.active.begin(), v.active.end()), v.active.end());
    return v;
}

Vocabulary build_vocabulary(const std::vector<FeatureRecord>& records,
                            const VocabularyOptions& options) {
    if (records.empty()) {
        fail(ErrorCode::EmptyCorpus, "cannot build a vocabulary from zero records");
    }
    if (options.min_doc_freq < 1) {
        fail(ErrorCode::InvalidConfig, "min_doc_freq must be >= 1");
    }

    // Sets inside a record are deduplicated, so counting occurrences counts documents.
    std::map<std::string, std::size_t> perm_df, action_df, api_df;
    for (const auto& r : records) {
        for (const auto& n : r.manifest.permissions.items()) ++perm_df[n];
        for (const auto& n : r.manifest.intent_actions.items()) ++action_df[n];
        for (const auto& n : r.dex.api_refs.items()) ++api_df[n];
    }

    std::vector<VocabularyEntry> entries;
    auto append_block = [&](std::string_view prefix,
                            const std::map<std::string, std::size_t>& df) {
        for (const auto& [name, count] : df) {
            if (count >= options.min_doc_freq && storable(name)) {
                entries.push_back({prefixed(prefix, name), count});
            }
        }
    };
    append_block(kPermPrefix, perm_df);
    append_block(kActionPrefix, action_df);

    std::vector<std::pair<std::string, std::size_t>> apis;
    for (const auto& [name, count] : api_df) {
        if (count >= options.min_doc_freq && storable(name)) {
            apis.emplace_back(name, count);
        }
    }
    // Highest document frequency first, ties by name.
    std::stable_sort(apis.begin(), apis.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (apis.size() > options.max_api_features) {
        apis.resize(options.max_api_features);
    }
    std::sort(apis.begin(), apis.end());
    for (auto& [name, count] : apis) {
        entries.push_back({prefixed(kApiPrefix, name), count});
    }
    return Vocabulary(std::move(entries));
}

Dataset vectorize_all(const std::vector<FeatureRecord>& records, const Vocabulary& vocab) {
    Dataset data;
    data.dimension = vocab.dimension();
    data.vectors.reserve(records.size());
    for (const auto& r : records) {
        data.vectors.push_back(vocab.vectorize(r));
    }
    return data;
}

void save_vocabulary(const Vocabulary& vocab, std::ostream& out) {
    const auto& entries = vocab.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        out << i << '\t' << entries[i].name << '\t' << entries[i].doc_freq << '\n';
    }
}

Vocabulary load_vocabulary(std::istream& in) {
    std::vector<VocabularyEntry> entries;
    std::string line;
    std::size_t line_number = 0;
    auto bad = [&](const std::string& what) {
        fail(ErrorCode::FormatError, "vocabulary line " + std::to_string(line_number) + ": " + what);
    };
    auto to_uint = [&](std::string_view text) {
        std::size_t value = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
            bad("expected an unsigned integer");
        }
        return value;
    };
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
            bad("expected three tab-separated fields");
        }
        const std::string_view view(line);
        if (to_uint(view.substr(0, t1)) != entries.size()) {
            bad("indices must be contiguous from 0");
        }
        entries.push_back({std::string(view.substr(t1 + 1, t2 - t1 - 1)),
                           to_uint(view.substr(t2 + 1))});
    }
    return Vocabulary(std::move(entries));
}

void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        fail(ErrorCode::IoError, "cannot write " + path.string());
    }
    save_vocabulary(vocab, out);
}

Vocabulary load_vocabulary(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::IoError, "cannot read " + path.string());
    }
    return load_vocabulary(in);
}

} // namespace droidsel
