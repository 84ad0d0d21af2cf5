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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "droidsel/dataset.hpp"
#include "droidsel/features.hpp"

namespace droidsel {

struct VocabularyOptions {
    std::size_t min_doc_freq = 2;
    std::size_t max_api_features = 2000;
};

struct VocabularyEntry {
    std::string name;  // prefixed: "perm:", "action:" or "api:"
    std::size_t doc_freq = 0;

    friend bool operator==(const VocabularyEntry&, const VocabularyEntry&) = default;
};

// Frozen mapping from prefixed feature name to column. Columns are laid out
// as [permissions | intent actions | api refs], each block sorted by name.
class Vocabulary {
public:
    // Builds from `entries` already in column order; validates the block layout.
    explicit Vocabulary(std::vector<VocabularyEntry> entries);

    std::size_t dimension() const noexcept { return entries_.size(); }
    std::size_t perm_offset() const noexcept { return 0; }
    std::size_t action_offset() const noexcept { return perm_count_; }
    std::size_t api_offset() const noexcept { return perm_count_ + action_count_; }
    std::size_t perm_count() const noexcept { return perm_count_; }
    std::size_t action_count() const noexcept { return action_count_; }
    std::size_t api_count() const noexcept { return entries_.size() - api_offset(); }

    const std::vector<VocabularyEntry>& entries() const noexcept { return entries_; }
    std::optional<std::uint32_t> index_of(std::string_view prefixed_name) const;

    // Out-of-vocabulary features are ignored.
    FeatureVector vectorize(const FeatureRecord& record) const;

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
        return a.entries_ == b.entries_;
    }

private:
    std::vector<VocabularyEntry> entries_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::size_t perm_count_ = 0;
    std::size_t action_count_ = 0;
};

Vocabulary build_vocabulary(const std::vector<FeatureRecord>& records,
                            const VocabularyOptions& options = {});

inline FeatureVector vectorize(const FeatureRecord& record, const Vocabulary& vocab) {
    return vocab.vectorize(record);
}

Dataset vectorize_all(const std::vector<FeatureRecord>& records, const Vocabulary& vocab);

// One line per column: <index> \t <prefixed-name> \t <doc_freq>.
void save_vocabulary(const Vocabulary& vocab, std::ostream& out);
Vocabulary load_vocabulary(std::istream& in);
void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary load_vocabulary(const std::filesystem::path& path);

} // namespace droidsel
