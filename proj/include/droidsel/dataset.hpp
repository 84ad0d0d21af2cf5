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
#include <span>
#include <vector>

#include "droidsel/features.hpp"

namespace droidsel {

// Sparse binary sample: `active` lists the set columns, strictly increasing
// and below `dimension`.
struct FeatureVector {
    std::size_t dimension = 0;
    std::vector<std::uint32_t> active;
    std::optional<Label> label;

    bool is_active(std::uint32_t index) const;
    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct Dataset {
    std::size_t dimension = 0;
    std::vector<FeatureVector> vectors;

    std::size_t size() const noexcept { return vectors.size(); }
    bool empty() const noexcept { return vectors.empty(); }

    // Label as +1/-1; throws FormatError on an unlabeled sample.
    int label_at(std::size_t i) const;
    std::vector<int> labels() const;
    bool has_both_classes() const;

    Dataset subset(std::span<const std::size_t> indices) const;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Throws DimensionMismatch or FormatError when `v` breaks FeatureVector's invariants.
void validate_vector(const FeatureVector& v, std::size_t dimension);

// Sparse text format:
//   dim=<d> n=<M>
//   <label> <idx> <idx> ...      (one line per sample, label +1, -1 or ?)
void save_dataset(const Dataset& data, std::ostream& out);
Dataset load_dataset(std::istream& in);
void save_dataset(const Dataset& data, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

} // namespace droidsel
