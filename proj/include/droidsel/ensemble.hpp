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
#include <string>
#include <string_view>
#include <vector>

#include "droidsel/dataset.hpp"
#include "droidsel/learner.hpp"

namespace droidsel {

// Binary selection mask over a learner pool; bit i = 1 keeps learner i.
class WeightVector {
public:
    WeightVector() = default;
    explicit WeightVector(std::size_t n, bool value = false) : bits_(n, value ? 1 : 0) {}
    explicit WeightVector(std::vector<std::uint8_t> bits);

    static WeightVector all(std::size_t n) { return WeightVector(n, true); }
    // Parses a 0/1 string such as "10110".
    static WeightVector parse(std::string_view text);

    std::size_t size() const noexcept { return bits_.size(); }
    bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }
    void set(std::size_t i, bool value) { bits_.at(i) = value ? 1 : 0; }
    void flip(std::size_t i) { bits_.at(i) ^= 1; }
    std::size_t popcount() const noexcept;
    std::vector<std::size_t> selected() const;
    std::string to_string() const;

    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    friend bool operator==(const WeightVector&, const WeightVector&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

struct EnsemblePool {
    std::uint64_t master_seed = 0;
    std::vector<std::uint64_t> bootstrap_seeds;
    std::vector<TrainedLearner> learners;

    std::size_t size() const noexcept { return learners.size(); }
    std::size_t dimension() const;

    friend bool operator==(const EnsemblePool&, const EnsemblePool&) = default;
};

// M draws with replacement from the M samples of `data`.
Dataset bootstrap_sample(const Dataset& data, std::uint64_t seed);
std::vector<std::size_t> bootstrap_indices(std::size_t m, std::uint64_t seed);

// seed_i used for replicate i of a pool grown from `master_seed`.
std::uint64_t bootstrap_seed(std::uint64_t master_seed, std::size_t index);

// Learner i is trained on bootstrap_sample(data, bootstrap_seed(master_seed, i))
// with its rng_seed derived the same way. `jobs` > 1 trains in parallel; the
// result does not depend on it. A failing learner is reported with its index.
EnsemblePool train_pool(const Dataset& data, std::size_t n, const LearnerSpec& spec,
                        std::uint64_t master_seed, std::size_t jobs = 1);

// sgn(sum_i omega_i f_i(x)) with a zero sum mapped to +1.
// Throws AllZeroWeights, DimensionMismatch, or InvalidConfig on a length mismatch.
Label vote(const EnsemblePool& pool, const WeightVector& omega, const FeatureVector& x);

// Majority vote over a row of +1/-1 predictions.
Label vote_predictions(std::span<const int> predictions, const WeightVector& omega);

double ensemble_accuracy(const EnsemblePool& pool, const WeightVector& omega,
                         const Dataset& data);

struct SelectiveEnsemble {
    EnsemblePool pool;
    WeightVector omega;

    std::size_t selected_count() const { return omega.popcount(); }
    Label predict(const FeatureVector& x) const { return vote(pool, omega, x); }
};

// Pool manifest (pool.txt) next to learner_<i>.model files:
//   droidsel-pool 1
//   n <N>
//   master_seed <seed>
//   learner <i> <bootstrap seed> <relative model path>    (N lines)
// An ensemble file is the same manifest plus a final "omega <bits>" line.
void save_pool(const EnsemblePool& pool, const std::filesystem::path& manifest);
EnsemblePool load_pool(const std::filesystem::path& manifest);
void save_ensemble(const SelectiveEnsemble& ensemble, const std::filesystem::path& manifest);
SelectiveEnsemble load_ensemble(const std::filesystem::path& manifest);

} // namespace droidsel
