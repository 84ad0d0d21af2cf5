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
#include <span>
#include <vector>

#include "droidsel/dataset.hpp"

namespace droidsel {

struct SplitSpec {
    double train = 0.6;
    double validation = 0.2;
    double test = 0.2;
    std::uint64_t seed = 0;

    // Throws InvalidConfig unless all fractions are positive and sum to 1.
    void validate() const;
};

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
};

struct DatasetSplit {
    Dataset train;
    Dataset validation;
    Dataset test;
    SplitIndices indices;  // positions in the source dataset
};

// Stratified split: within each class the samples are shuffled by seed and cut
// by the fractions (floor for validation and test, remainder to train). Each
// part lists indices in ascending order. Throws TooSmall below 5 samples.
SplitIndices split_indices(std::span<const int> labels, const SplitSpec& spec);
DatasetSplit split(const Dataset& data, const SplitSpec& spec);

struct NoisyDataset {
    Dataset data;
    std::vector<int> original_labels;
    std::vector<std::size_t> flipped;  // ascending
    std::size_t per_class = 0;         // flips actually applied to each class
    std::size_t shortfall = 0;         // requested per class minus applied
};

// Swaps labels between the classes: floor(flip_fraction * smaller class size)
// samples of each class are flipped, so class sizes are preserved. The flipped
// samples are the first mixed pairs of a seeded pairing of all samples; a pair
// stays mixed after its labels are swapped, so applying the same
// (flip_fraction, seed) twice restores the original labels.
NoisyDataset inject_label_noise(const Dataset& data, double flip_fraction, std::uint64_t seed);

struct MetricsReport {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    // Set when precision or recall hit a 0/0 denominator.
    bool degenerate = false;

    std::size_t total() const noexcept { return tp + fp + tn + fn; }
};

// +1 (malicious) is the positive class. 0/0 precision or recall is 1.0 when
// there was nothing to find and nothing was claimed, otherwise 0.0.
MetricsReport metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn);
MetricsReport compute_metrics(std::span<const int> predictions, std::span<const int> labels);

struct MetricRow {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct RepeatSummary {
    std::vector<MetricsReport> runs;
    MetricRow worst;
    MetricRow best;
    MetricRow average;
    MetricRow stddev;  // population standard deviation across runs

    std::size_t run_count() const noexcept { return runs.size(); }
};

RepeatSummary summarize(std::vector<MetricsReport> runs);

struct SyntheticSpec {
    std::size_t samples = 2000;
    std::size_t features = 50;
    double density = 0.3;     // probability a feature is set
    double noise_std = 1.5;   // Gaussian noise added to the planted score
    std::uint64_t seed = 7;
};

// Balanced binary dataset with a planted noisy linear concept: features are
// Bernoulli(density), score = w.x + noise with w ~ N(0, 1), and the upper half
// of the scores is labelled +1.
Dataset make_synthetic(const SyntheticSpec& spec);

} // namespace droidsel
