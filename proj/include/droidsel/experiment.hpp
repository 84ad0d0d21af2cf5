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
#include <string>
#include <variant>
#include <vector>

#include "droidsel/dataset.hpp"
#include "droidsel/evaluation.hpp"
#include "droidsel/features.hpp"
#include "droidsel/ga.hpp"
#include "droidsel/learner.hpp"
#include "droidsel/vocabulary.hpp"

namespace droidsel {

enum class DataSource { Synthetic, Records, Dataset };

// Every knob of the repeated split -> noise -> vectorize -> pool -> GA -> test
// pipeline. Loaded from a flat key=value file; see README for the key list.
struct ExperimentConfig {
    std::uint64_t seed = 1;
    std::size_t repeats = 30;
    std::size_t jobs = 1;
    bool allow_partial = false;

    DataSource source = DataSource::Synthetic;
    std::filesystem::path data_path;
    SyntheticSpec synthetic;
    VocabularyOptions vocab;

    SplitSpec split;
    double noise_fraction = 0.1;
    bool noise_train = true;
    bool noise_validation = true;
    // Flip labels over the whole dataset before splitting, test split included.
    bool noise_test = false;

    std::size_t pool_size = 20;
    LearnerSpec learner;
    GAConfig ga;

    // Throws InvalidConfig naming the offending key.
    void validate() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);
// Canonical key=value form, one per line; parse_config(write_config(c)) == c.
void write_config(std::ostream& out, const ExperimentConfig& config);

using ExperimentInput = std::variant<Dataset, std::vector<FeatureRecord>>;

// Loads the input named by config.source / config.data_path.
ExperimentInput load_input(const ExperimentConfig& config);

// Seeds for one repeat, all derived from (config.seed, run index).
struct RunSeeds {
    std::uint64_t split;
    std::uint64_t noise;
    std::uint64_t pool;
    std::uint64_t ga;
    std::uint64_t single;
};
RunSeeds run_seeds(std::uint64_t master_seed, std::size_t run);

// Data for one repeat after splitting, vectorizing and noise injection.
struct PreparedRun {
    DatasetSplit split;             // noisy train/validation, test as evaluated
    std::vector<int> clean_labels;  // labels of the source data before any noise
    std::vector<std::size_t> flipped_train;
    std::vector<std::size_t> flipped_validation;
    std::vector<std::size_t> flipped_source;  // only with noise_test
};

PreparedRun prepare_run(const ExperimentConfig& config, const ExperimentInput& input,
                        std::size_t run);

enum class Method { Single, FullPool, Selective };
inline constexpr Method kMethods[] = {Method::Single, Method::FullPool, Method::Selective};
std::string_view to_string(Method method);

struct RunResult {
    std::size_t run = 0;
    MetricsReport single;
    MetricsReport full_pool;
    MetricsReport selective;
    WeightVector omega;
    FitnessBreakdown ga;

    const MetricsReport& metrics(Method m) const;
};

struct RunFailure {
    std::size_t run = 0;
    std::string message;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<RunResult> runs;
    std::vector<RunFailure> failures;

    RepeatSummary summary(Method method) const;
};

RunResult run_once(const ExperimentConfig& config, const ExperimentInput& input, std::size_t run);

// Runs config.repeats independent repeats (in parallel when jobs > 1).
// A failing run aborts with its index unless allow_partial is set.
ExperimentReport repeated_experiment(const ExperimentConfig& config, const ExperimentInput& input);

void write_report(std::ostream& out, const ExperimentReport& report);

} // namespace droidsel
