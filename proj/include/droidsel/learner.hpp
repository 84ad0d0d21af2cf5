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
#include <span>
#include <string_view>
#include <vector>

#include "droidsel/dataset.hpp"

namespace droidsel {

enum class LearnerKind { Linear, Mlp };

std::string_view to_string(LearnerKind kind);
LearnerKind parse_learner_kind(std::string_view text);

struct LearnerSpec {
    LearnerKind kind = LearnerKind::Linear;
    double learning_rate = 0.1;
    std::size_t epochs = 20;
    std::size_t hidden_units = 16;  // mlp only
    double l2 = 1e-4;
    std::uint64_t rng_seed = 1;
    std::size_t batch_size = 16;  // 0 = full batch

    // Throws InvalidSpec when a field is out of range.
    void validate() const;

    friend bool operator==(const LearnerSpec&, const LearnerSpec&) = default;
};

// Number of trainable parameters for the given shape.
//   linear: [w (d), b]
//   mlp:    [W1 (d x h, feature-major), b1 (h), w2 (h), b2]
std::size_t parameter_count(LearnerKind kind, std::size_t dimension, std::size_t hidden_units);

// Pre-threshold score of the model described by `params` on `x`.
double margin_of(LearnerKind kind, std::size_t dimension, std::size_t hidden_units,
                 std::span<const double> params, const FeatureVector& x);

// Mean logistic loss log(1 + exp(-y m)) over `batch` plus (l2 / 2) ||weights||^2
// (biases excluded). Writes the gradient into `grad` when it is non-empty.
double loss_and_gradient(LearnerKind kind, std::size_t dimension, std::size_t hidden_units,
                         std::span<const double> params, const Dataset& data,
                         std::span<const std::size_t> batch, double l2, std::span<double> grad);

class TrainedLearner {
public:
    TrainedLearner(LearnerSpec spec, std::size_t dimension, std::vector<double> params);

    LearnerKind kind() const noexcept { return spec_.kind; }
    const LearnerSpec& spec() const noexcept { return spec_; }
    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t hidden_units() const noexcept {
        return spec_.kind == LearnerKind::Mlp ? spec_.hidden_units : 0;
    }
    const std::vector<double>& parameters() const noexcept { return params_; }

    // Throws DimensionMismatch when x.dimension differs from the learner's.
    double decision_margin(const FeatureVector& x) const;
    // +1 when the margin is >= 0, else -1.
    Label predict_label(const FeatureVector& x) const;

    friend bool operator==(const TrainedLearner&, const TrainedLearner&) = default;

private:
    LearnerSpec spec_;
    std::size_t dimension_;
    std::vector<double> params_;
};

// Seeded minibatch SGD on the logistic loss. `loss_history`, when given,
// receives the full training loss before the first epoch and after each one.
// Throws SingleClassData, NonFiniteLoss or InvalidSpec.
TrainedLearner train(const LearnerSpec& spec, const Dataset& data,
                     std::vector<double>* loss_history = nullptr);

void save_learner(const TrainedLearner& learner, std::ostream& out);
TrainedLearner load_learner(std::istream& in);
void save_learner(const TrainedLearner& learner, const std::filesystem::path& path);
TrainedLearner load_learner(const std::filesystem::path& path);

// Hex-float text helpers shared by the model and pool formats.
std::string format_double(double value);
double parse_double(std::string_view text);

} // namespace droidsel
