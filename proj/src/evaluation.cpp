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

#include "droidsel/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "droidsel/error.hpp"
#include "droidsel/random.hpp"

namespace droidsel {

void SplitSpec::validate() const {
    if (!(train > 0.0 && validation > 0.0 && test > 0.0)) {
        fail(ErrorCode::InvalidConfig, "split fractions must be positive");
    }
    if (std::abs(train + validation + test - 1.0) > 1e-9) {
        fail(ErrorCode::InvalidConfig, "split fractions must sum to 1");
    }
}

SplitIndices split_indices(std::span<const int> labels, const SplitSpec& spec) {
    spec.validate();
    if (labels.size() < 5) {
        fail(ErrorCode::TooSmall, "need at least 5 samples to split, got " +
                                      std::to_string(labels.size()));
    }
    Rng rng(spec.seed);
    SplitIndices out;
    for (int cls : {1, -1}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == cls) {
                members.push_back(i);
            }
        }
        shuffle(members.begin(), members.end(), rng);
        const auto n = static_cast<double>(members.size());
        const auto n_val = static_cast<std::size_t>(std::floor(n * spec.validation + 1e-9));
        const auto n_test = static_cast<std::size_t>(std::floor(n * spec.test + 1e-9));
        const std::size_t n_train = members.size() - n_val - n_test;
        auto first = members.begin();
        out.train.insert(out.train.end(), first, first + n_train);
        out.validation.insert(out.validation.end(), first + n_train, first + n_train + n_val);
        out.test.insert(out.test.end(), first + n_train + n_val, members.end());
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.validation.begin(), out.validation.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

DatasetSplit split(const Dataset& data, const SplitSpec& spec) {
    DatasetSplit out;
    out.indices = split_indices(data.labels(), spec);
    out.train = data.subset(out.indices.train);
    out.validation = data.subset(out.indices.validation);
    out.test = data.subset(out.indices.test);
    return out;
}

NoisyDataset inject_label_noise(const Dataset& data, double flip_fraction, std::uint64_t seed) {
    if (!(flip_fraction >= 0.0 && flip_fraction <= 0.5)) {
        fail(ErrorCode::InvalidConfig, "flip_fraction must lie in [0, 0.5]");
    }
    NoisyDataset out;
    out.data = data;
    out.original_labels = data.labels();
    const auto& labels = out.original_labels;
    const auto positives =
        static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    const std::size_t negatives = labels.size() - positives;
    const auto requested = static_cast<std::size_t>(
        std::floor(flip_fraction * static_cast<double>(std::min(positives, negatives)) + 1e-9));
    if (requested == 0) {
        return out;
    }

    std::vector<std::size_t> order(labels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    shuffle(order.begin(), order.end(), rng);
    for (std::size_t p = 0; p + 1 < order.size() && out.per_class < requested; p += 2) {
        const std::size_t a = order[p];
        const std::size_t b = order[p + 1];
        if (labels[a] != labels[b]) {
            out.flipped.push_back(a);
            out.flipped.push_back(b);
            ++out.per_class;
        }
    }
    out.shortfall = requested - out.per_class;
    std::sort(out.flipped.begin(), out.flipped.end());
    for (std::size_t i : out.flipped) {
        auto& label = out.data.vectors[i].label;
        label = flipped(*label);
    }
    return out;
}

MetricsReport metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn) {
    MetricsReport r;
    r.tp = tp;
    r.fp = fp;
    r.tn = tn;
    r.fn = fn;
    const std::size_t total = tp + fp + tn + fn;
    r.accuracy = total ? static_cast<double>(tp + tn) / static_cast<double>(total) : 0.0;
    if (tp + fp == 0) {
        r.precision = fn == 0 ? 1.0 : 0.0;
        r.degenerate = true;
    } else {
        r.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    }
    if (tp + fn == 0) {
        r.recall = fp == 0 ? 1.0 : 0.0;
        r.degenerate = true;
    } else {
        r.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    }
    const double denom = r.precision + r.recall;
    r.f1 = denom > 0.0 ? 2.0 * r.precision * r.recall / denom : 0.0;
    return r;
}

MetricsReport compute_metrics(std::span<const int> predictions, std::span<const int> labels) {
    if (predictions.size() != labels.size()) {
        fail(ErrorCode::LengthMismatch, "predictions and labels differ in length");
    }
    if (labels.empty()) {
        fail(ErrorCode::EmptyDataset, "metrics over zero samples");
    }
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool predicted = predictions[i] > 0;
        const bool actual = labels[i] > 0;
        if (predicted && actual) ++tp;
        else if (predicted) ++fp;
        else if (actual) ++fn;
        else ++tn;
    }
    return metrics_from_counts(tp, fp, tn, fn);
}

RepeatSummary summarize(std::vector<MetricsReport> runs) {
    RepeatSummary s;
    s.runs = std::move(runs);
    if (s.runs.empty()) {
        return s;
    }
    auto fold = [&](double MetricsReport::*field, double MetricRow::*slot) {
        double lo = s.runs.front().*field;
        double hi = lo;
        double sum = 0.0;
        for (const auto& r : s.runs) {
            lo = std::min(lo, r.*field);
            hi = std::max(hi, r.*field);
            sum += r.*field;
        }
        const double n = static_cast<double>(s.runs.size());
        // Clamp so rounding never puts the mean outside [worst, best].
        const double mean = std::clamp(sum / n, lo, hi);
        double sq = 0.0;
        for (const auto& r : s.runs) {
            sq += (r.*field - mean) * (r.*field - mean);
        }
        s.worst.*slot = lo;
        s.best.*slot = hi;
        s.average.*slot = mean;
        s.stddev.*slot = std::sqrt(sq / n);
    };
    fold(&MetricsReport::accuracy, &MetricRow::accuracy);
    fold(&MetricsReport::precision, &MetricRow::precision);
    fold(&MetricsReport::recall, &MetricRow::recall);
    fold(&MetricsReport::f1, &MetricRow::f1);
    return s;
}

Dataset make_synthetic(const SyntheticSpec& spec) {
    if (spec.samples < 2 || spec.features < 1) {
        fail(ErrorCode::InvalidConfig, "synthetic data needs >= 2 samples and >= 1 feature");
    }
    if (!(spec.density > 0.0 && spec.density < 1.0) || !(spec.noise_std >= 0.0)) {
        fail(ErrorCode::InvalidConfig, "synthetic density must lie in (0, 1), noise >= 0");
    }
    Rng rng(spec.seed);
    auto gaussian = [&rng]() {
        // Box-Muller; 1 - u keeps the log argument positive.
        const double u1 = 1.0 - uniform01(rng);
        const double u2 = uniform01(rng);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    };

    std::vector<double> weights(spec.features);
    for (auto& w : weights) {
        w = gaussian();
    }

    Dataset data;
    data.dimension = spec.features;
    data.vectors.resize(spec.samples);
    std::vector<double> scores(spec.samples);
    for (std::size_t i = 0; i < spec.samples; ++i) {
        auto& v = data.vectors[i];
        v.dimension = spec.features;
        double score = 0.0;
        for (std::uint32_t j = 0; j < spec.features; ++j) {
            if (bernoulli(rng, spec.density)) {
                v.active.push_back(j);
                score += weights[j];
            }
        }
        scores[i] = score + spec.noise_std * gaussian();
    }

    std::vector<std::size_t> rank(spec.samples);
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    std::stable_sort(rank.begin(), rank.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    for (std::size_t r = 0; r < spec.samples; ++r) {
        data.vectors[rank[r]].label = r < spec.samples / 2 ? Label::Malicious : Label::Benign;
    }
    return data;
}

} // namespace droidsel
