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

#include "droidsel/learner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "droidsel/error.hpp"
#include "droidsel/random.hpp"

namespace droidsel {

std::string_view to_string(LearnerKind kind) {
    return kind == LearnerKind::Linear ? "linear" : "mlp";
}

LearnerKind parse_learner_kind(std::string_view text) {
    if (text == "linear") return LearnerKind::Linear;
    if (text == "mlp") return LearnerKind::Mlp;
    fail(ErrorCode::InvalidSpec, "unknown learner kind '" + std::string(text) + "'");
}

void LearnerSpec::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        fail(ErrorCode::InvalidSpec, "learning_rate must be a positive finite number");
    }
    if (epochs < 1) {
        fail(ErrorCode::InvalidSpec, "epochs must be >= 1");
    }
    if (kind == LearnerKind::Mlp && hidden_units < 1) {
        fail(ErrorCode::InvalidSpec, "hidden_units must be >= 1");
    }
    if (!(l2 >= 0.0) || !std::isfinite(l2)) {
        fail(ErrorCode::InvalidSpec, "l2 must be a non-negative finite number");
    }
}

std::size_t parameter_count(LearnerKind kind, std::size_t dimension, std::size_t hidden_units) {
    if (kind == LearnerKind::Linear) {
        return dimension + 1;
    }
    return dimension * hidden_units + 2 * hidden_units + 1;
}

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) {
    return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
    if (z >= 0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

struct MlpLayout {
    std::size_t d, h;
    std::size_t w1(std::size_t feature, std::size_t unit) const { return feature * h + unit; }
    std::size_t b1(std::size_t unit) const { return d * h + unit; }
    std::size_t w2(std::size_t unit) const { return d * h + h + unit; }
    std::size_t b2() const { return d * h + 2 * h; }
};

double mlp_forward(const MlpLayout& L, std::span<const double> p, const FeatureVector& x,
                   std::vector<double>& hidden) {
    hidden.assign(L.h, 0.0);
    for (std::size_t j = 0; j < L.h; ++j) {
        hidden[j] = p[L.b1(j)];
    }
    for (std::uint32_t a : x.active) {
        const double* col = &p[L.w1(a, 0)];
        for (std::size_t j = 0; j < L.h; ++j) {
            hidden[j] += col[j];
        }
    }
    double m = p[L.b2()];
    for (std::size_t j = 0; j < L.h; ++j) {
        hidden[j] = std::tanh(hidden[j]);
        m += p[L.w2(j)] * hidden[j];
    }
    return m;
}

double linear_forward(std::size_t d, std::span<const double> p, const FeatureVector& x) {
    double m = p[d];
    for (std::uint32_t a : x.active) {
        m += p[a];
    }
    return m;
}

void check_dimension(std::size_t expected, const FeatureVector& x) {
    if (x.dimension != expected) {
        fail(ErrorCode::DimensionMismatch, "input dimension " + std::to_string(x.dimension) +
                                               " != learner dimension " +
                                               std::to_string(expected));
    }
}

} // namespace

double margin_of(LearnerKind kind, std::size_t dimension, std::size_t hidden_units,
                 std::span<const double> params, const FeatureVector& x) {
    check_dimension(dimension, x);
    if (kind == LearnerKind::Linear) {
        return linear_forward(dimension, params, x);
    }
    std::vector<double> hidden;
    return mlp_forward({dimension, hidden_units}, params, x, hidden);
}

double loss_and_gradient(LearnerKind kind, std::size_t dimension, std::size_t hidden_units,
                         std::span<const double> params, const Dataset& data,
                         std::span<const std::size_t> batch, double l2, std::span<double> grad) {
    const bool want_grad = !grad.empty();
    if (want_grad) {
        std::fill(grad.begin(), grad.end(), 0.0);
    }
    if (batch.empty()) {
        fail(ErrorCode::EmptyDataset, "loss over an empty batch");
    }
    const double scale = 1.0 / static_cast<double>(batch.size());
    const MlpLayout layout{dimension, hidden_units};
    std::vector<double> hidden;
    double loss = 0.0;

    for (std::size_t i : batch) {
        const FeatureVector& x = data.vectors[i];
        const double y = data.label_at(i);
        const double m = kind == LearnerKind::Linear ? linear_forward(dimension, params, x)
                                                     : mlp_forward(layout, params, x, hidden);
        loss += softplus(-y * m);
        if (!want_grad) {
            continue;
        }
        // d/dm log(1 + exp(-y m)) = -y * sigmoid(-y m)
        const double dm = -y * sigmoid(-y * m) * scale;
        if (kind == LearnerKind::Linear) {
            for (std::uint32_t a : x.active) {
                grad[a] += dm;
            }
            grad[dimension] += dm;
        } else {
            grad[layout.b2()] += dm;
            for (std::size_t j = 0; j < hidden_units; ++j) {
                grad[layout.w2(j)] += dm * hidden[j];
                const double dz = dm * params[layout.w2(j)] * (1.0 - hidden[j] * hidden[j]);
                grad[layout.b1(j)] += dz;
                for (std::uint32_t a : x.active) {
                    grad[layout.w1(a, j)] += dz;
                }
            }
        }
    }
    loss *= scale;

    if (l2 > 0.0) {
        auto penalize = [&](std::size_t first, std::size_t last) {
            for (std::size_t k = first; k < last; ++k) {
                loss += 0.5 * l2 * params[k] * params[k];
                if (want_grad) {
                    grad[k] += l2 * params[k];
                }
            }
        };
        if (kind == LearnerKind::Linear) {
            penalize(0, dimension);
        } else {
            penalize(0, dimension * hidden_units);
            penalize(layout.w2(0), layout.w2(0) + hidden_units);
        }
    }
    return loss;
}

TrainedLearner::TrainedLearner(LearnerSpec spec, std::size_t dimension, std::vector<double> params)
    : spec_(spec), dimension_(dimension), params_(std::move(params)) {
    spec_.validate();
    if (params_.size() != parameter_count(spec_.kind, dimension_, spec_.hidden_units)) {
        fail(ErrorCode::FormatError, "parameter count does not match learner shape");
    }
    if (!std::all_of(params_.begin(), params_.end(), [](double v) { return std::isfinite(v); })) {
        fail(ErrorCode::NonFiniteLoss, "learner parameters must be finite");
    }
}

double TrainedLearner::decision_margin(const FeatureVector& x) const {
    return margin_of(spec_.kind, dimension_, spec_.hidden_units, params_, x);
}

Label TrainedLearner::predict_label(const FeatureVector& x) const {
    return decision_margin(x) >= 0.0 ? Label::Malicious : Label::Benign;
}

TrainedLearner train(const LearnerSpec& spec, const Dataset& data,
                     std::vector<double>* loss_history) {
    spec.validate();
    if (data.empty()) {
        fail(ErrorCode::EmptyDataset, "training set is empty");
    }
    for (const auto& v : data.vectors) {
        validate_vector(v, data.dimension);
    }
    if (!data.has_both_classes()) {
        fail(ErrorCode::SingleClassData, "training data must contain both classes");
    }
    (void)data.labels();  // rejects unlabeled samples

    const std::size_t d = data.dimension;
    const std::size_t h = spec.hidden_units;
    std::vector<double> params(parameter_count(spec.kind, d, h), 0.0);
    Rng rng(spec.rng_seed);
    if (spec.kind == LearnerKind::Mlp) {
        const MlpLayout layout{d, h};
        const double r1 = 1.0 / std::sqrt(static_cast<double>(d));
        const double r2 = 1.0 / std::sqrt(static_cast<double>(h));
        for (std::size_t k = 0; k < d * h; ++k) {
            params[k] = (2.0 * uniform01(rng) - 1.0) * r1;
        }
        for (std::size_t j = 0; j < h; ++j) {
            params[layout.w2(j)] = (2.0 * uniform01(rng) - 1.0) * r2;
        }
    }

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t batch_size =
        spec.batch_size == 0 ? data.size() : std::min(spec.batch_size, data.size());
    std::vector<double> grad(params.size());

    auto full_loss = [&]() {
        const double loss =
            loss_and_gradient(spec.kind, d, h, params, data, order, spec.l2, std::span<double>{});
        if (!std::isfinite(loss)) {
            fail(ErrorCode::NonFiniteLoss, "training loss diverged; lower the learning rate");
        }
        return loss;
    };
    if (loss_history) {
        loss_history->clear();
        loss_history->push_back(full_loss());
    }

    for (std::size_t epoch = 0; epoch < spec.epochs; ++epoch) {
        if (spec.batch_size != 0) {
            shuffle(order.begin(), order.end(), rng);
        }
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            const std::size_t len = std::min(batch_size, order.size() - start);
            const std::span<const std::size_t> batch(order.data() + start, len);
            loss_and_gradient(spec.kind, d, h, params, data, batch, spec.l2, grad);
            for (std::size_t k = 0; k < params.size(); ++k) {
                params[k] -= spec.learning_rate * grad[k];
            }
        }
        const double loss = full_loss();
        if (loss_history) {
            loss_history->push_back(loss);
        }
    }
    return TrainedLearner(spec, d, std::move(params));
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::hex);
    return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
    double value = 0.0;
    const bool negative = text.starts_with('-');
    const auto body = negative ? text.substr(1) : text;
    const auto [ptr, ec] =
        std::from_chars(body.data(), body.data() + body.size(), value, std::chars_format::hex);
    if (body.empty() || ec != std::errc() || ptr != body.data() + body.size()) {
        fail(ErrorCode::FormatError, "bad hex float '" + std::string(text) + "'");
    }
    return negative ? -value : value;
}

namespace {

constexpr std::string_view kLearnerMagic = "droidsel-learner 1";

std::string expect_key(std::istream& in, std::string_view key) {
    std::string k, v;
    if (!(in >> k >> v) || k != key) {
        fail(ErrorCode::FormatError, "model file: expected key '" + std::string(key) + "'");
    }
    return v;
}

std::uint64_t to_u64(const std::string& text) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        fail(ErrorCode::FormatError, "model file: bad integer '" + text + "'");
    }
    return value;
}

} // namespace

void save_learner(const TrainedLearner& learner, std::ostream& out) {
    const auto& s = learner.spec();
    out << kLearnerMagic << '\n'
        << "kind " << to_string(s.kind) << '\n'
        << "dimension " << learner.dimension() << '\n'
        << "hidden_units " << s.hidden_units << '\n'
        << "learning_rate " << format_double(s.learning_rate) << '\n'
        << "epochs " << s.epochs << '\n'
        << "l2 " << format_double(s.l2) << '\n'
        << "batch_size " << s.batch_size << '\n'
        << "rng_seed " << s.rng_seed << '\n'
        << "params " << learner.parameters().size() << '\n';
    for (double p : learner.parameters()) {
        out << format_double(p) << '\n';
    }
}

TrainedLearner load_learner(std::istream& in) {
    std::string magic;
    std::getline(in, magic);
    if (!magic.empty() && magic.back() == '\r') {
        magic.pop_back();
    }
    if (magic != kLearnerMagic) {
        fail(ErrorCode::FormatError, "not a droidsel learner file");
    }
    LearnerSpec spec;
    spec.kind = parse_learner_kind(expect_key(in, "kind"));
    const std::size_t dimension = to_u64(expect_key(in, "dimension"));
    spec.hidden_units = to_u64(expect_key(in, "hidden_units"));
    spec.learning_rate = parse_double(expect_key(in, "learning_rate"));
    spec.epochs = to_u64(expect_key(in, "epochs"));
    spec.l2 = parse_double(expect_key(in, "l2"));
    spec.batch_size = to_u64(expect_key(in, "batch_size"));
    spec.rng_seed = to_u64(expect_key(in, "rng_seed"));
    const std::size_t count = to_u64(expect_key(in, "params"));
    if (count != parameter_count(spec.kind, dimension, spec.hidden_units)) {
        fail(ErrorCode::FormatError, "model file: parameter count does not match shape");
    }
    std::vector<double> params;
    std::string token;
    for (std::size_t k = 0; k < count; ++k) {
        if (!(in >> token)) {
            fail(ErrorCode::FormatError, "model file: truncated parameter list");
        }
        params.push_back(parse_double(token));
    }
    return TrainedLearner(spec, dimension, std::move(params));
}

void save_learner(const TrainedLearner& learner, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        fail(ErrorCode::IoError, "cannot write " + path.string());
    }
    save_learner(learner, out);
}

TrainedLearner load_learner(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::IoError, "cannot read " + path.string());
    }
    return load_learner(in);
}

} // namespace droidsel
