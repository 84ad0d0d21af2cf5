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

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "droidsel/error.hpp"
#include "droidsel/learner.hpp"
#include "oracles.hpp"

using namespace droidsel;
using namespace droidsel::testing;

namespace {

FeatureVector fv(std::size_t d, std::vector<std::uint32_t> active, std::optional<Label> l = {}) {
    return FeatureVector{d, std::move(active), l};
}

// One binary feature standing for x = +1 (set) or x = -1 (clear).
Dataset separable_1d() {
    Dataset d{1, {}};
    for (int i = 0; i < 100; ++i) {
        d.vectors.push_back(fv(1, {0}, Label::Malicious));
        d.vectors.push_back(fv(1, {}, Label::Benign));
    }
    return d;
}

// XOR over two binary features, 25 copies of each corner.
Dataset xor_2d() {
    Dataset d{2, {}};
    for (int i = 0; i < 25; ++i) {
        d.vectors.push_back(fv(2, {}, Label::Benign));
        d.vectors.push_back(fv(2, {0, 1}, Label::Benign));
        d.vectors.push_back(fv(2, {0}, Label::Malicious));
        d.vectors.push_back(fv(2, {1}, Label::Malicious));
    }
    return d;
}

double accuracy(const TrainedLearner& f, const Dataset& d) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        hits += label_value(f.predict_label(d.vectors[i])) == d.label_at(i);
    }
    return static_cast<double>(hits) / static_cast<double>(d.size());
}

Dataset random_dataset(std::size_t d, std::size_t m, std::mt19937_64& gen) {
    Dataset data{d, {}};
    for (std::size_t k = 0; k < m; ++k) {
        FeatureVector v{d, {}, (k % 2) ? Label::Malicious : Label::Benign};
        for (std::uint32_t i = 0; i < d; ++i) {
            if (gen() % 2) v.active.push_back(i);
        }
        data.vectors.push_back(v);
    }
    return data;
}

} // namespace

TEST_CASE("linear learner separates the 1D set") {
    LearnerSpec spec;
    const auto data = separable_1d();
    const auto f = train(spec, data);
    CHECK(accuracy(f, data) == 1.0);
    CHECK(f.predict_label(fv(1, {0})) == Label::Malicious);
    CHECK(f.predict_label(fv(1, {})) == Label::Benign);
}

TEST_CASE("mlp learns XOR") {
    LearnerSpec spec;
    spec.kind = LearnerKind::Mlp;
    spec.hidden_units = 8;
    spec.learning_rate = 0.5;
    spec.epochs = 200;
    spec.l2 = 0.0;
    spec.rng_seed = 3;
    const auto data = xor_2d();
    CHECK(accuracy(train(spec, data), data) >= 0.95);

    spec.kind = LearnerKind::Linear;
    CHECK(accuracy(train(spec, data), data) <= 0.75);
}

TEST_CASE("single-class data is rejected") {
    Dataset d{1, {fv(1, {0}, Label::Malicious), fv(1, {}, Label::Malicious)}};
    try {
        train(LearnerSpec{}, d);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingleClassData);
    }
}

TEST_CASE("divergence is reported") {
    LearnerSpec spec;
    spec.kind = LearnerKind::Mlp;
    spec.learning_rate = 1e300;
    spec.batch_size = 0;
    try {
        train(spec, xor_2d());
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonFiniteLoss);
    }
}

TEST_CASE("spec validation") {
    LearnerSpec s;
    s.learning_rate = 0.0;
    CHECK_THROWS_AS(s.validate(), Error);
    s = {};
    s.epochs = 0;
    CHECK_THROWS_AS(s.validate(), Error);
    s = {};
    s.kind = LearnerKind::Mlp;
    s.hidden_units = 0;
    CHECK_THROWS_AS(s.validate(), Error);
    s = {};
    s.l2 = -1;
    CHECK_THROWS_AS(s.validate(), Error);
    CHECK_THROWS_AS(parse_learner_kind("svm"), Error);
}

TEST_CASE("zero-weight learner: margin 0 predicts +1") {
    const TrainedLearner f(LearnerSpec{}, 4, std::vector<double>(5, 0.0));
    CHECK(f.decision_margin(fv(4, {1, 3})) == 0.0);
    CHECK(f.predict_label(fv(4, {1, 3})) == Label::Malicious);
    CHECK(f.predict_label(fv(4, {})) == Label::Malicious);
}

TEST_CASE("positive weight on index 0") {
    const TrainedLearner f(LearnerSpec{}, 2, {1.0, 0.0, -0.5});
    CHECK(f.predict_label(fv(2, {0})) == Label::Malicious);
    CHECK(f.predict_label(fv(2, {})) == Label::Benign);
}

TEST_CASE("dimension mismatch") {
    const TrainedLearner f(LearnerSpec{}, 2, {1.0, 0.0, 0.0});
    try {
        f.predict_label(fv(3, {0}));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
}

TEST_CASE("margin sign agrees with the label and moves monotonically in one weight") {
    std::mt19937_64 gen(17);
    std::normal_distribution<double> normal;
    for (auto kind : {LearnerKind::Linear, LearnerKind::Mlp}) {
        LearnerSpec spec;
        spec.kind = kind;
        spec.hidden_units = 3;
        const std::size_t d = 6;
        std::vector<double> p(parameter_count(kind, d, 3));
        for (auto& v : p) v = normal(gen);
        const TrainedLearner f(spec, d, p);
        for (int t = 0; t < 100; ++t) {
            FeatureVector x{d, {}, {}};
            for (std::uint32_t i = 0; i < d; ++i) {
                if (gen() % 2) x.active.push_back(i);
            }
            const double m = f.decision_margin(x);
            CHECK(f.predict_label(x) == (m >= 0 ? Label::Malicious : Label::Benign));
        }
    }
    // Linear: raising the weight of an active feature raises the margin.
    const FeatureVector x = fv(3, {1});
    double previous = -1e9;
    for (double w = -2.0; w <= 2.0; w += 0.25) {
        const TrainedLearner f(LearnerSpec{}, 3, {0.3, w, -0.1, 0.05});
        const double m = f.decision_margin(x);
        CHECK(m > previous);
        previous = m;
    }
}

TEST_CASE("analytic loss matches the dense reference") {
    std::mt19937_64 gen(2);
    std::normal_distribution<double> normal(0.0, 0.7);
    for (auto kind : {LearnerKind::Linear, LearnerKind::Mlp}) {
        const std::size_t d = 7, h = 4;
        const auto data = random_dataset(d, 9, gen);
        std::vector<double> p(parameter_count(kind, d, h));
        for (auto& v : p) v = normal(gen);
        std::vector<std::size_t> all(data.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        const double got = loss_and_gradient(kind, d, h, p, data, all, 0.3, {});
        CHECK(got == doctest::Approx(reference_loss(kind, d, h, p, data, 0.3)).epsilon(1e-12));
    }
}

TEST_CASE("gradient matches central differences of the reference loss") {
    std::mt19937_64 gen(41);
    std::normal_distribution<double> normal(0.0, 0.5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto kind = trial % 2 ? LearnerKind::Mlp : LearnerKind::Linear;
        const std::size_t d = 1 + gen() % 10, h = 1 + gen() % 5;
        const auto data = random_dataset(d, 5, gen);
        const double l2 = (trial % 3) * 0.05;
        std::vector<double> p(parameter_count(kind, d, h));
        for (auto& v : p) v = normal(gen);
        std::vector<std::size_t> all{0, 1, 2, 3, 4};
        std::vector<double> grad(p.size());
        loss_and_gradient(kind, d, h, p, data, all, l2, grad);
        for (std::size_t k = 0; k < p.size(); ++k) {
            const double eps = 1e-5;
            auto plus = p, minus = p;
            plus[k] += eps;
            minus[k] -= eps;
            const double numeric = (reference_loss(kind, d, h, plus, data, l2) -
                                    reference_loss(kind, d, h, minus, data, l2)) /
                                   (2 * eps);
            const double denom = std::max({std::abs(numeric), std::abs(grad[k]), 1e-8});
            CHECK(std::abs(numeric - grad[k]) / denom <= 1e-4);
        }
    }
}

TEST_CASE("training is deterministic") {
    for (auto kind : {LearnerKind::Linear, LearnerKind::Mlp}) {
        LearnerSpec spec;
        spec.kind = kind;
        spec.rng_seed = 99;
        const auto data = xor_2d();
        CHECK(train(spec, data).parameters() == train(spec, data).parameters());
        auto other = spec;
        other.rng_seed = 100;
        if (kind == LearnerKind::Mlp) {
            CHECK(train(other, data).parameters() != train(spec, data).parameters());
        }
    }
}

TEST_CASE("full-batch linear loss never increases") {
    std::mt19937_64 gen(8);
    for (int trial = 0; trial < 10; ++trial) {
        const auto data = random_dataset(12, 40, gen);
        LearnerSpec spec;
        spec.batch_size = 0;
        spec.epochs = 60;
        spec.learning_rate = 0.5;
        spec.l2 = 0.01;
        std::vector<double> history;
        train(spec, data, &history);
        REQUIRE(history.size() == 61);
        for (std::size_t e = 1; e < history.size(); ++e) {
            CHECK(history[e] <= history[e - 1] + 1e-15);
        }
    }
}

TEST_CASE("model serialization is exact") {
    LearnerSpec spec;
    spec.kind = LearnerKind::Mlp;
    spec.hidden_units = 5;
    spec.rng_seed = 12345678901234ULL;
    spec.learning_rate = 0.1;
    spec.l2 = 1.0 / 3.0;
    const auto f = train(spec, xor_2d());
    std::stringstream ss;
    save_learner(f, ss);
    CHECK(load_learner(ss) == f);

    const TrainedLearner tricky(LearnerSpec{}, 2, {-0.0, 5e-324, -1.7976931348623157e308});
    std::stringstream ts;
    save_learner(tricky, ts);
    const auto back = load_learner(ts);
    CHECK(back == tricky);
    CHECK(std::signbit(back.parameters()[0]));
}

TEST_CASE("model file errors") {
    std::stringstream junk("not a model\n");
    CHECK_THROWS_AS(load_learner(junk), Error);

    std::stringstream ss;
    save_learner(TrainedLearner(LearnerSpec{}, 2, {1, 2, 3}), ss);
    const std::string text = ss.str();
    std::stringstream cut(text.substr(0, text.rfind('\n', text.size() - 2) + 1));
    CHECK_THROWS_AS(load_learner(cut), Error);

    std::string wrong = text;
    wrong.replace(wrong.find("params 3"), 8, "params 4");
    std::stringstream ws(wrong);
    CHECK_THROWS_AS(load_learner(ws), Error);
}

TEST_CASE("hex float helpers") {
    for (double v : {0.0, 1.0, -2.5, 0.1, 1e-300, 123456.789}) {
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK_THROWS_AS(parse_double("zz"), Error);
    CHECK_THROWS_AS(parse_double(""), Error);
}
