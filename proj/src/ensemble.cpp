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

#include "droidsel/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "droidsel/error.hpp"
#include "droidsel/random.hpp"

namespace droidsel {

WeightVector::WeightVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto& b : bits_) {
        b = b ? 1 : 0;
    }
}

WeightVector WeightVector::parse(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') {
            fail(ErrorCode::FormatError, "weight vector must be a 0/1 string");
        }
        bits.push_back(c == '1');
    }
    return WeightVector(std::move(bits));
}

std::size_t WeightVector::popcount() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<std::size_t> WeightVector::selected() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) {
            out.push_back(i);
        }
    }
    return out;
}

std::string WeightVector::to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (auto b : bits_) {
        s += b ? '1' : '0';
    }
    return s;
}

std::size_t EnsemblePool::dimension() const {
    if (learners.empty()) {
        fail(ErrorCode::InvalidConfig, "empty learner pool");
    }
    return learners.front().dimension();
}

std::uint64_t bootstrap_seed(std::uint64_t master_seed, std::size_t index) {
    return derive_seed(master_seed, index);
}

std::vector<std::size_t> bootstrap_indices(std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::size_t> out(m);
    for (auto& i : out) {
        i = uniform_index(rng, m);
    }
    return out;
}

Dataset bootstrap_sample(const Dataset& data, std::uint64_t seed) {
    if (data.empty()) {
        fail(ErrorCode::EmptyDataset, "cannot bootstrap an empty dataset");
    }
    const auto indices = bootstrap_indices(data.size(), seed);
    return data.subset(indices);
}

EnsemblePool train_pool(const Dataset& data, std::size_t n, const LearnerSpec& spec,
                        std::uint64_t master_seed, std::size_t jobs) {
    if (n < 1) {
        fail(ErrorCode::InvalidConfig, "pool size must be >= 1");
    }
    spec.validate();

    EnsemblePool pool;
    pool.master_seed = master_seed;
    pool.bootstrap_seeds.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        pool.bootstrap_seeds[i] = bootstrap_seed(master_seed, i);
    }

    std::vector<std::optional<TrainedLearner>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    auto train_one = [&](std::size_t i) {
        try {
            LearnerSpec s = spec;
            s.rng_seed = derive_seed(pool.bootstrap_seeds[i], spec.rng_seed);
            slots[i] = train(s, bootstrap_sample(data, pool.bootstrap_seeds[i]));
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(jobs, 1, n);
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            train_one(i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> threads;
        for (std::size_t w = 0; w < workers; ++w) {
            threads.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    train_one(i);
                }
            });
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) {
            try {
                std::rethrow_exception(errors[i]);
            } catch (const Error& e) {
                throw Error(e.code(), "learner " + std::to_string(i) + ": " + e.what());
            }
        }
        pool.learners.push_back(std::move(*slots[i]));
    }
    return pool;
}

namespace {

void check_omega(std::size_t pool_size, const WeightVector& omega) {
    if (omega.size() != pool_size) {
        fail(ErrorCode::InvalidConfig, "weight vector length " + std::to_string(omega.size()) +
                                           " != pool size " + std::to_string(pool_size));
    }
    if (omega.popcount() == 0) {
        fail(ErrorCode::AllZeroWeights, "at least one learner must be selected");
    }
}

} // namespace

Label vote_predictions(std::span<const int> predictions, const WeightVector& omega) {
    check_omega(predictions.size(), omega);
    long sum = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (omega[i]) {
            sum += predictions[i];
        }
    }
    return sum >= 0 ? Label::Malicious : Label::Benign;
}

Label vote(const EnsemblePool& pool, const WeightVector& omega, const FeatureVector& x) {
    check_omega(pool.size(), omega);
    long sum = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (omega[i]) {
            sum += label_value(pool.learners[i].predict_label(x));
        }
    }
    return sum >= 0 ? Label::Malicious : Label::Benign;
}

double ensemble_accuracy(const EnsemblePool& pool, const WeightVector& omega,
                         const Dataset& data) {
    check_omega(pool.size(), omega);
    if (data.empty()) {
        fail(ErrorCode::EmptyDataset, "accuracy over an empty dataset");
    }
    std::size_t correct = 0;
    for (std::size_t k = 0; k < data.size(); ++k) {
        if (label_value(vote(pool, omega, data.vectors[k])) == data.label_at(k)) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

namespace {

constexpr std::string_view kPoolMagic = "droidsel-pool 1";

std::string model_file_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "learner_%03zu.model", i);
    return buf;
}

std::uint64_t to_u64(std::string_view text, const std::string& what) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        fail(ErrorCode::FormatError, "pool manifest: bad " + what);
    }
    return value;
}

void write_manifest(const EnsemblePool& pool, const std::filesystem::path& manifest,
                    const WeightVector* omega) {
    if (pool.learners.empty() || pool.bootstrap_seeds.size() != pool.learners.size()) {
        fail(ErrorCode::InvalidConfig, "pool must hold one seed per learner");
    }
    const auto dir = manifest.parent_path();
    if (!dir.empty()) {
        std::filesystem::create_directories(dir);
    }
    std::ofstream out(manifest);
    if (!out) {
        fail(ErrorCode::IoError, "cannot write " + manifest.string());
    }
    out << kPoolMagic << '\n'
        << "n " << pool.size() << '\n'
        << "master_seed " << pool.master_seed << '\n';
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const auto name = model_file_name(i);
        save_learner(pool.learners[i], dir / name);
        out << "learner " << i << ' ' << pool.bootstrap_seeds[i] << ' ' << name << '\n';
    }
    if (omega) {
        out << "omega " << omega->to_string() << '\n';
    }
}

struct ParsedManifest {
    EnsemblePool pool;
    std::optional<WeightVector> omega;
};

ParsedManifest read_manifest(const std::filesystem::path& manifest) {
    std::ifstream in(manifest);
    if (!in) {
        fail(ErrorCode::IoError, "cannot read " + manifest.string());
    }
    std::string line;
    std::getline(in, line);
    if (line != kPoolMagic) {
        fail(ErrorCode::FormatError, manifest.string() + " is not a pool manifest");
    }
    ParsedManifest parsed;
    std::optional<std::size_t> n;
    const auto dir = manifest.parent_path();
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream fields(line);
        std::string key;
        fields >> key;
        if (key == "n") {
            std::string v;
            fields >> v;
            n = to_u64(v, "n");
        } else if (key == "master_seed") {
            std::string v;
            fields >> v;
            parsed.pool.master_seed = to_u64(v, "master_seed");
        } else if (key == "learner") {
            std::string index, seed, file;
            fields >> index >> seed >> file;
            if (to_u64(index, "learner index") != parsed.pool.learners.size() || file.empty()) {
                fail(ErrorCode::FormatError, "pool manifest: learners must be listed in order");
            }
            parsed.pool.bootstrap_seeds.push_back(to_u64(seed, "seed"));
            parsed.pool.learners.push_back(load_learner(dir / file));
        } else if (key == "omega") {
            std::string bits;
            fields >> bits;
            parsed.omega = WeightVector::parse(bits);
        } else {
            fail(ErrorCode::FormatError, "pool manifest: unknown key '" + key + "'");
        }
    }
    if (!n || *n != parsed.pool.learners.size() || *n == 0) {
        fail(ErrorCode::FormatError, "pool manifest: learner count does not match n");
    }
    const std::size_t d = parsed.pool.learners.front().dimension();
    for (const auto& l : parsed.pool.learners) {
        if (l.dimension() != d) {
            fail(ErrorCode::DimensionMismatch, "pool learners disagree on input dimension");
        }
    }
    return parsed;
}

} // namespace

void save_pool(const EnsemblePool& pool, const std::filesystem::path& manifest) {
    write_manifest(pool, manifest, nullptr);
}

EnsemblePool load_pool(const std::filesystem::path& manifest) {
    return read_manifest(manifest).pool;
}

void save_ensemble(const SelectiveEnsemble& ensemble, const std::filesystem::path& manifest) {
    check_omega(ensemble.pool.size(), ensemble.omega);
    write_manifest(ensemble.pool, manifest, &ensemble.omega);
}

SelectiveEnsemble load_ensemble(const std::filesystem::path& manifest) {
    auto parsed = read_manifest(manifest);
    if (!parsed.omega) {
        fail(ErrorCode::FormatError, manifest.string() + " has no omega line");
    }
    check_omega(parsed.pool.size(), *parsed.omega);
    return {std::move(parsed.pool), std::move(*parsed.omega)};
}

} // namespace droidsel
