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

#include "droidsel/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "droidsel/ensemble.hpp"
#include "droidsel/error.hpp"
#include "droidsel/random.hpp"

namespace droidsel {
namespace {

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
    fail(ErrorCode::InvalidConfig, "key '" + key + "': " + why);
}

std::uint64_t to_u64(const std::string& key, std::string_view v) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
        bad_key(key, "expected an unsigned integer, got '" + std::string(v) + "'");
    }
    return out;
}

double to_double(const std::string& key, std::string_view v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
        bad_key(key, "expected a number, got '" + std::string(v) + "'");
    }
    return out;
}

bool to_bool(const std::string& key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad_key(key, "expected true or false");
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::string_view to_string(DataSource s) {
    switch (s) {
    case DataSource::Synthetic: return "synthetic";
    case DataSource::Records: return "records";
    case DataSource::Dataset: return "dataset";
    }
    return "synthetic";
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, std::string_view)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"seed", [](auto& c, auto& k, auto v) { c.seed = to_u64(k, v); }},
        {"repeats", [](auto& c, auto& k, auto v) { c.repeats = to_u64(k, v); }},
        {"jobs", [](auto& c, auto& k, auto v) { c.jobs = to_u64(k, v); }},
        {"allow_partial", [](auto& c, auto& k, auto v) { c.allow_partial = to_bool(k, v); }},
        {"data.source",
         [](auto& c, auto& k, auto v) {
             if (v == "synthetic") c.source = DataSource::Synthetic;
             else if (v == "records") c.source = DataSource::Records;
             else if (v == "dataset") c.source = DataSource::Dataset;
             else bad_key(k, "expected synthetic, records or dataset");
         }},
        {"data.path", [](auto& c, auto&, auto v) { c.data_path = std::string(v); }},
        {"synthetic.samples", [](auto& c, auto& k, auto v) { c.synthetic.samples = to_u64(k, v); }},
        {"synthetic.features", [](auto& c, auto& k, auto v) { c.synthetic.features = to_u64(k, v); }},
        {"synthetic.density", [](auto& c, auto& k, auto v) { c.synthetic.density = to_double(k, v); }},
        {"synthetic.noise_std", [](auto& c, auto& k, auto v) { c.synthetic.noise_std = to_double(k, v); }},
        {"synthetic.seed", [](auto& c, auto& k, auto v) { c.synthetic.seed = to_u64(k, v); }},
        {"vocab.min_doc_freq", [](auto& c, auto& k, auto v) { c.vocab.min_doc_freq = to_u64(k, v); }},
        {"vocab.max_api_features", [](auto& c, auto& k, auto v) { c.vocab.max_api_features = to_u64(k, v); }},
        {"split.train", [](auto& c, auto& k, auto v) { c.split.train = to_double(k, v); }},
        {"split.validation", [](auto& c, auto& k, auto v) { c.split.validation = to_double(k, v); }},
        {"split.test", [](auto& c, auto& k, auto v) { c.split.test = to_double(k, v); }},
        {"noise.fraction", [](auto& c, auto& k, auto v) { c.noise_fraction = to_double(k, v); }},
        {"noise.apply_to",
         [](auto& c, auto& k, auto v) {
             c.noise_train = c.noise_validation = false;
             std::string_view rest = v;
             while (!rest.empty()) {
                 const auto comma = rest.find(',');
                 const auto item = trim(rest.substr(0, comma));
                 if (item == "train") c.noise_train = true;
                 else if (item == "validation") c.noise_validation = true;
                 else if (item == "none" || item.empty()) {}
                 else bad_key(k, "expected a comma list of train, validation (the test split is never listed)");
                 rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
             }
         }},
        {"noise.test", [](auto& c, auto& k, auto v) { c.noise_test = to_bool(k, v); }},
        {"pool.size", [](auto& c, auto& k, auto v) { c.pool_size = to_u64(k, v); }},
        {"learner.kind",
         [](auto& c, auto& k, auto v) {
             try {
                 c.learner.kind = parse_learner_kind(v);
             } catch (const Error&) {
                 bad_key(k, "expected linear or mlp");
             }
         }},
        {"learner.learning_rate", [](auto& c, auto& k, auto v) { c.learner.learning_rate = to_double(k, v); }},
        {"learner.epochs", [](auto& c, auto& k, auto v) { c.learner.epochs = to_u64(k, v); }},
        {"learner.hidden_units", [](auto& c, auto& k, auto v) { c.learner.hidden_units = to_u64(k, v); }},
        {"learner.l2", [](auto& c, auto& k, auto v) { c.learner.l2 = to_double(k, v); }},
        {"learner.batch_size", [](auto& c, auto& k, auto v) { c.learner.batch_size = to_u64(k, v); }},
        {"learner.seed", [](auto& c, auto& k, auto v) { c.learner.rng_seed = to_u64(k, v); }},
        {"ga.pop_size", [](auto& c, auto& k, auto v) { c.ga.pop_size = to_u64(k, v); }},
        {"ga.max_iter", [](auto& c, auto& k, auto v) { c.ga.max_iter = to_u64(k, v); }},
        {"ga.crossover_rate", [](auto& c, auto& k, auto v) { c.ga.crossover_rate = to_double(k, v); }},
        {"ga.mutation_rate", [](auto& c, auto& k, auto v) { c.ga.mutation_rate = to_double(k, v); }},
        {"ga.elite_count", [](auto& c, auto& k, auto v) { c.ga.elite_count = to_u64(k, v); }},
        {"ga.fitness_split",
         [](auto& c, auto& k, auto v) {
             if (v == "train") c.ga.fitness_split = FitnessSplit::Train;
             else if (v == "validation") c.ga.fitness_split = FitnessSplit::Validation;
             else bad_key(k, "expected train or validation");
         }},
        {"ga.diversity_norm",
         [](auto& c, auto& k, auto v) {
             if (v == "paper") c.ga.diversity_norm = DiversityNorm::Size;
             else if (v == "pairs") c.ga.diversity_norm = DiversityNorm::Pairs;
             else bad_key(k, "expected paper or pairs");
         }},
    };
    return table;
}

template <typename F>
void check(bool ok, const char* key, F&& why) {
    if (!ok) {
        bad_key(key, why());
    }
}

} // namespace

void ExperimentConfig::validate() const {
    auto msg = [](const char* m) { return [m] { return std::string(m); }; };
    check(repeats >= 1, "repeats", msg("must be >= 1"));
    check(jobs >= 1, "jobs", msg("must be >= 1"));
    check(pool_size >= 1, "pool.size", msg("must be >= 1"));
    check(source == DataSource::Synthetic || !data_path.empty(), "data.path",
          msg("required when data.source is records or dataset"));
    check(noise_fraction >= 0.0 && noise_fraction <= 0.5, "noise.fraction", msg("must lie in [0, 0.5]"));
    check(vocab.min_doc_freq >= 1, "vocab.min_doc_freq", msg("must be >= 1"));
    check(learner.learning_rate > 0.0, "learner.learning_rate", msg("must be > 0"));
    check(learner.epochs >= 1, "learner.epochs", msg("must be >= 1"));
    check(learner.hidden_units >= 1, "learner.hidden_units", msg("must be >= 1"));
    check(learner.l2 >= 0.0, "learner.l2", msg("must be >= 0"));
    check(ga.pop_size >= 2, "ga.pop_size", msg("must be >= 2"));
    check(ga.max_iter >= 1, "ga.max_iter", msg("must be >= 1"));
    check(ga.crossover_rate >= 0.0 && ga.crossover_rate <= 1.0, "ga.crossover_rate", msg("must lie in [0, 1]"));
    check(ga.mutation_rate >= 0.0 && ga.mutation_rate <= 1.0, "ga.mutation_rate", msg("must lie in [0, 1]"));
    check(ga.elite_count < ga.pop_size, "ga.elite_count", msg("must be < ga.pop_size"));
    check(split.train > 0.0 && split.validation > 0.0 && split.test > 0.0 &&
              std::abs(split.train + split.validation + split.test - 1.0) <= 1e-9,
          "split.train", msg("split fractions must be positive and sum to 1"));
    if (source == DataSource::Synthetic) {
        check(synthetic.samples >= 5, "synthetic.samples", msg("must be >= 5"));
        check(synthetic.features >= 1, "synthetic.features", msg("must be >= 1"));
        check(synthetic.density > 0.0 && synthetic.density < 1.0, "synthetic.density", msg("must lie in (0, 1)"));
        check(synthetic.noise_std >= 0.0, "synthetic.noise_std", msg("must be >= 0"));
    }
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig config;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto hash = line.find('#');
        const auto body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            fail(ErrorCode::InvalidConfig,
                 "line " + std::to_string(line_number) + ": expected key=value");
        }
        const std::string key(trim(body.substr(0, eq)));
        const auto value = trim(body.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            bad_key(key, "unknown key");
        }
        it->second(config, key, value);
    }
    config.validate();
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::IoError, "cannot read " + path.string());
    }
    auto config = parse_config(in);
    if (!config.data_path.empty() && config.data_path.is_relative()) {
        config.data_path = path.parent_path() / config.data_path;
    }
    return config;
}

void write_config(std::ostream& out, const ExperimentConfig& c) {
    auto num = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    std::string apply_to;
    if (c.noise_train) apply_to = "train";
    if (c.noise_validation) apply_to += apply_to.empty() ? "validation" : ",validation";
    if (apply_to.empty()) apply_to = "none";

    out << "seed=" << c.seed << '\n'
        << "repeats=" << c.repeats << '\n'
        << "jobs=" << c.jobs << '\n'
        << "allow_partial=" << (c.allow_partial ? "true" : "false") << '\n'
        << "data.source=" << to_string(c.source) << '\n';
    if (!c.data_path.empty()) {
        out << "data.path=" << c.data_path.string() << '\n';
    }
    out << "synthetic.samples=" << c.synthetic.samples << '\n'
        << "synthetic.features=" << c.synthetic.features << '\n'
        << "synthetic.density=" << num(c.synthetic.density) << '\n'
        << "synthetic.noise_std=" << num(c.synthetic.noise_std) << '\n'
        << "synthetic.seed=" << c.synthetic.seed << '\n'
        << "vocab.min_doc_freq=" << c.vocab.min_doc_freq << '\n'
        << "vocab.max_api_features=" << c.vocab.max_api_features << '\n'
        << "split.train=" << num(c.split.train) << '\n'
        << "split.validation=" << num(c.split.validation) << '\n'
        << "split.test=" << num(c.split.test) << '\n'
        << "noise.fraction=" << num(c.noise_fraction) << '\n'
        << "noise.apply_to=" << apply_to << '\n'
        << "noise.test=" << (c.noise_test ? "true" : "false") << '\n'
        << "pool.size=" << c.pool_size << '\n'
        << "learner.kind=" << to_string(c.learner.kind) << '\n'
        << "learner.learning_rate=" << num(c.learner.learning_rate) << '\n'
        << "learner.epochs=" << c.learner.epochs << '\n'
        << "learner.hidden_units=" << c.learner.hidden_units << '\n'
        << "learner.l2=" << num(c.learner.l2) << '\n'
        << "learner.batch_size=" << c.learner.batch_size << '\n'
        << "learner.seed=" << c.learner.rng_seed << '\n'
        << "ga.pop_size=" << c.ga.pop_size << '\n'
        << "ga.max_iter=" << c.ga.max_iter << '\n'
        << "ga.crossover_rate=" << num(c.ga.crossover_rate) << '\n'
        << "ga.mutation_rate=" << num(c.ga.mutation_rate) << '\n'
        << "ga.elite_count=" << c.ga.elite_count << '\n'
        << "ga.fitness_split=" << to_string(c.ga.fitness_split) << '\n'
        << "ga.diversity_norm=" << to_string(c.ga.diversity_norm) << '\n';
}

ExperimentInput load_input(const ExperimentConfig& config) {
    switch (config.source) {
    case DataSource::Synthetic:
        return make_synthetic(config.synthetic);
    case DataSource::Dataset:
        return load_dataset(config.data_path);
    case DataSource::Records: {
        std::ifstream in(config.data_path);
        if (!in) {
            fail(ErrorCode::IoError, "cannot read " + config.data_path.string());
        }
        return read_records(in);
    }
    }
    fail(ErrorCode::InvalidConfig, "unknown data source");
}

RunSeeds run_seeds(std::uint64_t master_seed, std::size_t run) {
    const std::uint64_t base = derive_seed(master_seed, run);
    return {derive_seed(base, 1), derive_seed(base, 2), derive_seed(base, 3), derive_seed(base, 4),
            derive_seed(base, 5)};
}

namespace {

std::vector<int> input_labels(const ExperimentInput& input) {
    if (const auto* data = std::get_if<Dataset>(&input)) {
        return data->labels();
    }
    const auto& records = std::get<std::vector<FeatureRecord>>(input);
    std::vector<int> labels(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!records[i].label) {
            fail(ErrorCode::FormatError, "record '" + records[i].app_id + "' is unlabeled");
        }
        labels[i] = label_value(*records[i].label);
    }
    return labels;
}

Dataset labels_only(std::span<const int> labels) {
    Dataset d;
    d.dimension = 1;
    d.vectors.resize(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        d.vectors[i].dimension = 1;
        d.vectors[i].label = label_from_sign(labels[i]);
    }
    return d;
}

std::vector<std::size_t> map_back(std::span<const std::size_t> local,
                                  std::span<const std::size_t> source) {
    std::vector<std::size_t> out;
    out.reserve(local.size());
    for (std::size_t i : local) {
        out.push_back(source[i]);
    }
    return out;
}

} // namespace

PreparedRun prepare_run(const ExperimentConfig& config, const ExperimentInput& input,
                        std::size_t run) {
    const RunSeeds seeds = run_seeds(config.seed, run);
    PreparedRun prepared;
    prepared.clean_labels = input_labels(input);

    std::vector<int> labels = prepared.clean_labels;
    if (config.noise_test) {
        auto noisy = inject_label_noise(labels_only(labels), config.noise_fraction, seeds.noise);
        labels = noisy.data.labels();
        prepared.flipped_source = std::move(noisy.flipped);
    }

    SplitSpec split_spec = config.split;
    split_spec.seed = seeds.split;
    SplitIndices idx = split_indices(labels, split_spec);

    Dataset full;
    if (const auto* data = std::get_if<Dataset>(&input)) {
        full = *data;
    } else {
        const auto& records = std::get<std::vector<FeatureRecord>>(input);
        std::vector<FeatureRecord> train_records;
        train_records.reserve(idx.train.size());
        for (std::size_t i : idx.train) {
            train_records.push_back(records[i]);
        }
        // Vocabulary comes from the training part only.
        full = vectorize_all(records, build_vocabulary(train_records, config.vocab));
    }
    for (std::size_t i = 0; i < full.size(); ++i) {
        full.vectors[i].label = label_from_sign(labels[i]);
    }

    prepared.split.train = full.subset(idx.train);
    prepared.split.validation = full.subset(idx.validation);
    prepared.split.test = full.subset(idx.test);
    if (!config.noise_test) {
        if (config.noise_train) {
            auto noisy = inject_label_noise(prepared.split.train, config.noise_fraction,
                                            derive_seed(seeds.noise, 1));
            prepared.split.train = std::move(noisy.data);
            prepared.flipped_train = map_back(noisy.flipped, idx.train);
        }
        if (config.noise_validation) {
            auto noisy = inject_label_noise(prepared.split.validation, config.noise_fraction,
                                            derive_seed(seeds.noise, 2));
            prepared.split.validation = std::move(noisy.data);
            prepared.flipped_validation = map_back(noisy.flipped, idx.validation);
        }
    }
    prepared.split.indices = std::move(idx);
    return prepared;
}

std::string_view to_string(Method method) {
    switch (method) {
    case Method::Single: return "single";
    case Method::FullPool: return "full";
    case Method::Selective: return "selective";
    }
    return "single";
}

const MetricsReport& RunResult::metrics(Method m) const {
    switch (m) {
    case Method::Single: return single;
    case Method::FullPool: return full_pool;
    case Method::Selective: return selective;
    }
    return single;
}

RunResult run_once(const ExperimentConfig& config, const ExperimentInput& input, std::size_t run) {
    const RunSeeds seeds = run_seeds(config.seed, run);
    const PreparedRun prepared = prepare_run(config, input, run);
    const auto& parts = prepared.split;
    const auto test_labels = parts.test.labels();

    RunResult result;
    result.run = run;

    LearnerSpec single_spec = config.learner;
    single_spec.rng_seed = derive_seed(seeds.single, config.learner.rng_seed);
    const TrainedLearner single = train(single_spec, parts.train);
    std::vector<int> predictions(parts.test.size());
    for (std::size_t k = 0; k < parts.test.size(); ++k) {
        predictions[k] = label_value(single.predict_label(parts.test.vectors[k]));
    }
    result.single = compute_metrics(predictions, test_labels);

    const EnsemblePool pool = train_pool(parts.train, config.pool_size, config.learner, seeds.pool);
    const PredictionMatrix test_matrix = PredictionMatrix::compute(pool, parts.test);
    const WeightVector everyone = WeightVector::all(pool.size());

    GAConfig ga = config.ga;
    ga.rng_seed = seeds.ga;
    const GAResult selection = run_ga(pool, parts.train, parts.validation, ga);
    result.omega = selection.best;
    result.ga = selection.best_breakdown;

    auto ensemble_metrics = [&](const WeightVector& omega) {
        std::vector<int> votes(parts.test.size());
        std::vector<int> column(pool.size());
        for (std::size_t k = 0; k < parts.test.size(); ++k) {
            for (std::size_t i = 0; i < pool.size(); ++i) {
                column[i] = test_matrix.at(i, k);
            }
            votes[k] = label_value(vote_predictions(column, omega));
        }
        return compute_metrics(votes, test_labels);
    };
    result.full_pool = ensemble_metrics(everyone);
    result.selective = ensemble_metrics(result.omega);
    return result;
}

RepeatSummary ExperimentReport::summary(Method method) const {
    std::vector<MetricsReport> metrics;
    metrics.reserve(runs.size());
    for (const auto& r : runs) {
        metrics.push_back(r.metrics(method));
    }
    return summarize(std::move(metrics));
}

ExperimentReport repeated_experiment(const ExperimentConfig& config, const ExperimentInput& input) {
    config.validate();
    const std::size_t n = config.repeats;
    std::vector<std::optional<RunResult>> results(n);
    std::vector<std::string> errors(n);
    std::vector<std::optional<ErrorCode>> codes(n);

    auto do_run = [&](std::size_t r) {
        try {
            results[r] = run_once(config, input, r);
        } catch (const Error& e) {
            errors[r] = e.what();
            codes[r] = e.code();
        } catch (const std::exception& e) {
            errors[r] = e.what();
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(config.jobs, 1, n);
    if (workers == 1) {
        for (std::size_t r = 0; r < n; ++r) {
            do_run(r);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> threads;
        for (std::size_t w = 0; w < workers; ++w) {
            threads.emplace_back([&] {
                for (std::size_t r = next++; r < n; r = next++) {
                    do_run(r);
                }
            });
        }
    }

    ExperimentReport report;
    report.config = config;
    for (std::size_t r = 0; r < n; ++r) {
        if (results[r]) {
            report.runs.push_back(std::move(*results[r]));
            continue;
        }
        if (!config.allow_partial) {
            throw Error(codes[r].value_or(ErrorCode::InvalidConfig),
                        "run " + std::to_string(r) + ": " + errors[r]);
        }
        report.failures.push_back({r, errors[r]});
    }
    return report;
}

void write_report(std::ostream& out, const ExperimentReport& report) {
    char buf[256];
    out << "# droidsel experiment report v1\n";
    std::ostringstream config;
    write_config(config, report.config);
    std::istringstream lines(config.str());
    std::string line;
    while (std::getline(lines, line)) {
        out << "config\t" << line << '\n';
    }
    out << "#\trun\tmethod\taccuracy\tprecision\trecall\tf1\ttp\tfp\ttn\tfn\tdegenerate\tselected\tomega\n";
    for (const auto& r : report.runs) {
        for (Method m : kMethods) {
            const auto& x = r.metrics(m);
            const std::size_t selected = m == Method::Single     ? 1
                                         : m == Method::FullPool ? report.config.pool_size
                                                                 : r.omega.popcount();
            std::snprintf(buf, sizeof(buf), "run\t%zu\t%s\t%.6f\t%.6f\t%.6f\t%.6f\t%zu\t%zu\t%zu\t%zu\t%d\t%zu",
                          r.run, std::string(to_string(m)).c_str(), x.accuracy, x.precision,
                          x.recall, x.f1, x.tp, x.fp, x.tn, x.fn, x.degenerate ? 1 : 0, selected);
            out << buf;
            if (m == Method::Selective) {
                out << '\t' << r.omega.to_string();
            }
            out << '\n';
        }
        std::snprintf(buf, sizeof(buf), "ga\t%zu\tfitness=%.10f\taccuracy=%.10f\tdiversity=%.10f\n",
                      r.run, r.ga.fitness, r.ga.accuracy, r.ga.diversity);
        out << buf;
    }
    for (const auto& f : report.failures) {
        out << "failure\t" << f.run << '\t' << f.message << '\n';
    }
    out << "#\tsummary\tmethod\trow\taccuracy\tprecision\trecall\tf1\n";
    for (Method m : kMethods) {
        const auto s = report.summary(m);
        const std::pair<const char*, const MetricRow*> rows[] = {
            {"worst", &s.worst}, {"best", &s.best}, {"average", &s.average}, {"stddev", &s.stddev}};
        for (const auto& [name, row] : rows) {
            std::snprintf(buf, sizeof(buf), "summary\t%s\t%s\t%.6f\t%.6f\t%.6f\t%.6f\n",
                          std::string(to_string(m)).c_str(), name, row->accuracy, row->precision,
                          row->recall, row->f1);
            out << buf;
        }
    }
    std::snprintf(buf, sizeof(buf), "runs\t%zu\tfailed\t%zu\n", report.runs.size(),
                  report.failures.size());
    out << buf;
}

} // namespace droidsel
