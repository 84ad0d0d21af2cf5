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

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "droidsel/apk_archive.hpp"
#include "droidsel/dataset.hpp"
#include "droidsel/ensemble.hpp"
#include "droidsel/error.hpp"
#include "droidsel/evaluation.hpp"
#include "droidsel/experiment.hpp"
#include "droidsel/extractor.hpp"
#include "droidsel/ga.hpp"
#include "droidsel/learner.hpp"
#include "droidsel/vocabulary.hpp"

namespace droidsel::cli {
namespace fs = std::filesystem;
namespace {

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidSpec:
        return kInvalidConfig;
    case ErrorCode::DimensionMismatch:
        return kDimensionMismatch;
    case ErrorCode::SingleClassData:
    case ErrorCode::NonFiniteLoss:
    case ErrorCode::EmptyDataset:
    case ErrorCode::AllZeroWeights:
    case ErrorCode::TooSmall:
        return kTrainingFailed;
    case ErrorCode::EmptyCorpus:
        return kNoInputs;
    default:
        return kBadInput;
    }
}

// Writes to the named file, or to the fallback stream when the name is empty or "-".
class Output {
public:
    Output(const std::string& path, std::ostream& fallback, bool append = false) {
        if (path.empty() || path == "-") {
            stream_ = &fallback;
            return;
        }
        file_.open(path, append ? std::ios::app : std::ios::trunc);
        if (!file_) {
            fail(ErrorCode::IoError, "cannot write " + path);
        }
        stream_ = &file_;
    }
    std::ostream& get() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
};

std::vector<FeatureRecord> read_record_files(const std::vector<std::string>& paths) {
    std::vector<FeatureRecord> records;
    for (const auto& path : paths) {
        std::ifstream in(path);
        if (!in) {
            fail(ErrorCode::IoError, "cannot read " + path);
        }
        auto chunk = read_records(in);
        records.insert(records.end(), std::make_move_iterator(chunk.begin()),
                       std::make_move_iterator(chunk.end()));
    }
    return records;
}

std::vector<fs::path> collect_apks(const std::vector<std::string>& inputs) {
    std::vector<fs::path> files;
    for (const auto& input : inputs) {
        const fs::path p(input);
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& e : fs::recursive_directory_iterator(p)) {
                if (e.is_regular_file() && e.path().extension() == ".apk") {
                    found.push_back(e.path());
                }
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(p);
        }
    }
    return files;
}

// ---------------------------------------------------------------------------

struct ExtractArgs {
    std::vector<std::string> inputs;
    std::string out;
    std::string label = "?";
    bool strict = false;
    bool append = false;
    std::size_t jobs = 1;
};

int cmd_extract(const ExtractArgs& a, std::ostream& out, std::ostream& err) {
    const auto label = parse_label(a.label, 0);
    const auto files = collect_apks(a.inputs);
    if (files.empty()) {
        err << "error: no inputs\n";
        return kNoInputs;
    }

    struct Outcome {
        std::optional<FeatureRecord> record;
        std::string error;
        int code = kOk;
    };
    std::vector<Outcome> outcomes(files.size());
    auto process = [&](std::size_t i) {
        try {
            const auto archive = ApkArchive::open(files[i]);
            outcomes[i].record = extract_features(archive, files[i].stem().string(), label);
        } catch (const Error& e) {
            outcomes[i].error = e.what();
            outcomes[i].code = exit_code_for(e.code());
        } catch (const std::exception& e) {
            outcomes[i].error = e.what();
            outcomes[i].code = kRuntimeError;
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(a.jobs, 1, files.size());
    {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> threads;
        for (std::size_t w = 0; w < workers; ++w) {
            threads.emplace_back([&] {
                for (std::size_t i = next++; i < files.size(); i = next++) {
                    process(i);
                }
            });
        }
    }

    std::size_t failed = 0;
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (!outcomes[i].record) {
            ++failed;
            err << (a.strict ? "error: " : "warning: ") << files[i].string() << ": "
                << outcomes[i].error << '\n';
            if (a.strict) {
                return outcomes[i].code;
            }
        }
    }
    if (failed == files.size()) {
        err << "error: all " << failed << " inputs failed\n";
        return kNoInputs;
    }
    Output sink(a.out, out, a.append);
    for (const auto& o : outcomes) {
        if (o.record) {
            sink.get() << format_record(*o.record) << '\n';
        }
    }
    err << "extracted " << (files.size() - failed) << " of " << files.size() << " inputs";
    if (failed) {
        err << " (" << failed << " failed)";
    }
    err << '\n';
    return kOk;
}

struct VectorizeArgs {
    std::vector<std::string> records;
    std::string out;
    std::string vocab_in;
    std::string vocab_out;
    std::size_t min_doc_freq = 2;
    std::size_t max_api_features = 2000;
};

int cmd_vectorize(const VectorizeArgs& a, std::ostream& out, std::ostream& err) {
    const auto records = read_record_files(a.records);
    const Vocabulary vocab = a.vocab_in.empty()
                                 ? build_vocabulary(records, {a.min_doc_freq, a.max_api_features})
                                 : load_vocabulary(a.vocab_in);
    if (!a.vocab_out.empty()) {
        save_vocabulary(vocab, a.vocab_out);
    }
    const Dataset data = vectorize_all(records, vocab);
    Output sink(a.out, out);
    save_dataset(data, sink.get());
    err << "vectorized " << data.size() << " records into dimension " << vocab.dimension()
        << " (perm " << vocab.perm_count() << ", action " << vocab.action_count() << ", api "
        << vocab.api_count() << ")\n";
    return kOk;
}

struct TrainPoolArgs {
    std::string data;
    std::string out_dir;
    std::size_t n = 20;
    std::string kind = "linear";
    LearnerSpec spec;
    std::uint64_t seed = 1;
    std::size_t jobs = 1;
};

int cmd_train_pool(TrainPoolArgs a, std::ostream&, std::ostream& err) {
    a.spec.kind = parse_learner_kind(a.kind);
    const Dataset data = load_dataset(a.data);
    const EnsemblePool pool = train_pool(data, a.n, a.spec, a.seed, a.jobs);
    const fs::path manifest = fs::path(a.out_dir) / "pool.txt";
    save_pool(pool, manifest);
    err << "trained " << pool.size() << " learners; manifest " << manifest.string() << '\n';
    return kOk;
}

struct SelectArgs {
    std::string pool;
    std::string train;
    std::string validation;
    std::string out;
    std::string report;
    std::string fitness_split = "validation";
    std::string diversity_norm = "paper";
    GAConfig ga;
};

int cmd_select(SelectArgs a, std::ostream& out, std::ostream& err) {
    a.ga.fitness_split = parse_fitness_split(a.fitness_split);
    a.ga.diversity_norm = parse_diversity_norm(a.diversity_norm);
    a.ga.validate();
    const std::string& data_path =
        a.ga.fitness_split == FitnessSplit::Train ? a.train : a.validation;
    if (data_path.empty()) {
        fail(ErrorCode::InvalidConfig,
             "--" + std::string(to_string(a.ga.fitness_split)) + " is required for this fitness split");
    }
    const EnsemblePool pool = load_pool(a.pool);
    const Dataset data = load_dataset(data_path);
    if (data.dimension != pool.dimension()) {
        fail(ErrorCode::DimensionMismatch, "dataset and pool dimensions differ");
    }
    const auto matrix = PredictionMatrix::compute(pool, data);
    const auto labels = data.labels();
    const GAResult result = run_ga(matrix, labels, a.ga);

    const fs::path target = a.out.empty() ? fs::path(a.pool).parent_path() / "ensemble.txt"
                                          : fs::path(a.out);
    save_ensemble({pool, result.best}, target);
    Output sink(a.report, out);
    write_ga_report(sink.get(), a.ga, result);
    err << "selected " << result.best.popcount() << " of " << pool.size()
        << " learners; ensemble " << target.string() << '\n';
    return kOk;
}

struct EvaluateArgs {
    std::string model;
    std::string data;
    std::string out;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream&) {
    const SelectiveEnsemble ensemble = load_ensemble(a.model);
    const Dataset data = load_dataset(a.data);
    if (data.dimension != ensemble.pool.dimension()) {
        fail(ErrorCode::DimensionMismatch, "dataset and model dimensions differ");
    }
    std::vector<int> predictions(data.size());
    for (std::size_t k = 0; k < data.size(); ++k) {
        predictions[k] = label_value(ensemble.predict(data.vectors[k]));
    }
    const auto m = compute_metrics(predictions, data.labels());
    Output sink(a.out, out);
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "samples\t%zu\nselected\t%zu\naccuracy\t%.6f\nprecision\t%.6f\nrecall\t%.6f\n"
                  "f1\t%.6f\ntp\t%zu\nfp\t%zu\ntn\t%zu\nfn\t%zu\ndegenerate\t%d\n",
                  data.size(), ensemble.selected_count(), m.accuracy, m.precision, m.recall, m.f1,
                  m.tp, m.fp, m.tn, m.fn, m.degenerate ? 1 : 0);
    sink.get() << buf;
    return kOk;
}

struct PredictArgs {
    std::string model;
    std::string vocab;
    std::vector<std::string> records;
    std::string data;
    std::string out;
};

int cmd_predict(const PredictArgs& a, std::ostream& out, std::ostream&) {
    if (a.records.empty() == a.data.empty()) {
        fail(ErrorCode::InvalidConfig, "give exactly one of --records or --data");
    }
    const SelectiveEnsemble ensemble = load_ensemble(a.model);
    std::vector<std::string> ids;
    Dataset data;
    if (!a.records.empty()) {
        if (a.vocab.empty()) {
            fail(ErrorCode::InvalidConfig, "--vocab is required with --records");
        }
        const Vocabulary vocab = load_vocabulary(a.vocab);
        if (vocab.dimension() != ensemble.pool.dimension()) {
            fail(ErrorCode::DimensionMismatch,
                 "vocabulary dimension " + std::to_string(vocab.dimension()) +
                     " != model dimension " + std::to_string(ensemble.pool.dimension()));
        }
        const auto records = read_record_files(a.records);
        for (const auto& r : records) {
            ids.push_back(r.app_id);
        }
        data = vectorize_all(records, vocab);
    } else {
        data = load_dataset(a.data);
        if (data.dimension != ensemble.pool.dimension()) {
            fail(ErrorCode::DimensionMismatch, "dataset and model dimensions differ");
        }
        for (std::size_t i = 0; i < data.size(); ++i) {
            ids.push_back(std::to_string(i));
        }
    }
    Output sink(a.out, out);
    for (std::size_t i = 0; i < data.size(); ++i) {
        sink.get() << ids[i] << '\t' << format_label(ensemble.predict(data.vectors[i])) << '\n';
    }
    return kOk;
}

struct ExperimentArgs {
    std::string config;
    std::string out;
    bool noise_test = false;
};

int cmd_experiment(const ExperimentArgs& a, std::ostream& out, std::ostream& err) {
    ExperimentConfig config = load_config(a.config);
    if (a.noise_test) {
        config.noise_test = true;
    }
    const auto input = load_input(config);
    const auto report = repeated_experiment(config, input);
    Output sink(a.out, out);
    write_report(sink.get(), report);
    err << "completed " << report.runs.size() << " of " << config.repeats << " runs\n";
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Selective-ensemble Android malware detection toolkit", "droidsel"};
    app.require_subcommand(1);

    ExtractArgs extract;
    auto* c_extract = app.add_subcommand("extract", "Extract feature records from APK files");
    c_extract->add_option("inputs", extract.inputs, "APK files or directories")->required();
    c_extract->add_option("-o,--out", extract.out, "Record file (default stdout)");
    c_extract->add_option("--label", extract.label, "Label for every input: +1, -1 or ?")
        ->check(CLI::IsMember({"+1", "-1", "?"}));
    c_extract->add_flag("--strict", extract.strict, "Abort on the first unreadable input");
    c_extract->add_flag("--append", extract.append, "Append to the record file");
    c_extract->add_option("-j,--jobs", extract.jobs, "Worker threads")->check(CLI::PositiveNumber);

    VectorizeArgs vectorize;
    auto* c_vectorize = app.add_subcommand("vectorize", "Build a vocabulary and a sparse dataset");
    c_vectorize->add_option("-r,--records", vectorize.records, "Record files")->required();
    c_vectorize->add_option("-o,--out", vectorize.out, "Dataset file (default stdout)");
    auto* vocab_in = c_vectorize->add_option("--vocab", vectorize.vocab_in, "Reuse an existing vocabulary");
    c_vectorize->add_option("--vocab-out", vectorize.vocab_out, "Write the vocabulary here")
        ->excludes(vocab_in);
    c_vectorize->add_option("--min-doc-freq", vectorize.min_doc_freq)->check(CLI::PositiveNumber);
    c_vectorize->add_option("--max-api-features", vectorize.max_api_features);

    TrainPoolArgs pool;
    auto* c_pool = app.add_subcommand("train-pool", "Train N learners on bootstrap replicates");
    c_pool->add_option("-d,--data", pool.data, "Training dataset")->required();
    c_pool->add_option("-o,--out-dir", pool.out_dir, "Directory for pool.txt and models")->required();
    c_pool->add_option("-n,--size", pool.n, "Pool size")->check(CLI::PositiveNumber);
    c_pool->add_option("--kind", pool.kind)->check(CLI::IsMember({"linear", "mlp"}));
    c_pool->add_option("--learning-rate", pool.spec.learning_rate);
    c_pool->add_option("--epochs", pool.spec.epochs);
    c_pool->add_option("--hidden-units", pool.spec.hidden_units);
    c_pool->add_option("--l2", pool.spec.l2);
    c_pool->add_option("--batch-size", pool.spec.batch_size, "0 = full batch");
    c_pool->add_option("--seed", pool.seed, "Master seed");
    c_pool->add_option("-j,--jobs", pool.jobs)->check(CLI::PositiveNumber);

    SelectArgs select;
    auto* c_select = app.add_subcommand("select", "Choose a sub-ensemble with the genetic search");
    c_select->add_option("-p,--pool", select.pool, "Pool manifest")->required();
    c_select->add_option("--train", select.train, "Training dataset");
    c_select->add_option("--validation", select.validation, "Validation dataset");
    c_select->add_option("--fitness-split", select.fitness_split)
        ->check(CLI::IsMember({"train", "validation"}));
    c_select->add_option("-o,--out", select.out, "Ensemble file (default <pool dir>/ensemble.txt)");
    c_select->add_option("--report", select.report, "GA report file (default stdout)");
    c_select->add_option("--pop-size", select.ga.pop_size);
    c_select->add_option("--max-iter", select.ga.max_iter);
    c_select->add_option("--crossover-rate", select.ga.crossover_rate);
    c_select->add_option("--mutation-rate", select.ga.mutation_rate);
    c_select->add_option("--elite-count", select.ga.elite_count);
    c_select->add_option("--seed", select.ga.rng_seed);
    c_select->add_option("--diversity-norm", select.diversity_norm)
        ->check(CLI::IsMember({"paper", "pairs"}));

    EvaluateArgs evaluate;
    auto* c_evaluate = app.add_subcommand("evaluate", "Score an ensemble on a labelled dataset");
    c_evaluate->add_option("-m,--model", evaluate.model, "Ensemble file")->required();
    c_evaluate->add_option("-d,--data", evaluate.data, "Labelled dataset")->required();
    c_evaluate->add_option("-o,--out", evaluate.out, "Metrics file (default stdout)");

    PredictArgs predict;
    auto* c_predict = app.add_subcommand("predict", "Label records or dataset samples");
    c_predict->add_option("-m,--model", predict.model, "Ensemble file")->required();
    c_predict->add_option("--vocab", predict.vocab, "Vocabulary used for training");
    c_predict->add_option("-r,--records", predict.records, "Record files");
    c_predict->add_option("-d,--data", predict.data, "Sparse dataset");
    c_predict->add_option("-o,--out", predict.out, "Output file (default stdout)");

    ExperimentArgs experiment;
    auto* c_experiment = app.add_subcommand("experiment", "Run the repeated robustness experiment");
    c_experiment->add_option("-c,--config", experiment.config, "key=value config file")->required();
    c_experiment->add_option("-o,--out", experiment.out, "Report file (default stdout)");
    c_experiment->add_flag("--noise-test", experiment.noise_test,
                           "Flip labels before splitting, test split included");

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.push_back("droidsel");
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_storage) {
        argv.push_back(s.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (*c_extract) return cmd_extract(extract, out, err);
        if (*c_vectorize) return cmd_vectorize(vectorize, out, err);
        if (*c_pool) return cmd_train_pool(pool, out, err);
        if (*c_select) return cmd_select(select, out, err);
        if (*c_evaluate) return cmd_evaluate(evaluate, out, err);
        if (*c_predict) return cmd_predict(predict, out, err);
        if (*c_experiment) return cmd_experiment(experiment, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kUsage;
}

} // namespace droidsel::cli
