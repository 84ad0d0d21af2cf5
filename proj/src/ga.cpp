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

#include "droidsel/ga.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

#include "droidsel/error.hpp"

namespace droidsel {

std::string_view to_string(DiversityNorm norm) {
    return norm == DiversityNorm::Size ? "paper" : "pairs";
}

std::string_view to_string(FitnessSplit split) {
    return split == FitnessSplit::Train ? "train" : "validation";
}

DiversityNorm parse_diversity_norm(std::string_view text) {
    if (text == "paper") return DiversityNorm::Size;
    if (text == "pairs") return DiversityNorm::Pairs;
    fail(ErrorCode::InvalidConfig, "diversity_norm must be 'paper' or 'pairs'");
}

FitnessSplit parse_fitness_split(std::string_view text) {
    if (text == "train") return FitnessSplit::Train;
    if (text == "validation") return FitnessSplit::Validation;
    fail(ErrorCode::InvalidConfig, "fitness_split must be 'train' or 'validation'");
}

PredictionMatrix::PredictionMatrix(std::size_t learners, std::size_t samples,
                                   std::vector<std::int8_t> entries)
    : n_(learners), m_(samples), entries_(std::move(entries)) {
    if (entries_.size() != n_ * m_) {
        fail(ErrorCode::DimensionMismatch, "prediction matrix has the wrong number of entries");
    }
    for (auto e : entries_) {
        if (e != 1 && e != -1) {
            fail(ErrorCode::FormatError, "prediction matrix entries must be +1 or -1");
        }
    }
    distances_.assign(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            long sum = 0;
            for (std::size_t k = 0; k < m_; ++k) {
                const int diff = entries_[i * m_ + k] - entries_[j * m_ + k];
                sum += diff * diff;
            }
            const double d = std::sqrt(static_cast<double>(sum));
            distances_[i * n_ + j] = d;
            distances_[j * n_ + i] = d;
        }
    }
}

PredictionMatrix PredictionMatrix::compute(const EnsemblePool& pool, const Dataset& data) {
    const std::size_t n = pool.size();
    const std::size_t m = data.size();
    std::vector<std::int8_t> entries(n * m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            entries[i * m + k] =
                static_cast<std::int8_t>(label_value(pool.learners[i].predict_label(data.vectors[k])));
        }
    }
    return PredictionMatrix(n, m, std::move(entries));
}

namespace {

void check_selection(const PredictionMatrix& matrix, const WeightVector& omega) {
    if (omega.size() != matrix.learners()) {
        fail(ErrorCode::InvalidConfig, "weight vector length does not match the pool");
    }
    if (omega.popcount() == 0) {
        fail(ErrorCode::AllZeroWeights, "at least one learner must be selected");
    }
}

} // namespace

double diversity(const PredictionMatrix& matrix, const WeightVector& omega, DiversityNorm norm) {
    check_selection(matrix, omega);
    const auto selected = omega.selected();
    double sum = 0.0;
    for (std::size_t a = 0; a < selected.size(); ++a) {
        for (std::size_t b = a + 1; b < selected.size(); ++b) {
            sum += matrix.pair_distance(selected[a], selected[b]);
        }
    }
    const double n_sel = static_cast<double>(selected.size());
    if (norm == DiversityNorm::Size) {
        return sum / n_sel;
    }
    return selected.size() < 2 ? 0.0 : sum / (n_sel * (n_sel - 1.0) / 2.0);
}

double matrix_accuracy(const PredictionMatrix& matrix, std::span<const int> labels,
                       const WeightVector& omega) {
    check_selection(matrix, omega);
    if (labels.size() != matrix.samples()) {
        fail(ErrorCode::LengthMismatch, "label count does not match prediction matrix");
    }
    if (labels.empty()) {
        fail(ErrorCode::EmptyDataset, "accuracy over zero samples");
    }
    const auto selected = omega.selected();
    std::vector<long> sums(matrix.samples(), 0);
    for (std::size_t i : selected) {
        const auto row = matrix.row(i);
        for (std::size_t k = 0; k < row.size(); ++k) {
            sums[k] += row[k];
        }
    }
    std::size_t correct = 0;
    for (std::size_t k = 0; k < sums.size(); ++k) {
        const int vote = sums[k] >= 0 ? 1 : -1;
        if (vote == labels[k]) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(labels.size());
}

FitnessBreakdown evaluate_fitness(const PredictionMatrix& matrix, std::span<const int> labels,
                                  const WeightVector& omega, DiversityNorm norm) {
    FitnessBreakdown f;
    f.accuracy = matrix_accuracy(matrix, labels, omega);
    f.diversity = diversity(matrix, omega, norm);
    f.fitness = f.accuracy * f.diversity;
    return f;
}

void repair(Chromosome& c, Rng& rng) {
    if (c.bits.size() > 0 && c.bits.popcount() == 0) {
        c.bits.set(uniform_index(rng, c.bits.size()), true);
        c.fitness.reset();
    }
}

Population init_population(std::size_t pop_size, std::size_t n, Rng& rng) {
    Population population(pop_size);
    for (auto& c : population) {
        c.bits = WeightVector(n);
        for (std::size_t g = 0; g < n; ++g) {
            c.bits.set(g, bernoulli(rng, 0.5));
        }
        repair(c, rng);
    }
    return population;
}

std::pair<WeightVector, WeightVector> single_point_crossover(const WeightVector& a,
                                                             const WeightVector& b,
                                                             std::size_t cut) {
    if (a.size() != b.size() || cut > a.size()) {
        fail(ErrorCode::InvalidConfig, "crossover parents must share length and cut in range");
    }
    WeightVector x = a;
    WeightVector y = b;
    for (std::size_t g = cut; g < a.size(); ++g) {
        x.set(g, b[g]);
        y.set(g, a[g]);
    }
    return {std::move(x), std::move(y)};
}

Population crossover(Population population, double rate, Rng& rng, bool repair_after) {
    std::vector<std::size_t> order(population.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(order.begin(), order.end(), rng);
    for (std::size_t p = 0; p + 1 < order.size(); p += 2) {
        auto& a = population[order[p]];
        auto& b = population[order[p + 1]];
        const std::size_t n = a.bits.size();
        if (!bernoulli(rng, rate) || n < 2) {
            continue;
        }
        const std::size_t cut = 1 + uniform_index(rng, n - 1);
        auto [x, y] = single_point_crossover(a.bits, b.bits, cut);
        if (x != a.bits) {
            a.bits = std::move(x);
            a.fitness.reset();
        }
        if (y != b.bits) {
            b.bits = std::move(y);
            b.fitness.reset();
        }
    }
    if (repair_after) {
        for (auto& c : population) {
            repair(c, rng);
        }
    }
    return population;
}

Population mutation(Population population, double rate, Rng& rng, bool repair_after) {
    for (auto& c : population) {
        bool changed = false;
        for (std::size_t g = 0; g < c.bits.size(); ++g) {
            if (bernoulli(rng, rate)) {
                c.bits.flip(g);
                changed = true;
            }
        }
        if (changed) {
            c.fitness.reset();
        }
        if (repair_after) {
            repair(c, rng);
        }
    }
    return population;
}

Population select_newpop(const Population& population, std::span<const double> fitnesses,
                         std::size_t elite_count, Rng& rng) {
    if (fitnesses.size() != population.size()) {
        fail(ErrorCode::LengthMismatch, "one fitness value per chromosome required");
    }
    for (double f : fitnesses) {
        if (!std::isfinite(f) || f < 0.0) {
            fail(ErrorCode::InvalidConfig, "fitness values must be finite and non-negative");
        }
    }
    const std::size_t size = population.size();
    elite_count = std::min(elite_count, size);

    std::vector<std::size_t> ranked(size);
    std::iota(ranked.begin(), ranked.end(), std::size_t{0});
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](std::size_t a, std::size_t b) { return fitnesses[a] > fitnesses[b]; });

    Population next;
    next.reserve(size);
    for (std::size_t e = 0; e < elite_count; ++e) {
        next.push_back(population[ranked[e]]);
        next.back().fitness = fitnesses[ranked[e]];
    }

    std::vector<double> cumulative(size);
    std::partial_sum(fitnesses.begin(), fitnesses.end(), cumulative.begin());
    const double total = size ? cumulative.back() : 0.0;
    while (next.size() < size) {
        std::size_t pick;
        if (total > 0.0) {
            const double u = uniform01(rng) * total;
            pick = static_cast<std::size_t>(
                std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
            pick = std::min(pick, size - 1);
        } else {
            pick = uniform_index(rng, size);
        }
        next.push_back(population[pick]);
        next.back().fitness = fitnesses[pick];
    }
    return next;
}

void GAConfig::validate() const {
    if (pop_size < 2) {
        fail(ErrorCode::InvalidConfig, "pop_size must be >= 2");
    }
    if (max_iter < 1) {
        fail(ErrorCode::InvalidConfig, "max_iter must be >= 1");
    }
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
        fail(ErrorCode::InvalidConfig, "crossover_rate must lie in [0, 1]");
    }
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
        fail(ErrorCode::InvalidConfig, "mutation_rate must lie in [0, 1]");
    }
    if (elite_count >= pop_size) {
        fail(ErrorCode::InvalidConfig, "elite_count must be < pop_size");
    }
}

GAResult run_ga(const PredictionMatrix& matrix, std::span<const int> labels,
                const GAConfig& config) {
    config.validate();
    if (matrix.learners() == 0) {
        fail(ErrorCode::InvalidConfig, "empty learner pool");
    }
    if (labels.size() != matrix.samples()) {
        fail(ErrorCode::LengthMismatch, "label count does not match prediction matrix");
    }

    Rng rng(config.rng_seed);
    GAResult result;
    bool have_best = false;
    std::vector<double> fitnesses(config.pop_size);

    auto evaluate = [&](Population& population, std::size_t generation) {
        double sum = 0.0;
        double best = 0.0;
        for (std::size_t c = 0; c < population.size(); ++c) {
            auto& chromosome = population[c];
            if (!chromosome.fitness) {
                chromosome.fitness =
                    fitness(matrix, labels, chromosome.bits, config.diversity_norm);
            }
            fitnesses[c] = *chromosome.fitness;
            sum += fitnesses[c];
            best = std::max(best, fitnesses[c]);
            if (!have_best || fitnesses[c] > result.best_breakdown.fitness) {
                result.best = chromosome.bits;
                result.best_breakdown =
                    evaluate_fitness(matrix, labels, chromosome.bits, config.diversity_norm);
                have_best = true;
            }
        }
        result.history.push_back({generation, best,
                                   sum / static_cast<double>(population.size()),
                                   result.best_breakdown.fitness});
    };

    Population population = init_population(config.pop_size, matrix.learners(), rng);
    evaluate(population, 0);
    for (std::size_t iteration = 1; iteration <= config.max_iter; ++iteration) {
        population = crossover(std::move(population), config.crossover_rate, rng);
        population = mutation(std::move(population), config.mutation_rate, rng);
        evaluate(population, iteration);
        population = select_newpop(population, fitnesses, config.elite_count, rng);
    }
    return result;
}

GAResult run_ga(const EnsemblePool& pool, const Dataset& train, const Dataset& validation,
                const GAConfig& config) {
    const Dataset& data = config.fitness_split == FitnessSplit::Train ? train : validation;
    if (data.empty()) {
        fail(ErrorCode::EmptyDataset, "fitness split is empty");
    }
    const auto matrix = PredictionMatrix::compute(pool, data);
    const auto labels = data.labels();
    return run_ga(matrix, labels, config);
}

GAResult exhaustive_search(const PredictionMatrix& matrix, std::span<const int> labels,
                           DiversityNorm norm) {
    const std::size_t n = matrix.learners();
    if (n == 0 || n > 24) {
        fail(ErrorCode::InvalidConfig, "exhaustive search supports 1..24 learners");
    }
    GAResult result;
    bool have_best = false;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        WeightVector omega(n);
        for (std::size_t g = 0; g < n; ++g) {
            omega.set(g, (mask >> g) & 1u);
        }
        const auto f = evaluate_fitness(matrix, labels, omega, norm);
        if (!have_best || f.fitness > result.best_breakdown.fitness) {
            result.best = omega;
            result.best_breakdown = f;
            have_best = true;
        }
    }
    return result;
}

void write_ga_report(std::ostream& out, const GAConfig& config, const GAResult& result) {
    char buf[160];
    out << "# droidsel ga report v1\n";
    std::snprintf(buf, sizeof(buf),
                  "config\tpop_size=%zu\tmax_iter=%zu\tcrossover_rate=%.6g\tmutation_rate=%.6g"
                  "\telite_count=%zu\trng_seed=%llu",
                  config.pop_size, config.max_iter, config.crossover_rate, config.mutation_rate,
                  config.elite_count, static_cast<unsigned long long>(config.rng_seed));
    out << buf << "\tfitness_split=" << to_string(config.fitness_split)
        << "\tdiversity_norm=" << to_string(config.diversity_norm) << '\n';
    out << "#\tgeneration\tbest\tmean\tbest_ever\n";
    for (const auto& g : result.history) {
        std::snprintf(buf, sizeof(buf), "generation\t%zu\t%.10f\t%.10f\t%.10f\n", g.generation,
                      g.best, g.mean, g.best_ever);
        out << buf;
    }
    out << "omega\t" << result.best.to_string() << '\n';
    out << "selected\t" << result.best.popcount() << '\n';
    std::snprintf(buf, sizeof(buf), "fitness\t%.10f\naccuracy\t%.10f\ndiversity\t%.10f\n",
                  result.best_breakdown.fitness, result.best_breakdown.accuracy,
                  result.best_breakdown.diversity);
    out << buf;
}

} // namespace droidsel
