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
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "droidsel/dataset.hpp"
#include "droidsel/ensemble.hpp"
#include "droidsel/random.hpp"

namespace droidsel {

// How the summed pairwise distance is normalised: by the selected ensemble
// size (Size, config token "paper") or by the number of selected pairs (Pairs).
enum class DiversityNorm { Size, Pairs };
enum class FitnessSplit { Train, Validation };

std::string_view to_string(DiversityNorm norm);
std::string_view to_string(FitnessSplit split);
DiversityNorm parse_diversity_norm(std::string_view text);
FitnessSplit parse_fitness_split(std::string_view text);

// N learners x M samples of +1/-1 predictions, computed once and shared by
// every fitness evaluation. Pairwise row distances are cached on construction.
class PredictionMatrix {
public:
    PredictionMatrix(std::size_t learners, std::size_t samples, std::vector<std::int8_t> entries);

    static PredictionMatrix compute(const EnsemblePool& pool, const Dataset& data);

    std::size_t learners() const noexcept { return n_; }
    std::size_t samples() const noexcept { return m_; }
    int at(std::size_t learner, std::size_t sample) const { return entries_[learner * m_ + sample]; }
    std::span<const std::int8_t> row(std::size_t learner) const {
        return {entries_.data() + learner * m_, m_};
    }
    // sqrt(sum_k (p_i(x_k) - p_j(x_k))^2)
    double pair_distance(std::size_t i, std::size_t j) const { return distances_[i * n_ + j]; }

    friend bool operator==(const PredictionMatrix& a, const PredictionMatrix& b) {
        return a.n_ == b.n_ && a.m_ == b.m_ && a.entries_ == b.entries_;
    }

private:
    std::size_t n_;
    std::size_t m_;
    std::vector<std::int8_t> entries_;
    std::vector<double> distances_;
};

double diversity(const PredictionMatrix& matrix, const WeightVector& omega,
                 DiversityNorm norm = DiversityNorm::Size);

// Majority-vote accuracy of the selected rows against +1/-1 labels.
double matrix_accuracy(const PredictionMatrix& matrix, std::span<const int> labels,
                       const WeightVector& omega);

struct FitnessBreakdown {
    double accuracy = 0.0;
    double diversity = 0.0;
    double fitness = 0.0;
};

FitnessBreakdown evaluate_fitness(const PredictionMatrix& matrix, std::span<const int> labels,
                                  const WeightVector& omega,
                                  DiversityNorm norm = DiversityNorm::Size);

// accuracy x diversity
inline double fitness(const PredictionMatrix& matrix, std::span<const int> labels,
                      const WeightVector& omega, DiversityNorm norm = DiversityNorm::Size) {
    return evaluate_fitness(matrix, labels, omega, norm).fitness;
}

struct Chromosome {
    WeightVector bits;
    std::optional<double> fitness;

    friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

using Population = std::vector<Chromosome>;

// Sets one uniformly chosen gene when no gene is set.
void repair(Chromosome& c, Rng& rng);

Population init_population(std::size_t pop_size, std::size_t n, Rng& rng);

// Offspring of a single-point crossover: a[0, cut) + b[cut, N) and b[0, cut) + a[cut, N).
std::pair<WeightVector, WeightVector> single_point_crossover(const WeightVector& a,
                                                             const WeightVector& b,
                                                             std::size_t cut);

// Pairs chromosomes in shuffled order; each pair crosses with probability
// `rate` at a cut drawn from [1, N-1]. Offspring take their parents' slots.
Population crossover(Population population, double rate, Rng& rng, bool repair_after = true);

// Flips each gene independently with probability `rate`.
Population mutation(Population population, double rate, Rng& rng, bool repair_after = true);

// Copies the `elite_count` fittest (ties to the lower index) and fills the
// rest by fitness-proportional sampling with replacement; uniform when all
// fitnesses are zero.
Population select_newpop(const Population& population, std::span<const double> fitnesses,
                         std::size_t elite_count, Rng& rng);

struct GAConfig {
    std::size_t pop_size = 30;
    std::size_t max_iter = 50;
    double crossover_rate = 0.8;
    double mutation_rate = 0.05;
    std::size_t elite_count = 2;
    std::uint64_t rng_seed = 1;
    FitnessSplit fitness_split = FitnessSplit::Validation;
    DiversityNorm diversity_norm = DiversityNorm::Size;

    // Throws InvalidConfig.
    void validate() const;
};

struct GenerationStats {
    std::size_t generation = 0;
    double best = 0.0;
    double mean = 0.0;
    double best_ever = 0.0;

    friend bool operator==(const GenerationStats&, const GenerationStats&) = default;
};

struct GAResult {
    WeightVector best;
    FitnessBreakdown best_breakdown;
    std::vector<GenerationStats> history;  // generation 0 is the initial population

    double best_fitness() const noexcept { return best_breakdown.fitness; }
};

// Initial population, then per iteration: crossover, mutation, fitness
// evaluation, selection. The best chromosome ever evaluated is returned.
GAResult run_ga(const PredictionMatrix& matrix, std::span<const int> labels,
                const GAConfig& config);

// Evaluates fitness on `train` or `validation` as config.fitness_split says.
GAResult run_ga(const EnsemblePool& pool, const Dataset& train, const Dataset& validation,
                const GAConfig& config);

// Exhaustive maximum over all 2^N - 1 non-empty selections (N <= 24).
GAResult exhaustive_search(const PredictionMatrix& matrix, std::span<const int> labels,
                           DiversityNorm norm = DiversityNorm::Size);

void write_ga_report(std::ostream& out, const GAConfig& config, const GAResult& result);

} // namespace droidsel
