#pragma once

#include "aodvtune/fitness.hpp"
#include "aodvtune/param_space.hpp"
#include "aodvtune/rng.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace aodvtune {

enum class CrossoverKind { blx, binomial };

struct DEConfig {
    std::size_t pop_size = 8;
    std::size_t generations = 50;
    double mutation_factor = 0.5;
    // Binomial: per-gene rate C. BLX: probability that the pair is recombined
    // at all; otherwise the mutant is the trial.
    double crossover_prob = 0.9;
    double blx_alpha = 0.2;
    CrossoverKind crossover = CrossoverKind::blx;
    std::uint64_t base_seed = 0;
    // Wall-clock limit in seconds for run(); 0 disables it. A run stopped by
    // the budget is not reproducible.
    double time_budget_seconds = 0.0;

    void validate() const;
};

std::string crossover_name(CrossoverKind k);
CrossoverKind parse_crossover(std::string_view s);

// POP_SIZE, GENERATIONS, MUTATION_FACTOR, CROSSOVER_PROB, BLX_ALPHA,
// CROSSOVER, SEED, TIME_BUDGET. Missing keys keep the values in `base`.
DEConfig parse_de_config(std::string_view text, DEConfig base = {});
std::string de_config_to_keyed_text(const DEConfig& cfg);

struct Population {
    std::vector<Genome> members;
    // NaN until evaluated.
    std::vector<double> fitnesses;
    std::size_t generation = 0;
};

struct GenerationLog {
    std::size_t generation;
    double best_fitness;
    double mean_fitness;
    Genome best;
};

// Identifies the candidate being evaluated.
struct CandidateTag {
    std::size_t generation;
    std::size_t individual;
};

using Evaluator = std::function<FitnessReport(const Genome&, const CandidateTag&)>;

struct OptimizationResult {
    Genome best;
    FitnessReport best_report;
    std::vector<GenerationLog> log;
    DEConfig config;
    std::uint64_t total_replications = 0;
};

// Raised when evaluation fails or yields a non-finite fitness.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& what, const Genome& g) : std::runtime_error(what), genome_(g) {}
    const Genome& genome() const noexcept { return genome_; }

private:
    Genome genome_;
};

// Diagonal-subspace start point for individual p: each gene is offset from its
// RFC default by ((beta_i + p) / pop_size) of its range and wrapped back into
// [lower, upper). Integer genes take an integral offset inside the same band
// whenever the band contains one.
Genome initialize_individual(const ParamSpace& space, std::size_t p, std::size_t pop_size,
                             std::span<const double, kGeneCount> betas);

// Fraction of the range between the RFC default and v, measured upward with
// wrap-around; individual p lands in [p / pop_size, (p + 1) / pop_size).
double wrapped_offset_fraction(const ParamSpace& space, std::size_t gene, double v);

Population initialize_population(const ParamSpace& space, const DEConfig& cfg, Stream& rng);

// v[r1] + mu * (v[r2] - v[r3]), repaired.
Genome mutate_with_indices(const Population& pop, std::size_t r1, std::size_t r2, std::size_t r3,
                           double mu, const ParamSpace& space);

// Draws r1, r2, r3 distinct and != i. Throws ConfigError when pop_size < 4.
std::array<std::size_t, 3> draw_mutation_indices(std::size_t pop_size, std::size_t i, Stream& rng);

Genome mutate(const Population& pop, std::size_t i, double mu, const ParamSpace& space, Stream& rng);

Genome binomial_crossover(const Genome& target, const Genome& mutant, double c, const ParamSpace& space,
                          Stream& rng);

// Children sampled per gene from [min - l*alpha, max + l*alpha], l = max - min.
// The unrepaired form is exposed for bound checks.
std::pair<Genome, Genome> blx_children_raw(const Genome& x, const Genome& y, double alpha, Stream& rng);
std::pair<Genome, Genome> blx_crossover(const Genome& x, const Genome& y, double alpha, const ParamSpace& space,
                                        Stream& rng);

// Trial wins ties. Throws EvaluationError on NaN fitness.
const Genome& select(const Genome& target, const Genome& trial, double f_target, double f_trial);

// Initialization followed by cfg.generations rounds of mutation, crossover,
// evaluation and selection. Donors are drawn from the previous generation.
// `on_generation` sees every log entry as it is produced.
OptimizationResult run(const ParamSpace& space, const DEConfig& cfg, const Evaluator& evaluator,
                       const std::function<void(const GenerationLog&)>& on_generation = {});

std::string generation_log_csv(const std::vector<GenerationLog>& log, const ParamSpace& space);

} // namespace aodvtune
