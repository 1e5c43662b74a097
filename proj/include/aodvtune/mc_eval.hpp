#pragma once

#include "aodvtune/de.hpp"
#include "aodvtune/fitness.hpp"
#include "aodvtune/mobility.hpp"
#include "aodvtune/param_space.hpp"
#include "aodvtune/scenario.hpp"
#include "aodvtune/vanet_sim.hpp"

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace aodvtune {

// A scenario with its mobility trace and flows materialized once and shared,
// read-only, by every replication.
struct PreparedScenario {
    ScenarioSpec spec;
    Trace trace;
    std::vector<FlowSpec> flows;
    std::uint64_t fingerprint = 0;

    static std::shared_ptr<const PreparedScenario> make(ScenarioSpec spec);
    static std::shared_ptr<const PreparedScenario> make(ScenarioSpec spec, Trace trace);
    SimInputs inputs() const { return {spec, trace, flows}; }
};

enum class NoiseMode {
    genome_hash,  // seeds depend on (base_seed, genome, replication): re-evaluation is repeatable
    fresh,        // additionally salted by (generation, individual)
};

std::size_t default_parallelism();

struct EvalConfig {
    std::size_t replications = 24;
    std::size_t parallelism = default_parallelism();
    std::uint64_t base_seed = 0;
    NoiseMode noise = NoiseMode::genome_hash;
    std::shared_ptr<const PreparedScenario> scenario;

    void validate() const;
};

std::uint64_t genome_hash(const Genome& g);
std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t genome_hash, std::size_t replication,
                               std::uint64_t salt = 0);
std::uint64_t candidate_salt(const CandidateTag& tag);

// A replication that threw. Carries the replication index and its seed.
class ReplicationError : public std::runtime_error {
public:
    ReplicationError(std::size_t replication, std::uint64_t seed, const std::string& cause)
        : std::runtime_error("replication " + std::to_string(replication) + " (seed " + std::to_string(seed) +
                             ") failed: " + cause),
          replication_(replication), seed_(seed) {}
    std::size_t replication() const noexcept { return replication_; }
    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::size_t replication_;
    std::uint64_t seed_;
};

struct ReplicationBatch {
    std::vector<SimOutcome> outcomes;  // index-ordered
    std::vector<std::uint64_t> seeds;
};

// Reference path: replications one after another on the calling thread.
ReplicationBatch run_replications_serial(const Genome& g, const EvalConfig& cfg, std::uint64_t salt = 0);

// OpenMP path: replications spread over min(parallelism, N) threads. Output is
// identical to run_replications_serial for any thread count.
ReplicationBatch run_replications(const Genome& g, const EvalConfig& cfg, std::uint64_t salt = 0);

// Monte-Carlo fitness of one genome. Throws ConfigError for invalid genomes and
// ReplicationError when a replication fails.
FitnessReport evaluate(const Genome& g, const EvalConfig& cfg, const ReferenceValues& refs,
                       const FitnessWeights& weights, std::uint64_t salt = 0);

// Evaluates genomes against cached RFC reference values and counts simulator
// runs. Baselines are cached per (scenario fingerprint, base seed).
class MonteCarloEvaluator {
public:
    MonteCarloEvaluator(EvalConfig cfg, FitnessWeights weights = {});

    const EvalConfig& config() const { return cfg_; }
    const FitnessWeights& weights() const { return weights_; }

    // RFC reference values and the report they were taken from.
    std::pair<ReferenceValues, FitnessReport> evaluate_baseline();
    ReferenceValues reference_values() { return evaluate_baseline().first; }

    FitnessReport evaluate(const Genome& g, const CandidateTag* tag = nullptr);

    // Adapter for de::run.
    Evaluator as_evaluator();

    std::uint64_t replications_run() const { return replications_run_.load(); }

private:
    EvalConfig cfg_;
    FitnessWeights weights_;
    std::mutex cache_mutex_;
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::pair<ReferenceValues, FitnessReport>> baselines_;
    std::atomic<std::uint64_t> replications_run_{0};
};

} // namespace aodvtune
