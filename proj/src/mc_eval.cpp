#include "aodvtune/mc_eval.hpp"

#include "aodvtune/error.hpp"
#include "aodvtune/rng.hpp"
#include "aodvtune/text_format.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <sstream>
#include <exception>
#include <thread>

namespace aodvtune {

std::shared_ptr<const PreparedScenario> PreparedScenario::make(ScenarioSpec spec) {
    spec.validate();
    Trace trace = build_trace(spec);
    return make(std::move(spec), std::move(trace));
}

std::shared_ptr<const PreparedScenario> PreparedScenario::make(ScenarioSpec spec, Trace trace) {
    spec.validate();
    auto p = std::make_shared<PreparedScenario>();
    p->flows = build_flows(spec, trace.node_count());
    std::ostringstream trace_text;
    write_trace(trace_text, trace);
    p->fingerprint = fnv1a(trace_text.str(), fnv1a(scenario_to_keyed_text(spec)));
    p->spec = std::move(spec);
    p->trace = std::move(trace);
    return p;
}

std::size_t default_parallelism() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

void EvalConfig::validate() const {
    if (replications < 1) throw ConfigError("replications must be at least 1");
    if (parallelism < 1) throw ConfigError("parallelism must be at least 1");
    if (!scenario) throw ConfigError("evaluation needs a scenario");
}

std::uint64_t genome_hash(const Genome& g) {
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    for (double v : g.values) h = splitmix64(h ^ std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v));
    return h;
}

std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t ghash, std::size_t replication,
                               std::uint64_t salt) {
    return mix_seed({base_seed, ghash, static_cast<std::uint64_t>(replication), salt});
}

std::uint64_t candidate_salt(const CandidateTag& tag) {
    return mix_seed({0x5a17ULL, static_cast<std::uint64_t>(tag.generation), static_cast<std::uint64_t>(tag.individual)});
}

namespace {

struct Prepared {
    AodvConfig aodv;
    std::vector<std::uint64_t> seeds;
};

Prepared prepare(const Genome& g, const EvalConfig& cfg, std::uint64_t salt) {
    cfg.validate();
    Prepared p{AodvConfig::from_genome(g), {}};
    const std::uint64_t gh = genome_hash(g);
    p.seeds.reserve(cfg.replications);
    for (std::size_t r = 0; r < cfg.replications; ++r) p.seeds.push_back(replication_seed(cfg.base_seed, gh, r, salt));
    return p;
}

} // namespace

ReplicationBatch run_replications_serial(const Genome& g, const EvalConfig& cfg, std::uint64_t salt) {
    const Prepared p = prepare(g, cfg, salt);
    const SimInputs in = cfg.scenario->inputs();
    ReplicationBatch batch{{}, p.seeds};
    batch.outcomes.reserve(cfg.replications);
    for (std::size_t r = 0; r < cfg.replications; ++r) {
        try {
            batch.outcomes.push_back(simulate(p.aodv, in, p.seeds[r]));
        } catch (const std::exception& e) {
            throw ReplicationError(r, p.seeds[r], e.what());
        }
    }
    return batch;
}

ReplicationBatch run_replications(const Genome& g, const EvalConfig& cfg, std::uint64_t salt) {
    const Prepared p = prepare(g, cfg, salt);
    const SimInputs in = cfg.scenario->inputs();
    const auto n = static_cast<std::int64_t>(cfg.replications);
    const int threads = static_cast<int>(std::min(cfg.parallelism, cfg.replications));

    std::vector<SimOutcome> outcomes(cfg.replications);
    std::vector<std::exception_ptr> errors(cfg.replications);

#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
    for (std::int64_t r = 0; r < n; ++r) {
        const auto i = static_cast<std::size_t>(r);
        try {
            outcomes[i] = simulate(p.aodv, in, p.seeds[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }

    for (std::size_t r = 0; r < errors.size(); ++r) {
        if (!errors[r]) continue;
        try {
            std::rethrow_exception(errors[r]);
        } catch (const std::exception& e) {
            throw ReplicationError(r, p.seeds[r], e.what());
        }
    }
    return {std::move(outcomes), p.seeds};
}

FitnessReport evaluate(const Genome& g, const EvalConfig& cfg, const ReferenceValues& refs,
                       const FitnessWeights& weights, std::uint64_t salt) {
    ReplicationBatch batch = cfg.parallelism > 1 ? run_replications(g, cfg, salt)
                                                 : run_replications_serial(g, cfg, salt);
    FitnessReport report = score(batch.outcomes, refs, weights);
    report.seeds = std::move(batch.seeds);
    return report;
}

MonteCarloEvaluator::MonteCarloEvaluator(EvalConfig cfg, FitnessWeights weights)
    : cfg_(std::move(cfg)), weights_(weights) {
    cfg_.validate();
}

std::pair<ReferenceValues, FitnessReport> MonteCarloEvaluator::evaluate_baseline() {
    const auto key = std::make_pair(cfg_.scenario->fingerprint, cfg_.base_seed);
    std::lock_guard lock(cache_mutex_);
    if (auto it = baselines_.find(key); it != baselines_.end()) return it->second;

    const Genome rfc = ParamSpace::aodv().rfc_default();
    ReplicationBatch batch = cfg_.parallelism > 1 ? run_replications(rfc, cfg_) : run_replications_serial(rfc, cfg_);
    replications_run_ += batch.outcomes.size();
    const Means m = aggregate(batch.outcomes);
    ReferenceValues refs{m.energy, m.pdr, 1.0};
    if (!(refs.energy > 0))
        throw ConfigError("RFC baseline consumed no energy on scenario '" + cfg_.scenario->spec.name + "'");
    FitnessReport report = score(batch.outcomes, refs, weights_);
    report.seeds = std::move(batch.seeds);
    return baselines_.emplace(key, std::make_pair(refs, std::move(report))).first->second;
}

FitnessReport MonteCarloEvaluator::evaluate(const Genome& g, const CandidateTag* tag) {
    const ReferenceValues refs = reference_values();
    const std::uint64_t salt = (cfg_.noise == NoiseMode::fresh && tag) ? candidate_salt(*tag) : 0;
    FitnessReport r = aodvtune::evaluate(g, cfg_, refs, weights_, salt);
    replications_run_ += r.outcomes.size();
    return r;
}

Evaluator MonteCarloEvaluator::as_evaluator() {
    return [this](const Genome& g, const CandidateTag& tag) { return evaluate(g, &tag); };
}

} // namespace aodvtune
