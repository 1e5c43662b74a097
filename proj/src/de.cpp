#include "aodvtune/de.hpp"

#include "aodvtune/error.hpp"
#include "aodvtune/text_format.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace aodvtune {

void DEConfig::validate() const {
    if (pop_size < 4)
        throw ConfigError("population size must be at least 4 (mutation needs three other individuals)");
    if (!(mutation_factor > 0) || !std::isfinite(mutation_factor))
        throw ConfigError("mutation factor must be positive");
    if (!(crossover_prob >= 0 && crossover_prob <= 1))
        throw ConfigError("crossover probability must be in [0, 1]");
    if (!(blx_alpha >= 0) || !std::isfinite(blx_alpha)) throw ConfigError("BLX alpha must be >= 0");
    if (!(time_budget_seconds >= 0)) throw ConfigError("time budget must be >= 0");
}

std::string crossover_name(CrossoverKind k) { return k == CrossoverKind::blx ? "blx" : "binomial"; }

CrossoverKind parse_crossover(std::string_view s) {
    if (s == "blx") return CrossoverKind::blx;
    if (s == "binomial") return CrossoverKind::binomial;
    throw ConfigError("crossover must be blx or binomial, got '" + std::string(s) + "'");
}

DEConfig parse_de_config(std::string_view text, DEConfig cfg) {
    for (const auto& e : parse_keyed_text(text)) {
        try {
            if (e.key == "POP_SIZE") cfg.pop_size = parse_u64(e.value);
            else if (e.key == "GENERATIONS") cfg.generations = parse_u64(e.value);
            else if (e.key == "MUTATION_FACTOR") cfg.mutation_factor = parse_double(e.value);
            else if (e.key == "CROSSOVER_PROB") cfg.crossover_prob = parse_double(e.value);
            else if (e.key == "BLX_ALPHA") cfg.blx_alpha = parse_double(e.value);
            else if (e.key == "CROSSOVER") cfg.crossover = parse_crossover(e.value);
            else if (e.key == "SEED") cfg.base_seed = parse_u64(e.value);
            else if (e.key == "TIME_BUDGET") cfg.time_budget_seconds = parse_double(e.value);
            else throw ParseError("unknown DE key '" + e.key + "'");
        } catch (const std::exception& err) {
            throw ParseError(err.what(), e.line);
        }
    }
    return cfg;
}

std::string de_config_to_keyed_text(const DEConfig& cfg) {
    return "POP_SIZE=" + std::to_string(cfg.pop_size) + "\nGENERATIONS=" + std::to_string(cfg.generations) +
           "\nMUTATION_FACTOR=" + format_double(cfg.mutation_factor) +
           "\nCROSSOVER_PROB=" + format_double(cfg.crossover_prob) + "\nBLX_ALPHA=" + format_double(cfg.blx_alpha) +
           "\nCROSSOVER=" + crossover_name(cfg.crossover) + "\nSEED=" + std::to_string(cfg.base_seed) +
           "\nTIME_BUDGET=" + format_double(cfg.time_budget_seconds) + "\n";
}

// -- initialization ----------------------------------------------------------

Genome initialize_individual(const ParamSpace& space, std::size_t p, std::size_t pop_size,
                             std::span<const double, kGeneCount> betas) {
    const double n = static_cast<double>(pop_size);
    const double pp = static_cast<double>(p);
    Genome g;
    for (std::size_t i = 0; i < kGeneCount; ++i) {
        const auto& spec = space.gene(i);
        const double range = spec.range();
        double offset = (betas[i] + pp) / n * range;

        if (spec.kind == GeneKind::integer) {
            const double band_lo = std::ceil(pp / n * range);
            const double band_hi = std::ceil((pp + 1.0) / n * range) - 1.0;
            offset = std::round(offset);
            if (band_lo <= band_hi) offset = std::clamp(offset, band_lo, band_hi);
            offset = std::fmod(offset, range);
        }

        double x = spec.rfc_default + offset;
        if (x >= spec.upper) x -= range;
        g[i] = space.repair_gene(i, x);
    }
    return g;
}

double wrapped_offset_fraction(const ParamSpace& space, std::size_t gene, double v) {
    const auto& spec = space.gene(gene);
    double d = v - spec.rfc_default;
    if (d < 0) d += spec.range();
    return d / spec.range();
}

Population initialize_population(const ParamSpace& space, const DEConfig& cfg, Stream& rng) {
    if (cfg.pop_size < 1) throw ConfigError("population size must be at least 1");
    Population pop;
    pop.members.reserve(cfg.pop_size);
    for (std::size_t p = 0; p < cfg.pop_size; ++p) {
        std::array<double, kGeneCount> betas{};
        for (auto& b : betas) b = rng.uniform01();
        pop.members.push_back(initialize_individual(space, p, cfg.pop_size, betas));
    }
    pop.fitnesses.assign(cfg.pop_size, std::numeric_limits<double>::quiet_NaN());
    return pop;
}

// -- variation ---------------------------------------------------------------

Genome mutate_with_indices(const Population& pop, std::size_t r1, std::size_t r2, std::size_t r3,
                           double mu, const ParamSpace& space) {
    const auto& a = pop.members.at(r1);
    const auto& b = pop.members.at(r2);
    const auto& c = pop.members.at(r3);
    Genome w;
    for (std::size_t j = 0; j < kGeneCount; ++j) w[j] = a[j] + mu * (b[j] - c[j]);
    return space.repair(w);
}

std::array<std::size_t, 3> draw_mutation_indices(std::size_t pop_size, std::size_t i, Stream& rng) {
    if (pop_size < 4) throw ConfigError("mutation needs a population of at least 4");
    std::array<std::size_t, 3> r{};
    for (std::size_t k = 0; k < 3; ++k) {
        std::size_t c;
        do {
            c = rng.index(pop_size);
        } while (c == i || std::find(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(k), c) !=
                               r.begin() + static_cast<std::ptrdiff_t>(k));
        r[k] = c;
    }
    assert(r[0] != r[1] && r[0] != r[2] && r[1] != r[2] && r[0] != i && r[1] != i && r[2] != i);
    return r;
}

Genome mutate(const Population& pop, std::size_t i, double mu, const ParamSpace& space, Stream& rng) {
    const auto r = draw_mutation_indices(pop.members.size(), i, rng);
    return mutate_with_indices(pop, r[0], r[1], r[2], mu, space);
}

Genome binomial_crossover(const Genome& target, const Genome& mutant, double c, const ParamSpace& space,
                          Stream& rng) {
    const std::size_t forced = rng.index(kGeneCount);
    Genome u;
    for (std::size_t j = 0; j < kGeneCount; ++j) {
        const double r = rng.uniform01();
        u[j] = (r <= c || j == forced) ? mutant[j] : target[j];
    }
    return space.repair(u);
}

std::pair<Genome, Genome> blx_children_raw(const Genome& x, const Genome& y, double alpha, Stream& rng) {
    Genome u, v;
    for (std::size_t i = 0; i < kGeneCount; ++i) {
        const double lo = std::min(x[i], y[i]);
        const double hi = std::max(x[i], y[i]);
        const double l = hi - lo;
        const double left = lo - l * alpha;
        const double right = hi + l * alpha;
        u[i] = std::min(right, left + rng.uniform01() * (right - left));
        v[i] = std::min(right, left + rng.uniform01() * (right - left));
    }
    return {u, v};
}

std::pair<Genome, Genome> blx_crossover(const Genome& x, const Genome& y, double alpha, const ParamSpace& space,
                                        Stream& rng) {
    auto [u, v] = blx_children_raw(x, y, alpha, rng);
    return {space.repair(u), space.repair(v)};
}

const Genome& select(const Genome& target, const Genome& trial, double f_target, double f_trial) {
    if (std::isnan(f_target)) throw EvaluationError("target fitness is NaN", target);
    if (std::isnan(f_trial)) throw EvaluationError("trial fitness is NaN", trial);
    return f_trial <= f_target ? trial : target;
}

// -- generational loop -------------------------------------------------------

namespace {

GenerationLog make_log(const Population& pop) {
    const auto best = static_cast<std::size_t>(
        std::min_element(pop.fitnesses.begin(), pop.fitnesses.end()) - pop.fitnesses.begin());
    const double mean = std::accumulate(pop.fitnesses.begin(), pop.fitnesses.end(), 0.0) /
                        static_cast<double>(pop.fitnesses.size());
    return {pop.generation, pop.fitnesses[best], std::max(mean, pop.fitnesses[best]), pop.members[best]};
}

} // namespace

OptimizationResult run(const ParamSpace& space, const DEConfig& cfg, const Evaluator& evaluator,
                       const std::function<void(const GenerationLog&)>& on_generation) {
    cfg.validate();
    const auto started = std::chrono::steady_clock::now();
    auto over_budget = [&] {
        if (cfg.time_budget_seconds <= 0) return false;
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
        return elapsed.count() > cfg.time_budget_seconds;
    };

    OptimizationResult result;
    result.config = cfg;

    auto evaluate = [&](const Genome& g, CandidateTag tag) {
        FitnessReport r;
        try {
            r = evaluator(g, tag);
        } catch (const EvaluationError&) {
            throw;
        } catch (const std::exception& e) {
            throw EvaluationError(std::string("evaluation failed: ") + e.what(), g);
        }
        if (!std::isfinite(r.fitness)) throw EvaluationError("evaluator returned a non-finite fitness", g);
        result.total_replications += r.outcomes.size();
        return r;
    };

    Stream init_rng = Stream::named(cfg.base_seed, StreamPurpose::initialization);
    Population pop = initialize_population(space, cfg, init_rng);
    std::vector<FitnessReport> reports(cfg.pop_size);
    for (std::size_t p = 0; p < cfg.pop_size; ++p) {
        reports[p] = evaluate(pop.members[p], {0, p});
        pop.fitnesses[p] = reports[p].fitness;
    }

    auto track_best = [&](bool first) {
        const auto idx = static_cast<std::size_t>(
            std::min_element(pop.fitnesses.begin(), pop.fitnesses.end()) - pop.fitnesses.begin());
        if (first || pop.fitnesses[idx] < result.best_report.fitness) {
            result.best = pop.members[idx];
            result.best_report = reports[idx];
        }
    };
    track_best(true);
    result.log.push_back(make_log(pop));
    if (on_generation) on_generation(result.log.back());

    for (std::size_t g = 1; g <= cfg.generations; ++g) {
        if (over_budget()) break;
        Population next = pop;
        next.generation = g;
        for (std::size_t i = 0; i < cfg.pop_size; ++i) {
            Stream mut_rng = Stream::named(cfg.base_seed, StreamPurpose::mutation, g, i);
            const Genome mutant = mutate(pop, i, cfg.mutation_factor, space, mut_rng);

            Stream cx_rng = Stream::named(cfg.base_seed, StreamPurpose::crossover, g, i);
            Genome trial;
            if (cfg.crossover == CrossoverKind::binomial) {
                trial = binomial_crossover(pop.members[i], mutant, cfg.crossover_prob, space, cx_rng);
            } else if (cx_rng.uniform01() < cfg.crossover_prob) {
                trial = blx_crossover(pop.members[i], mutant, cfg.blx_alpha, space, cx_rng).first;
            } else {
                trial = mutant;
            }

            FitnessReport rep = evaluate(trial, {g, i});
            if (&select(pop.members[i], trial, pop.fitnesses[i], rep.fitness) == &trial) {
                next.members[i] = trial;
                next.fitnesses[i] = rep.fitness;
                reports[i] = std::move(rep);
            }
        }
        pop = std::move(next);
        track_best(false);
        result.log.push_back(make_log(pop));
        if (on_generation) on_generation(result.log.back());
    }
    return result;
}

std::string generation_log_csv(const std::vector<GenerationLog>& log, const ParamSpace& space) {
    std::string s = "generation,best_fitness,mean_fitness," + genome_csv_header(space) + "\n";
    for (const auto& e : log)
        s += std::to_string(e.generation) + "," + format_double(e.best_fitness) + "," +
             format_double(e.mean_fitness) + "," + genome_to_csv(e.best) + "\n";
    return s;
}

} // namespace aodvtune
