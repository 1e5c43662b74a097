#pragma once

#include "aodvtune/de.hpp"
#include "aodvtune/fitness.hpp"
#include "aodvtune/mc_eval.hpp"
#include "aodvtune/param_space.hpp"
#include "aodvtune/scenario.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace aodvtune {

enum class Mode { optimize, evaluate, validate, compare };

struct CampaignConfig {
    Mode mode = Mode::optimize;
    std::vector<ScenarioSpec> scenarios;
    DEConfig de;
    std::size_t replications = 24;
    std::size_t parallelism = default_parallelism();
    std::uint64_t seed = 0;
    // True when `seed` came from entropy rather than --seed.
    bool seed_from_entropy = false;
    NoiseMode noise = NoiseMode::genome_hash;
    FitnessWeights weights;
    std::string out_dir;
    // evaluate: the genome; validate: the tuned genome; compare: genome A.
    std::optional<Genome> genome;
    // compare: genome B (defaults to RFC).
    std::optional<Genome> other_genome;
};

// Fingerprint of everything that determines the artifacts. Parallelism is
// excluded because it never changes results.
std::string config_hash(const CampaignConfig& c);

// Each command writes its artifacts under out_dir, reports progress on `out`,
// diagnostics on `err`, and returns the process exit status.
int cmd_optimize(const CampaignConfig& c, std::ostream& out, std::ostream& err);
int cmd_evaluate(const CampaignConfig& c, std::ostream& out, std::ostream& err);
int cmd_validate(const CampaignConfig& c, std::ostream& out, std::ostream& err);
int cmd_compare(const CampaignConfig& c, std::ostream& out, std::ostream& err);

struct MetricComparison {
    std::string scenario;
    std::string metric;
    double mean_a;
    double mean_b;
    double delta_pct;
    double ks_p_a;  // NaN when the sample is constant
    double ks_p_b;
    double kw_h;
    double kw_p;
    bool reject_at_95;
};

// Per-metric comparison rows (energy, pdr, fitness) for two reports of the
// same scenario. Fitness per replication is taken against `refs`.
std::vector<MetricComparison> compare_reports(const std::string& scenario, const FitnessReport& a,
                                              const FitnessReport& b, const ReferenceValues& refs,
                                              const FitnessWeights& w);

std::string comparison_csv_header();
std::string comparison_to_csv(const MetricComparison& m);

} // namespace aodvtune
