#include "aodvtune/campaign.hpp"
#include "aodvtune/error.hpp"
#include "aodvtune/text_format.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <random>

using namespace aodvtune;

namespace {

struct Flags {
    std::vector<std::string> scenarios;
    std::optional<std::uint64_t> seed;
    std::size_t replications = 24;
    std::size_t parallelism = default_parallelism();
    std::optional<std::size_t> generations;
    std::optional<std::size_t> pop_size;
    std::optional<std::string> crossover;
    std::optional<double> alpha;
    std::optional<double> mu;
    std::optional<double> pc;
    std::optional<double> time_budget;
    std::string config;
    std::string out;
    std::string genome;
    std::string genome_b;
    std::string pdr_floor = "degradation";
    std::string noise = "genome_hash";
};

void add_common(CLI::App* sub, Flags& f, bool needs_out) {
    sub->add_option("--scenario", f.scenarios, "Scenario file (repeatable)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", f.seed, "Base seed; drawn from entropy when absent");
    sub->add_option("--replications", f.replications, "Monte-Carlo replications per evaluation")
        ->check(CLI::PositiveNumber);
    sub->add_option("--parallelism", f.parallelism, "Worker threads for replications")->check(CLI::PositiveNumber);
    sub->add_option("--pdr-floor", f.pdr_floor, "PDR floor rule")
        ->check(CLI::IsMember({"degradation", "literal"}));
    sub->add_option("--noise", f.noise, "Replication seeding")->check(CLI::IsMember({"genome_hash", "fresh"}));
    auto* out = sub->add_option("--out", f.out, "Output directory");
    if (needs_out) out->required();
}

CampaignConfig build_config(Mode mode, const Flags& f) {
    CampaignConfig c;
    c.mode = mode;
    for (const auto& path : f.scenarios) c.scenarios.push_back(load_scenario(path));
    if (!f.config.empty()) c.de = parse_de_config(read_file(f.config), c.de);
    if (f.generations) c.de.generations = *f.generations;
    if (f.pop_size) c.de.pop_size = *f.pop_size;
    if (f.crossover) c.de.crossover = parse_crossover(*f.crossover);
    if (f.alpha) c.de.blx_alpha = *f.alpha;
    if (f.mu) c.de.mutation_factor = *f.mu;
    if (f.pc) c.de.crossover_prob = *f.pc;
    if (f.time_budget) c.de.time_budget_seconds = *f.time_budget;
    c.de.validate();
    c.replications = f.replications;
    c.parallelism = f.parallelism;
    if (f.seed) {
        c.seed = *f.seed;
    } else {
        std::random_device rd;
        c.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        c.seed_from_entropy = true;
    }
    c.noise = f.noise == "fresh" ? NoiseMode::fresh : NoiseMode::genome_hash;
    c.weights.floor_rule = f.pdr_floor == "literal" ? PdrFloorRule::literal : PdrFloorRule::degradation;
    c.out_dir = f.out;
    const auto& space = ParamSpace::aodv();
    if (!f.genome.empty()) c.genome = load_genome(f.genome, space);
    if (!f.genome_b.empty()) c.other_genome = load_genome(f.genome_b, space);
    return c;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-aware AODV parameter tuning by differential evolution"};
    app.require_subcommand(1);
    Flags f;

    auto* opt = app.add_subcommand("optimize", "Tune the AODV parameters on one training scenario");
    add_common(opt, f, true);
    opt->add_option("--config", f.config, "DE settings file (keyed text)")->check(CLI::ExistingFile);
    opt->add_option("--generations", f.generations, "Number of generations");
    opt->add_option("--pop-size", f.pop_size, "Population size (>= 4)");
    opt->add_option("--crossover", f.crossover, "Crossover operator")->check(CLI::IsMember({"blx", "binomial"}));
    opt->add_option("--alpha", f.alpha, "BLX alpha");
    opt->add_option("--mu", f.mu, "Mutation factor");
    opt->add_option("--pc", f.pc, "Crossover probability");
    opt->add_option("--time-budget", f.time_budget, "Wall-clock limit in seconds (0 = none)");

    auto* eval = app.add_subcommand("evaluate", "Monte-Carlo evaluation of one genome");
    add_common(eval, f, false);
    eval->add_option("--genome", f.genome, "Genome file (keyed text or CSV); RFC defaults when absent")
        ->check(CLI::ExistingFile);

    auto* val = app.add_subcommand("validate", "Compare a tuned genome with the RFC defaults");
    add_common(val, f, true);
    val->add_option("--genome", f.genome, "Tuned genome file")->required()->check(CLI::ExistingFile);

    auto* cmp = app.add_subcommand("compare", "Compare two genomes");
    add_common(cmp, f, true);
    cmp->add_option("--genome", f.genome, "Genome A")->required()->check(CLI::ExistingFile);
    cmp->add_option("--genome-b", f.genome_b, "Genome B; RFC defaults when absent")->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    Mode mode = Mode::optimize;
    if (*eval) mode = Mode::evaluate;
    if (*val) mode = Mode::validate;
    if (*cmp) mode = Mode::compare;

    CampaignConfig cfg;
    try {
        cfg = build_config(mode, f);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    if (cfg.seed_from_entropy) std::cerr << "seed " << cfg.seed << " (from entropy)\n";

    switch (mode) {
    case Mode::optimize: return cmd_optimize(cfg, std::cout, std::cerr);
    case Mode::evaluate: return cmd_evaluate(cfg, std::cout, std::cerr);
    case Mode::validate: return cmd_validate(cfg, std::cout, std::cerr);
    case Mode::compare: return cmd_compare(cfg, std::cout, std::cerr);
    }
    return 1;
}
