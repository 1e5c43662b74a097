#include "aodvtune/campaign.hpp"
#include "aodvtune/text_format.hpp"
#include "fixtures.hpp"

#include "doctest.h"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

using namespace aodvtune;
namespace fs = std::filesystem;

namespace {

CampaignConfig small(Mode mode, const std::string& out, std::vector<std::string> scenarios = {"G1_20_128"}) {
    CampaignConfig c;
    c.mode = mode;
    for (const auto& s : scenarios) c.scenarios.push_back(load_scenario(fixtures::scenario_path(s)));
    c.de.generations = 2;
    c.replications = 3;
    c.parallelism = 2;
    c.seed = 11;
    c.out_dir = out;
    fs::remove_all(out);
    return c;
}

std::string slurp(const fs::path& p) { return read_file(p.string()); }

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST_CASE("optimize writes every artifact and is reproducible") {
    std::ostringstream out, err;
    auto c = small(Mode::optimize, "campaign_opt_a");
    REQUIRE(cmd_optimize(c, out, err) == 0);
    for (const char* f : {"baseline_report.json", "best_genome.txt", "best_genome.csv", "generations.csv",
                          "best_report.json", "best_replications.csv", "manifest.json"})
        CHECK(fs::exists(fs::path("campaign_opt_a") / f));
    CHECK(lines(slurp("campaign_opt_a/generations.csv")) == 4);

    auto manifest = nlohmann::json::parse(slurp("campaign_opt_a/manifest.json"));
    CHECK(manifest["seed"] == 11);
    CHECK(manifest["config_hash"] == config_hash(c));
    CHECK(manifest["artifacts"].size() == 6);
    for (const auto& a : manifest["artifacts"])
        CHECK(a["fnv1a"] == hex64(fnv1a(slurp(fs::path("campaign_opt_a") / a["file"].get<std::string>()))));
    CHECK(manifest["best_fitness"].get<double>() <= manifest["rfc_fitness"].get<double>() + 1.0);

    auto d = small(Mode::optimize, "campaign_opt_b");
    d.parallelism = 1;
    REQUIRE(cmd_optimize(d, out, err) == 0);
    for (const auto& e : fs::directory_iterator("campaign_opt_a"))
        CHECK(slurp(e.path()) == slurp(fs::path("campaign_opt_b") / e.path().filename()));

    const Genome best = load_genome("campaign_opt_a/best_genome.txt", ParamSpace::aodv());
    CHECK(load_genome("campaign_opt_a/best_genome.csv", ParamSpace::aodv()) == best);
}

TEST_CASE("optimize with zero generations") {
    std::ostringstream out, err;
    auto c = small(Mode::optimize, "campaign_opt_zero");
    c.de.generations = 0;
    REQUIRE(cmd_optimize(c, out, err) == 0);
    CHECK(lines(slurp("campaign_opt_zero/generations.csv")) == 2);
}

TEST_CASE("optimize needs one scenario") {
    std::ostringstream out, err;
    auto c = small(Mode::optimize, "campaign_opt_two", {"G1_20_128", "G1_20_256"});
    CHECK(cmd_optimize(c, out, err) != 0);
    CHECK(err.str().find("error:") != std::string::npos);
}

TEST_CASE("config hash ignores parallelism only") {
    auto a = small(Mode::optimize, "campaign_hash");
    auto b = a;
    b.parallelism = 7;
    CHECK(config_hash(a) == config_hash(b));
    b.seed = 12;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("evaluate") {
    std::ostringstream out, err;
    auto c = small(Mode::evaluate, "campaign_eval");
    c.replications = 1;
    REQUIRE(cmd_evaluate(c, out, err) == 0);
    auto j = nlohmann::json::parse(slurp("campaign_eval/evaluation_G1_20_128.json"));
    CHECK(j["replications"] == 1);
    CHECK(j["penalized"] == false);

    Genome bad = ParamSpace::aodv().rfc_default();
    bad[kTtlThreshold] = 61;
    c.genome = bad;
    std::ostringstream err2;
    CHECK(cmd_evaluate(c, out, err2) != 0);
    CHECK(err2.str().find("gene 10") != std::string::npos);
}

TEST_CASE("validate rfc against itself") {
    std::ostringstream out, err;
    auto c = small(Mode::validate, "campaign_self");
    c.replications = 6;
    c.genome = ParamSpace::aodv().rfc_default();
    REQUIRE(cmd_validate(c, out, err) == 0);
    const std::string csv = slurp("campaign_self/validation.csv");
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        auto f = split(line, ',');
        CHECK(parse_double(f[4]) == 0.0);
        CHECK(parse_double(f[8]) == doctest::Approx(1.0));
        CHECK(f[9] == "false");
    }
    CHECK(rows == 3);
}

TEST_CASE("validate the tuned genome over several scenarios") {
    std::ostringstream out, err;
    auto c = small(Mode::validate, "campaign_val", {"G2_30_256", "G2_30_512", "G2_30_1024"});
    c.replications = 6;
    c.genome = fixtures::tuned();
    REQUIRE(cmd_validate(c, out, err) == 0);
    const std::string summary = slurp("campaign_val/validation_summary.csv");
    CHECK(lines(summary) == 4);
    std::istringstream in(summary);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) CHECK(parse_double(split(line, ',')[3]) > 0);
}

TEST_CASE("compare two genomes") {
    std::ostringstream out, err;
    auto c = small(Mode::compare, "campaign_cmp");
    c.replications = 5;
    c.genome = fixtures::tuned();
    c.other_genome = ParamSpace::aodv().rfc_default();
    REQUIRE(cmd_compare(c, out, err) == 0);
    CHECK(fs::exists("campaign_cmp/validation.csv"));
    c.genome.reset();
    CHECK(cmd_compare(c, out, err) != 0);
}

TEST_CASE("comparison rows") {
    FitnessReport a, b;
    for (int i = 0; i < 6; ++i) {
        SimOutcome o;
        o.energy_joules = 10 + i;
        o.pdr = 0.5;
        a.outcomes.push_back(o);
        o.energy_joules = 20 + i;
        b.outcomes.push_back(o);
    }
    a.mean_energy = 12.5;
    b.mean_energy = 22.5;
    a.mean_pdr = b.mean_pdr = 0.5;
    const auto rows = compare_reports("s", a, b, ReferenceValues{22.5, 0.5, 1}, FitnessWeights{});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].metric == "energy");
    CHECK(rows[0].delta_pct == doctest::Approx(100.0 * 10 / 22.5));
    CHECK(rows[0].reject_at_95);
    CHECK(std::isnan(rows[1].ks_p_a));
    CHECK(rows[1].kw_p == 1.0);
    CHECK(comparison_to_csv(rows[1]).find(",nan,nan,") != std::string::npos);
}
