#include "aodvtune/error.hpp"
#include "aodvtune/param_space.hpp"
#include "aodvtune/rng.hpp"
#include "fixtures.hpp"

#include "doctest.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

using namespace aodvtune;

TEST_CASE("rfc defaults") {
    const auto& sp = ParamSpace::aodv();
    const Genome g = sp.rfc_default();
    const std::array<double, kGeneCount> expect{1.0, 3.0, 6.0, 0.040, 10.0, 35, 2, 2, 1, 2, 7};
    CHECK(g.values == expect);
    CHECK(g[kNetDiameter] == 35);
    CHECK(sp.repair(g) == g);
    CHECK(sp.is_valid(g));
}

TEST_CASE("repair clamps and rounds") {
    const auto& sp = ParamSpace::aodv();
    CHECK(sp.repair_gene(kHelloInterval, 25.3) == 20.0);
    CHECK(sp.repair_gene(kNetDiameter, 66.4) == 66);
    CHECK(sp.repair_gene(kAllowedHelloLoss, -3.2) == 0);
    CHECK(sp.repair_gene(kNetDiameter, 66.5) == 67);
    CHECK(sp.repair_gene(kHelloInterval, 0.2) == 1.0);
    CHECK(sp.repair_gene(kHelloInterval, std::numeric_limits<double>::quiet_NaN()) == 1.0);
}

TEST_CASE("validate") {
    const auto& sp = ParamSpace::aodv();
    CHECK(sp.is_valid(fixtures::tuned()));
    Genome g = sp.rfc_default();
    g[kTtlThreshold] = 61;
    auto v = sp.validate(g);
    REQUIRE(v.size() == 1);
    CHECK(v[0].gene == 10);
    g = sp.rfc_default();
    g[kNetDiameter] = 35.5;
    CHECK_FALSE(sp.is_valid(g));
}

TEST_CASE("wrong arity is a structural error") {
    std::vector<double> ten(10, 1.0);
    CHECK_THROWS_AS(Genome::from_values(ten), ConfigError);
    CHECK_THROWS_AS(genome_from_csv("1,2,3"), std::exception);
}

TEST_CASE("repair is idempotent and its fixed points are exactly the valid genomes") {
    const auto& sp = ParamSpace::aodv();
    Stream rng(42);
    for (int t = 0; t < 2000; ++t) {
        Genome g;
        for (std::size_t i = 0; i < kGeneCount; ++i) {
            const auto& s = sp.gene(i);
            g[i] = rng.uniform(s.lower - s.range(), s.upper + s.range());
        }
        const Genome r = sp.repair(g);
        CHECK(sp.repair(r) == r);
        CHECK(sp.is_valid(r));
        CHECK(sp.is_valid(g) == (sp.repair(g) == g));
    }
}

TEST_CASE("gene lookup") {
    const auto& sp = ParamSpace::aodv();
    CHECK(sp.index_of("HELLO_INTERVAL") == 0);
    CHECK(sp.index_of("REQ_RETRIES") == kRreqRetries);
    CHECK(sp.index_of("RREQ_RETRIES") == kRreqRetries);
    CHECK_THROWS_AS(sp.index_of("NOPE"), ConfigError);
}

TEST_CASE("genome serialization round trips") {
    const auto& sp = ParamSpace::aodv();
    const Genome g = fixtures::tuned();
    CHECK(genome_from_csv(genome_to_csv(g)) == g);
    CHECK(genome_from_keyed_text(genome_to_keyed_text(g, sp), sp) == g);

    Genome partial = sp.rfc_default();
    partial[kHelloInterval] = 4.5;
    CHECK(genome_from_keyed_text("# tuned\nHELLO_INTERVAL=4.5\n", sp) == partial);
    CHECK_THROWS_AS(genome_from_keyed_text("BOGUS=1\n", sp), ParseError);

    const std::string path = "param_space_roundtrip.csv";
    {
        std::ofstream f(path);
        f << genome_csv_header(sp) << '\n' << genome_to_csv(g) << '\n';
    }
    CHECK(load_genome(path, sp) == g);
}
