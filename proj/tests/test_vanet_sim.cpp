#include "aodvtune/channel.hpp"
#include "aodvtune/error.hpp"
#include "aodvtune/vanet_sim.hpp"
#include "fixtures.hpp"

#include "doctest.h"

#include <cmath>
#include <stdexcept>

using namespace aodvtune;

namespace {

AodvConfig rfc() { return AodvConfig::from_genome(ParamSpace::aodv().rfc_default()); }

} // namespace

TEST_CASE("ring ttl sequence") {
    CHECK(ring_ttl_sequence(rfc()) == std::vector<int>{1, 3, 5, 7, 35, 35, 35});
    const auto tuned = AodvConfig::from_genome(fixtures::tuned());
    std::vector<int> expect{12, 31, 50};
    expect.insert(expect.end(), 10, 66);
    CHECK(ring_ttl_sequence(tuned) == expect);
    auto degenerate = rfc();
    degenerate.ttl_start = 9;
    CHECK(ring_ttl_sequence(degenerate) == std::vector<int>{35, 35, 35});
}

TEST_CASE("ring timeout") {
    CHECK(std::abs(ring_timeout(1, rfc()) - 0.24) < 1e-12);
    CHECK(std::abs(ring_timeout(35, rfc()) - 2.96) < 1e-12);
    CHECK(ring_timeout(12, AodvConfig::from_genome(fixtures::tuned())) == 42.466);
}

TEST_CASE("config from genome rejects invalid genomes") {
    Genome g = ParamSpace::aodv().rfc_default();
    g[kTtlThreshold] = 61;
    CHECK_THROWS_AS(AodvConfig::from_genome(g), ConfigError);
    const auto tuned = AodvConfig::from_genome(fixtures::tuned());
    CHECK(tuned.hello_interval == 11.994);
    CHECK(tuned.net_diameter == 66);
    CHECK(tuned.ttl_threshold == 54);
}

TEST_CASE("single hop lossless link delivers every packet") {
    auto sc = fixtures::static_line({{100, 50}, {150, 50}}, 0, 1);
    const auto o = simulate(rfc(), sc->inputs(), 1);
    CHECK(o.data_sent == 937);
    CHECK(o.data_delivered == 937);
    CHECK(o.pdr == 1.0);
    CHECK(o.route_discoveries_failed == 0);
    CHECK(o.rrep_count >= 1);
}

TEST_CASE("disconnected pair never delivers") {
    auto sc = fixtures::static_line({{10, 50}, {900, 50}}, 0, 1);
    const auto o = simulate(rfc(), sc->inputs(), 1);
    CHECK(o.data_delivered == 0);
    CHECK(o.pdr == 0.0);
    CHECK(o.route_discoveries_failed >= 1);
    CHECK(o.energy_joules > 0);
    CHECK(o.rreq_count > 0);
}

TEST_CASE("three node chain routes through the middle") {
    auto sc = fixtures::static_line({{50, 50}, {250, 50}, {450, 50}}, 0, 2);
    const auto o = simulate(rfc(), sc->inputs(), 1);
    CHECK(o.pdr == 1.0);
    CHECK(o.rrep_count >= 1);
    CHECK(o.data_sent == 937);
}

TEST_CASE("energy ledger matches a replay of the frame log") {
    auto sc = PreparedScenario::make(load_scenario(fixtures::scenario_path("G1_20_512")));
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        std::vector<FrameRecord> frames;
        const auto o = simulate(rfc(), sc->inputs(), seed, &frames);
        REQUIRE(!frames.empty());
        const auto& e = sc->spec.energy;
        double replay = 0;
        std::uint64_t hellos = 0;
        for (const auto& f : frames) {
            const double air = f.bytes * 8.0 / sc->spec.channel.bandwidth_bps;
            replay += air * e.tx_power_w + air * e.rx_power_w * f.receivers;
            hellos += f.kind == FrameKind::hello;
        }
        CHECK(std::abs(replay - o.energy_joules) / o.energy_joules < 1e-9);
        CHECK(hellos == o.hello_count);
    }
}

TEST_CASE("simulation is a function of its seed") {
    auto sc = PreparedScenario::make(load_scenario(fixtures::scenario_path("G1_20_128")));
    const auto a = simulate(rfc(), sc->inputs(), 5);
    const auto b = simulate(rfc(), sc->inputs(), 5);
    const auto c = simulate(rfc(), sc->inputs(), 6);
    CHECK(a == b);
    CHECK_FALSE(a == c);
    CHECK(a.hello_per_node.size() == 20);
    CHECK(a.data_delivered <= a.data_sent);
}

TEST_CASE("longer hello interval sends fewer hellos and spends less energy") {
    auto sc = PreparedScenario::make(load_scenario(fixtures::scenario_path("G1_20_128")));
    const auto tuned = AodvConfig::from_genome(fixtures::tuned());
    const auto a = simulate(rfc(), sc->inputs(), 9);
    const auto b = simulate(tuned, sc->inputs(), 9);
    CHECK(b.hello_count < a.hello_count);
    CHECK(b.energy_joules < a.energy_joules);
}

TEST_CASE("outcome csv") {
    SimOutcome o;
    o.energy_joules = 1.5;
    o.data_sent = 4;
    o.data_delivered = 2;
    o.pdr = 0.5;
    CHECK(sim_outcome_to_csv(o, 3, 99).rfind("3,99,1.5,4,2,0.5,", 0) == 0);
    CHECK(sim_outcome_csv_header().rfind("replication,seed,energy_j", 0) == 0);
}
