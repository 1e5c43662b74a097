#include "aodvtune/error.hpp"
#include "aodvtune/mobility.hpp"
#include "aodvtune/scenario.hpp"
#include "fixtures.hpp"

#include "doctest.h"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

using namespace aodvtune;

TEST_CASE("grid mobility shape") {
    GridMobility grid;
    const Trace t = generate_grid_mobility(600, 400, 20, 180, grid, 1);
    REQUIRE(t.node_count() == 20);
    for (const auto& n : t.nodes) {
        CHECK(n.size() == 181);
        CHECK(n.front().t == 0.0);
        CHECK(n.back().t == 180.0);
        for (const auto& s : n) {
            CHECK(s.pos.x >= 0);
            CHECK(s.pos.x <= 600);
            CHECK(s.pos.y >= 0);
            CHECK(s.pos.y <= 400);
        }
    }
    CHECK(t == generate_grid_mobility(600, 400, 20, 180, grid, 1));
    CHECK_FALSE(t == generate_grid_mobility(600, 400, 20, 180, grid, 2));
}

TEST_CASE("vehicles stay on roads and move at plausible speeds") {
    GridMobility grid;
    const Trace t = generate_grid_mobility(600, 400, 10, 60, grid, 4);
    for (const auto& n : t.nodes) {
        for (std::size_t k = 0; k + 1 < n.size(); ++k) {
            const double d = distance(n[k].pos, n[k + 1].pos);
            CHECK(d <= grid.speed_max + 1e-9);
            const bool on_road = std::fmod(n[k].pos.x, grid.block_m) < 1e-6 ||
                                 std::fmod(n[k].pos.y, grid.block_m) < 1e-6 ||
                                 grid.block_m - std::fmod(n[k].pos.x, grid.block_m) < 1e-6 ||
                                 grid.block_m - std::fmod(n[k].pos.y, grid.block_m) < 1e-6;
            CHECK(on_road);
        }
    }
}

TEST_CASE("trace interpolation") {
    Trace t = static_trace(100, 100, 10, {{0, 0}, {50, 50}});
    CHECK(t.position(1, 5).x == 50);
    t.nodes[0] = {{0, {0, 0}}, {10, {10, 0}}};
    CHECK(t.position(0, 2.5).x == doctest::Approx(2.5));
    CHECK(t.position(0, 20).x == 10);
}

TEST_CASE("trace round trip") {
    const Trace t = generate_grid_mobility(600, 400, 5, 30, GridMobility{}, 3);
    std::stringstream ss;
    write_trace(ss, t);
    CHECK(read_trace(ss) == t);
}

TEST_CASE("trace errors name the line") {
    auto expect_line = [](const std::string& text, std::size_t line) {
        std::istringstream in(text);
        try {
            read_trace(in);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == line);
        }
    };
    expect_line("#vanet-trace v1 100 100 1\n0 0 1 1\n0 1 oops 1\n", 3);
    expect_line("#vanet-trace v1 100 100 1\n0 0 1 1\n1 0 1\n", 3);
    expect_line("#vanet-trace v1 100 100 1\n0 0 1 1\n1 0 500 1\n", 3);
    expect_line("#vanet-trace v1 100 100 1\n1 0 1 1\n0 0 1 1\n", 3);
    std::istringstream bad_header("hello\n");
    CHECK_THROWS_AS(read_trace(bad_header), ParseError);
    // node never reaches the declared duration
    std::istringstream short_cov("#vanet-trace v1 100 100 5\n0 0 1 1\n2 0 1 1\n");
    CHECK_THROWS_AS(read_trace(short_cov), ParseError);
}

TEST_CASE("scenario keyed text") {
    const ScenarioSpec s = load_scenario(fixtures::scenario_path("G2_45_512"));
    CHECK(s.name == "G2_45_512");
    CHECK(s.width == 600);
    CHECK(s.height == 600);
    CHECK(s.vehicle_count == 45);
    CHECK(s.cbr.rate_kbps == 512);
    CHECK(s.source_count() == 22);
    CHECK(s.cbr.packets_per_flow() == 3750);
    const ScenarioSpec back = parse_scenario(scenario_to_keyed_text(s));
    CHECK(scenario_to_keyed_text(back) == scenario_to_keyed_text(s));

    CHECK_THROWS_AS(parse_scenario("VEHICLES=1\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("AREA=600\n"), std::exception);
    CHECK_THROWS_AS(parse_scenario("WHAT=1\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("CBR_DURATION=500\n"), ConfigError);
}

TEST_CASE("flows") {
    ScenarioSpec s = load_scenario(fixtures::scenario_path("G1_20_128"));
    const auto flows = build_flows(s, 20);
    REQUIRE(flows.size() == 10);
    std::set<std::uint32_t> sources;
    for (const auto& f : flows) {
        sources.insert(f.source);
        CHECK(f.source != f.destination);
        CHECK(f.destination < 20);
        CHECK(f.start >= 10);
        CHECK(f.start <= 140);
    }
    CHECK(sources.size() == 10);
    CHECK(build_flows(s, 20) == flows);

    s.cbr.flows = {{0, 25, 10}};
    CHECK_THROWS_AS(build_flows(s, 20), ConfigError);
}

TEST_CASE("trace scenarios") {
    const Trace t = generate_grid_mobility(600, 400, 4, 60, GridMobility{}, 8);
    save_trace("scenario_trace.txt", t);
    {
        std::ofstream f("scenario_trace_spec.txt");
        f << "NAME=traced\nAREA=600x400\nVEHICLES=4\nSIM_DURATION=60\nMOBILITY=trace\nTRACE_FILE=scenario_trace.txt\n"
             "CBR_DURATION=30\nCBR_START_MIN=5\nCBR_START_MAX=20\n";
    }
    const ScenarioSpec s = load_scenario("scenario_trace_spec.txt");
    CHECK(build_trace(s) == t);

    ScenarioSpec longer = s;
    longer.sim_duration = 120;
    longer.cbr.start_max = 20;
    CHECK_THROWS(build_trace(longer));
    ScenarioSpec more = s;
    more.vehicle_count = 6;
    CHECK_THROWS(build_trace(more));
}
