#include "aodvtune/error.hpp"
#include "aodvtune/fitness.hpp"

#include "doctest.h"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace aodvtune;

namespace {

SimOutcome outcome(double e, double pdr) {
    SimOutcome o;
    o.energy_joules = e;
    o.pdr = pdr;
    return o;
}

const ReferenceValues kRefs{1000.0, 0.7756, 1.0};

} // namespace

TEST_CASE("aggregate") {
    std::vector<SimOutcome> v{outcome(10, 0.1), outcome(20, 0.2), outcome(30, 0.3)};
    auto m = aggregate(v);
    CHECK(m.energy == 20.0);
    CHECK(m.pdr == doctest::Approx(0.2).epsilon(1e-15));
    std::vector<SimOutcome> one{outcome(7.5, 0.25)};
    CHECK(aggregate(one).energy == 7.5);
    CHECK(aggregate(one).pdr == 0.25);
    std::vector<SimOutcome> same(24, outcome(0.1, 0.7));
    CHECK(aggregate(same).energy == 0.1);
    CHECK(aggregate(same).pdr == 0.7);
    CHECK_THROWS_AS(aggregate(std::vector<SimOutcome>{}), std::invalid_argument);
}

TEST_CASE("aggregate does not depend on outcome order") {
    std::vector<SimOutcome> v;
    for (int i = 0; i < 24; ++i) v.push_back(outcome(1.0 / (i + 3) + 1e6 * (i % 5), 0.1 * (i % 7) + 1e-9 * i));
    const auto a = aggregate(v);
    std::reverse(v.begin(), v.end());
    std::rotate(v.begin(), v.begin() + 7, v.end());
    const auto b = aggregate(v);
    CHECK(a.energy == b.energy);
    CHECK(a.pdr == b.pdr);
}

TEST_CASE("fitness examples") {
    FitnessWeights w;
    CHECK(std::abs(fitness(1000, 0.7756, kRefs, w) - 0.92244) < 1e-12);
    CHECK(std::abs(fitness(0, 1.0, kRefs, w) - 0.0) < 1e-12);
    CHECK(std::abs(fitness(500, 0.7756, kRefs, w) - 0.47244) < 1e-12);
    CHECK_THROWS_AS(fitness(1, 1, ReferenceValues{0.0, 0.5, 1.0}, w), ConfigError);
}

TEST_CASE("penalty") {
    FitnessWeights w;
    const double floor = pdr_floor(kRefs, w);
    CHECK(std::abs(floor - 0.65926) < 1e-12);
    CHECK(penalized_fitness(800, floor, kRefs, w) == doctest::Approx(fitness(800, floor, kRefs, w)).epsilon(1e-15));
    CHECK(std::abs(penalized_fitness(1000, 0.0, kRefs, w) - 1.65926) < 1e-12);
    for (double pdr : {0.0, 0.3, 0.65}) CHECK(penalized_fitness(400, pdr, kRefs, w) > fitness(400, pdr, kRefs, w));
    // continuity from below
    CHECK(std::abs(penalized_fitness(800, floor - 1e-12, kRefs, w) - fitness(800, floor, kRefs, w)) < 1e-11);

    FitnessWeights lit;
    lit.floor_rule = PdrFloorRule::literal;
    CHECK(std::abs(pdr_floor(kRefs, lit) - 0.15 * 0.7756) < 1e-15);
}

TEST_CASE("score") {
    FitnessWeights w;
    std::vector<SimOutcome> at_ref(24, outcome(1000, 0.7756));
    auto r = score(at_ref, kRefs, w);
    CHECK(std::abs(r.fitness - 0.92244) < 1e-12);
    CHECK_FALSE(r.penalized);
    CHECK(r.outcomes.size() == 24);

    const double floor = pdr_floor(kRefs, w);
    std::vector<SimOutcome> below(4, outcome(900, std::nextafter(floor, 0.0)));
    auto p = score(below, kRefs, w);
    CHECK(p.penalized);
    std::vector<SimOutcome> at(4, outcome(900, floor));
    CHECK_FALSE(score(at, kRefs, w).penalized);
}

TEST_CASE("report json") {
    std::vector<SimOutcome> v{outcome(10, 0.5), outcome(12, 0.75)};
    auto r = score(v, ReferenceValues{11, 0.6, 1}, FitnessWeights{});
    r.seeds = {5, 6};
    auto j = nlohmann::json::parse(report_to_json(r));
    CHECK(j["mean_energy_j"].get<double>() == 11.0);
    CHECK(j["per_replication"].size() == 2);
}
