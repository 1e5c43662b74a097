#include "aodvtune/channel.hpp"
#include "aodvtune/rng.hpp"

#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace aodvtune;

namespace {

// Independent oracle: Erlang survival for integer shape.
double erlang_survival(int m, double y) {
    double term = 1, sum = 0;
    for (int k = 0; k < m; ++k) {
        if (k > 0) term *= y / k;
        sum += term;
    }
    return std::exp(-y) * sum;
}

} // namespace

TEST_CASE("reception closed forms") {
    ChannelSpec ch;
    ch.nakagami_m = 1;
    CHECK(std::abs(reception_probability(250, ch) - std::exp(-1.0)) < 1e-9);
    ch.nakagami_m = 3;
    CHECK(std::abs(reception_probability(250, ch) - 8.5 * std::exp(-3.0)) < 1e-9);
    CHECK(reception_probability(0, ch) == 1.0);
    for (double d : {10.0, 100.0, 300.0, 500.0}) {
        const double x = std::pow(d / 250.0, 2.0);
        CHECK(std::abs(reception_probability(d, ch) - erlang_survival(3, 3 * x)) < 1e-12);
    }
}

TEST_CASE("non-integer shape sits between its integer neighbours") {
    ChannelSpec a, b, c;
    a.nakagami_m = 2;
    b.nakagami_m = 2.5;
    c.nakagami_m = 3;
    for (double d : {100.0, 200.0}) {
        const double lo = std::min(reception_probability(d, a), reception_probability(d, c));
        const double hi = std::max(reception_probability(d, a), reception_probability(d, c));
        CHECK(reception_probability(d, b) >= lo);
        CHECK(reception_probability(d, b) <= hi);
    }
}

TEST_CASE("reception is monotone in distance") {
    ChannelSpec ch;
    double prev = 1.0;
    for (double d = 0; d < 800; d += 5) {
        const double p = reception_probability(d, ch);
        CHECK(p <= prev);
        CHECK(p >= 0);
        prev = p;
    }
}

TEST_CASE("unit disk without fading") {
    ChannelSpec ch;
    ch.fading_enabled = false;
    CHECK(reception_probability(249.9, ch) == 1.0);
    CHECK(reception_probability(250.0, ch) == 1.0);
    CHECK(reception_probability(250.1, ch) == 0.0);
}

TEST_CASE("monte carlo agrees with the closed form") {
    // Gamma-distributed power with shape m and mean 1 against threshold x.
    for (double m : {1.0, 3.0}) {
        ChannelSpec ch;
        ch.nakagami_m = m;
        const double d = 250.0;
        const double p = reception_probability(d, ch);
        std::mt19937_64 eng(99);
        std::gamma_distribution<double> power(m, 1.0 / m);
        const int n = 100000;
        int hits = 0;
        for (int i = 0; i < n; ++i) hits += power(eng) > 1.0;
        const double sigma = std::sqrt(p * (1 - p) / n);
        CHECK(std::abs(hits / double(n) - p) < 3 * sigma);
    }
}

TEST_CASE("airtime") {
    CHECK(std::abs(packet_airtime(512, 6e6) - 682.666666666666e-6) < 1e-15);
    CHECK_THROWS_AS(packet_airtime(0, 6e6), std::invalid_argument);
    CHECK_THROWS_AS(packet_airtime(10, 0), std::invalid_argument);
}

TEST_CASE("channel validation") {
    ChannelSpec ch;
    ch.nakagami_m = 0;
    CHECK_THROWS(ch.validate());
    EnergySpec e;
    e.tx_power_w = -1;
    CHECK_THROWS(e.validate());
}
