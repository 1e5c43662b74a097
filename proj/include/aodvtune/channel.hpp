#pragma once

#include <cstddef>

namespace aodvtune {

struct ChannelSpec {
    double bandwidth_bps = 6e6;
    double nominal_range_m = 250.0;
    double nakagami_m = 3.0;
    double path_loss_exponent = 2.0;
    bool fading_enabled = true;

    void validate() const;
};

struct EnergySpec {
    double tx_power_w = 1.8;
    double rx_power_w = 1.4;

    void validate() const;
};

// Probability that a frame sent over `distance_m` is received.
//
// Without fading this is the unit disk of radius nominal_range. With fading,
// the received power is Nakagami-m (gamma distributed with shape m) around a
// mean that falls off as distance^path_loss_exponent; reception succeeds when
// the power clears the level the mean reaches at nominal_range, i.e.
//
//   P = Q(m, m * x),  x = (distance / nominal_range)^path_loss_exponent
//
// where Q is the regularized upper incomplete gamma function. For integer m
// this is the Erlang survival sum exp(-m x) * sum_{k<m} (m x)^k / k!.
double reception_probability(double distance_m, const ChannelSpec& ch);

// Seconds on air for a frame of `bytes` at `bandwidth_bps`. Throws
// std::invalid_argument for zero bytes or non-positive bandwidth.
double packet_airtime(std::size_t bytes, double bandwidth_bps);

} // namespace aodvtune
