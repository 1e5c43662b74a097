#include "aodvtune/channel.hpp"

#include "aodvtune/error.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aodvtune {

void ChannelSpec::validate() const {
    if (!(bandwidth_bps > 0)) throw ConfigError("channel bandwidth must be positive");
    if (!(nominal_range_m > 0)) throw ConfigError("nominal range must be positive");
    if (!(nakagami_m >= 0.5)) throw ConfigError("Nakagami m must be >= 0.5");
    if (!(path_loss_exponent > 0)) throw ConfigError("path loss exponent must be positive");
}

void EnergySpec::validate() const {
    if (!(tx_power_w > 0) || !(rx_power_w > 0))
        throw ConfigError("transmit and receive power draws must be positive");
}

double reception_probability(double distance_m, const ChannelSpec& ch) {
    if (!ch.fading_enabled) return distance_m <= ch.nominal_range_m ? 1.0 : 0.0;
    if (distance_m <= 0.0) return 1.0;

    const double x = std::pow(distance_m / ch.nominal_range_m, ch.path_loss_exponent);
    const double m = ch.nakagami_m;
    const double mx = m * x;

    if (m == std::floor(m)) {
        const auto terms = static_cast<int>(m);
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k < terms; ++k) {
            term *= mx / k;
            sum += term;
        }
        return std::clamp(std::exp(-mx) * sum, 0.0, 1.0);
    }
    return boost::math::gamma_q(m, mx);
}

double packet_airtime(std::size_t bytes, double bandwidth_bps) {
    if (bytes == 0) throw std::invalid_argument("packet_airtime: frame must have at least one byte");
    if (!(bandwidth_bps > 0)) throw std::invalid_argument("packet_airtime: bandwidth must be positive");
    return static_cast<double>(bytes) * 8.0 / bandwidth_bps;
}

} // namespace aodvtune
