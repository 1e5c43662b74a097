#pragma once

#include "aodvtune/mc_eval.hpp"
#include "aodvtune/mobility.hpp"
#include "aodvtune/param_space.hpp"
#include "aodvtune/scenario.hpp"

#include <memory>
#include <string>
#include <vector>

namespace fixtures {

inline aodvtune::Genome tuned() {
    const std::vector<double> v{11.994, 12.439, 15.965, 8.106, 42.466, 66, 6, 9, 12, 19, 54};
    return aodvtune::Genome::from_values(v);
}

// Stationary nodes with one CBR flow src -> dst starting at `start`.
inline std::shared_ptr<const aodvtune::PreparedScenario>
static_line(const std::vector<aodvtune::Position>& nodes, std::uint32_t src, std::uint32_t dst,
            bool fading = false, double start = 10.0) {
    aodvtune::ScenarioSpec s;
    s.name = "static";
    s.width = 1000;
    s.height = 100;
    s.vehicle_count = nodes.size();
    s.sim_duration = 60;
    s.cbr.rate_kbps = 128;
    s.cbr.packet_bytes = 512;
    s.cbr.duration = 30;
    s.cbr.flows = {{src, dst, start}};
    s.channel.fading_enabled = fading;
    return aodvtune::PreparedScenario::make(s, aodvtune::static_trace(s.width, s.height, s.sim_duration, nodes));
}

inline std::string scenario_path(const std::string& name) {
    return std::string(AODVTUNE_SOURCE_DIR) + "/scenarios/" + name + ".txt";
}

} // namespace fixtures
