#pragma once

#include "aodvtune/channel.hpp"
#include "aodvtune/mobility.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aodvtune {

struct FlowSpec {
    std::uint32_t source = 0;
    std::uint32_t destination = 0;
    double start = 0.0;
    bool operator==(const FlowSpec&) const = default;
};

struct CbrSpec {
    // Number of sources; defaults to vehicle_count / 2 when unset.
    std::optional<std::size_t> sources;
    std::size_t packet_bytes = 512;
    double rate_kbps = 128.0;
    double duration = 30.0;
    // Flow starts are evenly staggered over [start_min, start_max]. When
    // start_max is unset it is sim_duration - 40.
    double start_min = 10.0;
    std::optional<double> start_max;
    // Explicit flows replace the random source/destination pairing.
    std::vector<FlowSpec> flows;

    double interval() const { return static_cast<double>(packet_bytes) * 8.0 / (rate_kbps * 1000.0); }
    // Packets per flow: floor(duration * rate / packet bits).
    std::uint64_t packets_per_flow() const;
};

enum class MobilitySource { grid, trace };

struct ScenarioSpec {
    std::string name = "scenario";
    double width = 600.0;
    double height = 400.0;
    std::size_t vehicle_count = 20;
    double sim_duration = 180.0;
    MobilitySource mobility = MobilitySource::grid;
    GridMobility grid;
    std::string trace_path;
    std::uint64_t mobility_seed = 1;
    std::uint64_t traffic_seed = 1;
    CbrSpec cbr;
    ChannelSpec channel;
    EnergySpec energy;

    std::size_t source_count() const { return cbr.sources.value_or(vehicle_count / 2); }
    double flow_start_max() const { return cbr.start_max.value_or(sim_duration - 40.0); }

    // Throws ConfigError when an invariant does not hold.
    void validate() const;
};

// Keyed text: AREA=600x400, VEHICLES=20, CBR_RATE_KBPS=512, ... Relative
// TRACE_FILE paths resolve against `base_dir`.
ScenarioSpec parse_scenario(std::string_view text, const std::string& base_dir = ".");
ScenarioSpec load_scenario(const std::string& path);
// Canonical keyed text; parse_scenario(scenario_to_keyed_text(s)) == s.
std::string scenario_to_keyed_text(const ScenarioSpec& s);

// Mobility for the scenario: generated from mobility_seed or read from the
// trace file. Throws ParseError / ConfigError on bad traces.
Trace build_trace(const ScenarioSpec& s);

// CBR flows for the scenario, either the explicit list or `source_count()`
// random distinct sources with random destinations drawn from traffic_seed.
// Throws ConfigError when a flow names a node outside [0, node_count).
std::vector<FlowSpec> build_flows(const ScenarioSpec& s, std::size_t node_count);

} // namespace aodvtune
