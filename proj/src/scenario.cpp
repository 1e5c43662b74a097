#include "aodvtune/scenario.hpp"

#include "aodvtune/error.hpp"
#include "aodvtune/rng.hpp"
#include "aodvtune/text_format.hpp"

#include <cmath>
#include <filesystem>
#include <numeric>

namespace aodvtune {

std::uint64_t CbrSpec::packets_per_flow() const {
    const double bits = static_cast<double>(packet_bytes) * 8.0;
    return static_cast<std::uint64_t>(std::floor(duration * rate_kbps * 1000.0 / bits));
}

void ScenarioSpec::validate() const {
    if (!(width > 0) || !(height > 0)) throw ConfigError("scenario area must be positive");
    if (vehicle_count < 2) throw ConfigError("scenario needs at least 2 vehicles");
    if (!(sim_duration > 0)) throw ConfigError("simulation duration must be positive");
    if (cbr.packet_bytes == 0) throw ConfigError("CBR packet size must be positive");
    if (!(cbr.rate_kbps > 0)) throw ConfigError("CBR rate must be positive");
    if (!(cbr.duration > 0) || cbr.duration > sim_duration)
        throw ConfigError("CBR duration must be in (0, sim_duration]");
    if (cbr.start_min < 0 || flow_start_max() < cbr.start_min || flow_start_max() > sim_duration)
        throw ConfigError("CBR start window must satisfy 0 <= start_min <= start_max <= sim_duration");
    const std::size_t sources = cbr.flows.empty() ? source_count() : cbr.flows.size();
    if (sources == 0) throw ConfigError("scenario needs at least one CBR source");
    if (sources > vehicle_count / 2)
        throw ConfigError("CBR sources must not exceed half the vehicles");
    for (const auto& f : cbr.flows) {
        if (f.source == f.destination) throw ConfigError("flow source equals destination");
        if (f.start < 0 || f.start > sim_duration) throw ConfigError("flow start outside the run");
    }
    if (mobility == MobilitySource::trace && trace_path.empty())
        throw ConfigError("trace mobility needs TRACE_FILE");
    channel.validate();
    energy.validate();
}

namespace {

bool parse_bool(std::string_view v) {
    if (v == "1" || v == "on" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "off" || v == "false" || v == "no") return false;
    throw ParseError("expected on/off, got '" + std::string(v) + "'");
}

} // namespace

ScenarioSpec parse_scenario(std::string_view text, const std::string& base_dir) {
    ScenarioSpec s;
    for (const auto& e : parse_keyed_text(text)) {
        const std::string_view k = e.key;
        const std::string_view v = e.value;
        try {
            if (k == "NAME") {
                s.name = e.value;
            } else if (k == "AREA") {
                auto parts = split(v, 'x');
                if (parts.size() != 2) throw ParseError("AREA must be WIDTHxHEIGHT");
                s.width = parse_double(parts[0]);
                s.height = parse_double(parts[1]);
            } else if (k == "VEHICLES") {
                s.vehicle_count = parse_u64(v);
            } else if (k == "SIM_DURATION") {
                s.sim_duration = parse_double(v);
            } else if (k == "MOBILITY") {
                if (v == "grid") s.mobility = MobilitySource::grid;
                else if (v == "trace") s.mobility = MobilitySource::trace;
                else throw ParseError("MOBILITY must be grid or trace");
            } else if (k == "TRACE_FILE") {
                std::filesystem::path p(e.value);
                if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
                s.trace_path = p.lexically_normal().string();
                s.mobility = MobilitySource::trace;
            } else if (k == "BLOCK_SIZE") {
                s.grid.block_m = parse_double(v);
            } else if (k == "SPEED_MIN") {
                s.grid.speed_min = parse_double(v);
            } else if (k == "SPEED_MAX") {
                s.grid.speed_max = parse_double(v);
            } else if (k == "MOBILITY_SEED") {
                s.mobility_seed = parse_u64(v);
            } else if (k == "TRAFFIC_SEED") {
                s.traffic_seed = parse_u64(v);
            } else if (k == "CBR_SOURCES") {
                s.cbr.sources = parse_u64(v);
            } else if (k == "CBR_PACKET_SIZE") {
                s.cbr.packet_bytes = parse_u64(v);
            } else if (k == "CBR_RATE_KBPS") {
                s.cbr.rate_kbps = parse_double(v);
            } else if (k == "CBR_DURATION") {
                s.cbr.duration = parse_double(v);
            } else if (k == "CBR_START_MIN") {
                s.cbr.start_min = parse_double(v);
            } else if (k == "CBR_START_MAX") {
                s.cbr.start_max = parse_double(v);
            } else if (k == "FLOW") {
                auto parts = split(v, ',');
                if (parts.size() != 3) throw ParseError("FLOW must be source,destination,start");
                s.cbr.flows.push_back({static_cast<std::uint32_t>(parse_u64(parts[0])),
                                       static_cast<std::uint32_t>(parse_u64(parts[1])),
                                       parse_double(parts[2])});
            } else if (k == "BANDWIDTH_BPS") {
                s.channel.bandwidth_bps = parse_double(v);
            } else if (k == "RANGE_M") {
                s.channel.nominal_range_m = parse_double(v);
            } else if (k == "NAKAGAMI_M") {
                s.channel.nakagami_m = parse_double(v);
            } else if (k == "PATH_LOSS_EXPONENT") {
                s.channel.path_loss_exponent = parse_double(v);
            } else if (k == "FADING") {
                s.channel.fading_enabled = parse_bool(v);
            } else if (k == "TX_POWER_W") {
                s.energy.tx_power_w = parse_double(v);
            } else if (k == "RX_POWER_W") {
                s.energy.rx_power_w = parse_double(v);
            } else {
                throw ParseError("unknown scenario key '" + e.key + "'");
            }
        } catch (const ParseError& err) {
            throw ParseError(err.what(), e.line);
        }
    }
    s.validate();
    return s;
}

ScenarioSpec load_scenario(const std::string& path) {
    const auto dir = std::filesystem::path(path).parent_path().string();
    return parse_scenario(read_file(path), dir.empty() ? "." : dir);
}

std::string scenario_to_keyed_text(const ScenarioSpec& s) {
    std::string out;
    auto put = [&](std::string_view key, const std::string& value) {
        out += key;
        out += '=';
        out += value;
        out += '\n';
    };
    put("NAME", s.name);
    put("AREA", format_double(s.width) + "x" + format_double(s.height));
    put("VEHICLES", std::to_string(s.vehicle_count));
    put("SIM_DURATION", format_double(s.sim_duration));
    if (s.mobility == MobilitySource::grid) {
        put("MOBILITY", "grid");
        put("BLOCK_SIZE", format_double(s.grid.block_m));
        put("SPEED_MIN", format_double(s.grid.speed_min));
        put("SPEED_MAX", format_double(s.grid.speed_max));
        put("MOBILITY_SEED", std::to_string(s.mobility_seed));
    } else {
        put("MOBILITY", "trace");
        put("TRACE_FILE", s.trace_path);
    }
    put("TRAFFIC_SEED", std::to_string(s.traffic_seed));
    if (s.cbr.sources) put("CBR_SOURCES", std::to_string(*s.cbr.sources));
    put("CBR_PACKET_SIZE", std::to_string(s.cbr.packet_bytes));
    put("CBR_RATE_KBPS", format_double(s.cbr.rate_kbps));
    put("CBR_DURATION", format_double(s.cbr.duration));
    put("CBR_START_MIN", format_double(s.cbr.start_min));
    if (s.cbr.start_max) put("CBR_START_MAX", format_double(*s.cbr.start_max));
    for (const auto& f : s.cbr.flows)
        put("FLOW", std::to_string(f.source) + "," + std::to_string(f.destination) + "," +
                        format_double(f.start));
    put("BANDWIDTH_BPS", format_double(s.channel.bandwidth_bps));
    put("RANGE_M", format_double(s.channel.nominal_range_m));
    put("NAKAGAMI_M", format_double(s.channel.nakagami_m));
    put("PATH_LOSS_EXPONENT", format_double(s.channel.path_loss_exponent));
    put("FADING", s.channel.fading_enabled ? "on" : "off");
    put("TX_POWER_W", format_double(s.energy.tx_power_w));
    put("RX_POWER_W", format_double(s.energy.rx_power_w));
    return out;
}

Trace build_trace(const ScenarioSpec& s) {
    if (s.mobility == MobilitySource::grid)
        return generate_grid_mobility(s.width, s.height, s.vehicle_count, s.sim_duration, s.grid,
                                      s.mobility_seed);
    Trace trace = load_trace(s.trace_path);
    if (trace.duration < s.sim_duration)
        throw ConfigError("trace '" + s.trace_path + "' covers " + format_double(trace.duration) +
                          " s, shorter than the " + format_double(s.sim_duration) + " s run");
    if (trace.node_count() != s.vehicle_count)
        throw ConfigError("trace has " + std::to_string(trace.node_count()) + " nodes but VEHICLES=" +
                          std::to_string(s.vehicle_count));
    return trace;
}

std::vector<FlowSpec> build_flows(const ScenarioSpec& s, std::size_t node_count) {
    if (!s.cbr.flows.empty()) {
        for (const auto& f : s.cbr.flows)
            if (f.source >= node_count || f.destination >= node_count)
                throw ConfigError("flow " + std::to_string(f.source) + "->" +
                                  std::to_string(f.destination) + " names an unknown node id (nodes: " +
                                  std::to_string(node_count) + ")");
        return s.cbr.flows;
    }

    const std::size_t k = s.source_count();
    if (k == 0 || k > node_count / 2) throw ConfigError("invalid CBR source count");

    Stream rng = Stream::named(s.traffic_seed, StreamPurpose::traffic);
    std::vector<std::uint32_t> ids(node_count);
    std::iota(ids.begin(), ids.end(), 0u);
    for (std::size_t i = node_count - 1; i > 0; --i) std::swap(ids[i], ids[rng.index(i + 1)]);

    const double lo = s.cbr.start_min;
    const double hi = s.flow_start_max();
    std::vector<FlowSpec> flows;
    for (std::size_t j = 0; j < k; ++j) {
        const std::uint32_t src = ids[j];
        auto dst = static_cast<std::uint32_t>(rng.index(node_count - 1));
        if (dst >= src) ++dst;
        const double start = k == 1 ? lo : lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(k - 1);
        flows.push_back({src, dst, start});
    }
    return flows;
}

} // namespace aodvtune
