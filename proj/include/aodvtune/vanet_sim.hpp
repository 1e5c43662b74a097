#pragma once

#include "aodvtune/mobility.hpp"
#include "aodvtune/param_space.hpp"
#include "aodvtune/scenario.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace aodvtune {

// The 11 tuned AODV parameters in protocol units.
struct AodvConfig {
    double hello_interval = 1.0;
    double active_route_timeout = 3.0;
    double my_route_timeout = 6.0;
    double node_traversal_time = 0.040;
    double max_rreq_timeout = 10.0;
    int net_diameter = 35;
    int allowed_hello_loss = 2;
    int rreq_retries = 2;
    int ttl_start = 1;
    int ttl_increment = 2;
    int ttl_threshold = 7;

    // Throws ConfigError when the genome is not valid in the AODV space.
    static AodvConfig from_genome(const Genome& g);
};

// Expanding-ring TTLs: TTL_START, +TTL_INCREMENT while <= TTL_THRESHOLD,
// then NET_DIAMETER repeated 1 + RREQ_RETRIES times.
std::vector<int> ring_ttl_sequence(const AodvConfig& cfg);

// Wait for one ring: min(2 * NODE_TRAVERSAL_TIME * (ttl + 2), MAX_RREQ_TIMEOUT).
double ring_timeout(int ttl, const AodvConfig& cfg);

struct SimOutcome {
    double energy_joules = 0.0;
    std::uint64_t data_sent = 0;
    std::uint64_t data_delivered = 0;
    double pdr = 0.0;
    std::uint64_t hello_count = 0;
    std::uint64_t rreq_count = 0;
    std::uint64_t rrep_count = 0;
    std::uint64_t rerr_count = 0;
    std::uint64_t route_discoveries_failed = 0;
    std::vector<std::uint32_t> hello_per_node;

    bool operator==(const SimOutcome&) const = default;
};

std::string sim_outcome_csv_header();
std::string sim_outcome_to_csv(const SimOutcome& o, std::size_t replication, std::uint64_t seed);

enum class FrameKind : std::uint8_t { data, rreq, rrep, rerr, hello };

// One transmission as seen by the energy ledger.
struct FrameRecord {
    double time;
    std::uint32_t sender;
    FrameKind kind;
    std::size_t bytes;
    std::uint32_t receivers;
};

// Frame sizes: payload plus IP/UDP/MAC overhead.
inline constexpr std::size_t kFrameOverheadBytes = 52;
inline constexpr std::size_t kRreqBytes = 24;
inline constexpr std::size_t kRrepBytes = 20;
inline constexpr std::size_t kRerrBytes = 12;
inline constexpr std::size_t kHelloBytes = 20;
// Packets held per pending discovery; later arrivals are dropped.
inline constexpr std::size_t kDiscoveryBufferPackets = 64;

struct SimInputs {
    const ScenarioSpec& scenario;
    const Trace& trace;
    const std::vector<FlowSpec>& flows;
};

// Runs one replication. `seed` drives the channel only; mobility and traffic
// are fixed by the inputs. When `frames` is non-null every transmission is
// appended to it.
SimOutcome simulate(const AodvConfig& cfg, const SimInputs& in, std::uint64_t seed,
                    std::vector<FrameRecord>* frames = nullptr);

// Convenience overload that builds trace and flows from the scenario.
SimOutcome simulate(const AodvConfig& cfg, const ScenarioSpec& scenario, std::uint64_t seed);

} // namespace aodvtune
