#pragma once

#include "aodvtune/vanet_sim.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace aodvtune {

// Energy and PDR of the RFC 3561 configuration on the same scenario and seeds.
struct ReferenceValues {
    double energy = 0.0;
    double pdr = 0.0;
    double pdr_max = 1.0;
};

// How the worst admitted PDR is derived from the reference PDR.
enum class PdrFloorRule {
    degradation,  // (1 - max_degradation) * PDR_RFC
    literal,      // max_degradation * PDR_RFC
};

struct FitnessWeights {
    double offset = 0.1;
    double energy_weight = 0.9;
    double pdr_weight = -0.1;
    double max_degradation = 0.15;
    PdrFloorRule floor_rule = PdrFloorRule::degradation;
};

struct FitnessReport {
    double mean_energy = 0.0;
    double mean_pdr = 0.0;
    double fitness = 0.0;
    bool penalized = false;
    std::vector<SimOutcome> outcomes;
    // Replication seeds, parallel to `outcomes` when known.
    std::vector<std::uint64_t> seeds;

    bool operator==(const FitnessReport&) const = default;
};

struct Means {
    double energy;
    double pdr;
};

// Arithmetic means of energy and PDR. The sums run over sorted values so the
// result does not depend on outcome order. Throws std::invalid_argument when
// empty.
Means aggregate(std::span<const SimOutcome> outcomes);

// Worst PDR that escapes the penalty (PDR_W).
double pdr_floor(const ReferenceValues& refs, const FitnessWeights& w);

// offset + energy_weight * E / E_RFC + pdr_weight * PDR / PDR_MAX.
// Throws ConfigError when refs.energy <= 0.
double fitness(double energy, double pdr, const ReferenceValues& refs, const FitnessWeights& w);

// fitness() plus (PDR_W - PDR) * E / E_RFC, for solutions below the PDR floor.
double penalized_fitness(double energy, double pdr, const ReferenceValues& refs, const FitnessWeights& w);

// Penalty applies strictly below the floor.
FitnessReport score(std::span<const SimOutcome> outcomes, const ReferenceValues& refs,
                    const FitnessWeights& w);

std::string report_to_json(const FitnessReport& r, int indent = 2);

} // namespace aodvtune
