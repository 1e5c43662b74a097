#include "aodvtune/fitness.hpp"

#include "aodvtune/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aodvtune {

namespace {

double sorted_mean(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    // summed as offsets from the minimum so a constant sample returns itself
    double sum = 0.0;
    for (double x : v) sum += x - v.front();
    return v.front() + sum / static_cast<double>(v.size());
}

void check_refs(const ReferenceValues& refs) {
    if (!(refs.energy > 0) || !std::isfinite(refs.energy))
        throw ConfigError("reference energy must be positive and finite");
    if (!(refs.pdr_max > 0)) throw ConfigError("PDR_MAX must be positive");
}

} // namespace

Means aggregate(std::span<const SimOutcome> outcomes) {
    if (outcomes.empty()) throw std::invalid_argument("aggregate: no simulation outcomes");
    std::vector<double> e, p;
    e.reserve(outcomes.size());
    p.reserve(outcomes.size());
    for (const auto& o : outcomes) {
        e.push_back(o.energy_joules);
        p.push_back(o.pdr);
    }
    return {sorted_mean(std::move(e)), sorted_mean(std::move(p))};
}

double pdr_floor(const ReferenceValues& refs, const FitnessWeights& w) {
    return w.floor_rule == PdrFloorRule::degradation ? (1.0 - w.max_degradation) * refs.pdr
                                                     : w.max_degradation * refs.pdr;
}

double fitness(double energy, double pdr, const ReferenceValues& refs, const FitnessWeights& w) {
    check_refs(refs);
    return w.offset + w.energy_weight * energy / refs.energy + w.pdr_weight * pdr / refs.pdr_max;
}

double penalized_fitness(double energy, double pdr, const ReferenceValues& refs, const FitnessWeights& w) {
    return fitness(energy, pdr, refs, w) + (pdr_floor(refs, w) - pdr) * energy / refs.energy;
}

FitnessReport score(std::span<const SimOutcome> outcomes, const ReferenceValues& refs,
                    const FitnessWeights& w) {
    const Means m = aggregate(outcomes);
    FitnessReport r;
    r.mean_energy = m.energy;
    r.mean_pdr = m.pdr;
    r.penalized = m.pdr < pdr_floor(refs, w);
    r.fitness = r.penalized ? penalized_fitness(m.energy, m.pdr, refs, w) : fitness(m.energy, m.pdr, refs, w);
    r.outcomes.assign(outcomes.begin(), outcomes.end());
    return r;
}

std::string report_to_json(const FitnessReport& r, int indent) {
    nlohmann::ordered_json j;
    j["mean_energy_j"] = r.mean_energy;
    j["mean_pdr"] = r.mean_pdr;
    j["fitness"] = r.fitness;
    j["penalized"] = r.penalized;
    j["replications"] = r.outcomes.size();
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < r.outcomes.size(); ++i) {
        const auto& o = r.outcomes[i];
        nlohmann::ordered_json row;
        row["replication"] = i;
        if (i < r.seeds.size()) row["seed"] = r.seeds[i];
        row["energy_j"] = o.energy_joules;
        row["pdr"] = o.pdr;
        row["data_sent"] = o.data_sent;
        row["data_delivered"] = o.data_delivered;
        row["hello"] = o.hello_count;
        row["rreq"] = o.rreq_count;
        row["rrep"] = o.rrep_count;
        row["rerr"] = o.rerr_count;
        row["failed_discoveries"] = o.route_discoveries_failed;
        rows.push_back(std::move(row));
    }
    j["per_replication"] = std::move(rows);
    return j.dump(indent) + "\n";
}

} // namespace aodvtune
