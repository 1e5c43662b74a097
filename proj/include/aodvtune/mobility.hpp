#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace aodvtune {

struct Position {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Position& a, const Position& b);

struct TraceSample {
    double t;
    Position pos;
    bool operator==(const TraceSample& o) const {
        return t == o.t && pos.x == o.pos.x && pos.y == o.pos.y;
    }
};

// Node positions over time. Each node's samples are strictly increasing in t
// and cover [0, duration]; positions between samples are interpolated linearly.
struct Trace {
    double width = 0.0;
    double height = 0.0;
    double duration = 0.0;
    std::vector<std::vector<TraceSample>> nodes;

    std::size_t node_count() const { return nodes.size(); }
    Position position(std::size_t node, double t) const;
    bool operator==(const Trace&) const = default;
};

struct GridMobility {
    double block_m = 100.0;
    double speed_min = 8.0;
    double speed_max = 14.0;
};

// Vehicles on a Manhattan grid of `grid.block_m` blocks covering the area.
// Each starts at a random intersection, drives at a constant speed drawn from
// [speed_min, speed_max] and picks a random non-reversing turn at every
// intersection. Sampled once per second for t = 0..duration.
Trace generate_grid_mobility(double width, double height, std::size_t vehicles, double duration,
                             const GridMobility& grid, std::uint64_t seed);

// Stationary nodes; one sample at t = 0 and one at t = duration.
Trace static_trace(double width, double height, double duration,
                   const std::vector<Position>& positions);

// Text format:
//   #vanet-trace v1 <width> <height> <duration>
//   <t> <node_id> <x> <y>      one per line, sorted by t then node_id
void write_trace(std::ostream& out, const Trace& trace);
Trace read_trace(std::istream& in);
Trace load_trace(const std::string& path);
void save_trace(const std::string& path, const Trace& trace);

} // namespace aodvtune
