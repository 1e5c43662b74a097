#include "aodvtune/mobility.hpp"

#include "aodvtune/error.hpp"
#include "aodvtune/rng.hpp"
#include "aodvtune/text_format.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace aodvtune {

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

Position Trace::position(std::size_t node, double t) const {
    const auto& s = nodes.at(node);
    if (t <= s.front().t) return s.front().pos;
    if (t >= s.back().t) return s.back().pos;
    auto hi = std::upper_bound(s.begin(), s.end(), t,
                               [](double v, const TraceSample& smp) { return v < smp.t; });
    auto lo = hi - 1;
    const double f = (t - lo->t) / (hi->t - lo->t);
    return {lo->pos.x + f * (hi->pos.x - lo->pos.x), lo->pos.y + f * (hi->pos.y - lo->pos.y)};
}

namespace {

constexpr std::array<std::array<int, 2>, 4> kHeadings{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

int reverse_of(int h) { return h ^ 1; }

std::vector<double> sample_times(double duration) {
    std::vector<double> ts;
    for (double t = 0.0; t <= duration; t += 1.0) ts.push_back(t);
    if (ts.back() < duration) ts.push_back(duration);
    return ts;
}

} // namespace

Trace generate_grid_mobility(double width, double height, std::size_t vehicles, double duration,
                             const GridMobility& grid, std::uint64_t seed) {
    if (!(width > 0) || !(height > 0) || !(duration > 0))
        throw ConfigError("mobility: area and duration must be positive");
    if (!(grid.block_m > 0) || !(grid.speed_min > 0) || grid.speed_max < grid.speed_min)
        throw ConfigError("mobility: invalid grid block or speed range");

    const int cols = static_cast<int>(std::floor(width / grid.block_m)) + 1;
    const int rows = static_cast<int>(std::floor(height / grid.block_m)) + 1;
    const auto times = sample_times(duration);

    Trace trace{width, height, duration, {}};
    trace.nodes.resize(vehicles);

    for (std::size_t v = 0; v < vehicles; ++v) {
        Stream rng = Stream::named(seed, StreamPurpose::mobility, v);
        int ix = static_cast<int>(rng.index(static_cast<std::size_t>(cols)));
        int iy = static_cast<int>(rng.index(static_cast<std::size_t>(rows)));
        const double speed = rng.uniform(grid.speed_min, grid.speed_max);
        const double leg = grid.block_m / speed;

        auto valid = [&](int h) {
            const int nx = ix + kHeadings[h][0];
            const int ny = iy + kHeadings[h][1];
            return nx >= 0 && nx < cols && ny >= 0 && ny < rows;
        };
        auto pick_heading = [&](int current) {
            std::vector<int> options;
            for (int h = 0; h < 4; ++h)
                if (valid(h) && (current < 0 || h != reverse_of(current))) options.push_back(h);
            if (options.empty() && current >= 0 && valid(reverse_of(current)))
                options.push_back(reverse_of(current));
            if (options.empty()) return -1;
            return options[rng.index(options.size())];
        };

        int heading = pick_heading(-1);
        double seg_start = 0.0;
        auto& samples = trace.nodes[v];
        samples.reserve(times.size());

        for (double t : times) {
            while (heading >= 0 && t >= seg_start + leg) {
                ix += kHeadings[heading][0];
                iy += kHeadings[heading][1];
                seg_start += leg;
                heading = pick_heading(heading);
            }
            Position p{ix * grid.block_m, iy * grid.block_m};
            if (heading >= 0) {
                const double f = (t - seg_start) / leg;
                p.x += f * kHeadings[heading][0] * grid.block_m;
                p.y += f * kHeadings[heading][1] * grid.block_m;
            }
            p.x = std::clamp(p.x, 0.0, width);
            p.y = std::clamp(p.y, 0.0, height);
            samples.push_back({t, p});
        }
    }
    return trace;
}

Trace static_trace(double width, double height, double duration,
                   const std::vector<Position>& positions) {
    Trace trace{width, height, duration, {}};
    for (const auto& p : positions) trace.nodes.push_back({{0.0, p}, {duration, p}});
    return trace;
}

void write_trace(std::ostream& out, const Trace& trace) {
    out << "#vanet-trace v1 " << format_double(trace.width) << ' ' << format_double(trace.height)
        << ' ' << format_double(trace.duration) << '\n';

    struct Row {
        double t;
        std::size_t node;
        Position pos;
    };
    std::vector<Row> rows;
    for (std::size_t n = 0; n < trace.nodes.size(); ++n)
        for (const auto& s : trace.nodes[n]) rows.push_back({s.t, n, s.pos});
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return a.t < b.t || (a.t == b.t && a.node < b.node);
    });
    for (const auto& r : rows)
        out << format_double(r.t) << ' ' << r.node << ' ' << format_double(r.pos.x) << ' '
            << format_double(r.pos.y) << '\n';
}

Trace read_trace(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    Trace trace;
    bool have_header = false;

    while (std::getline(in, line)) {
        ++line_no;
        auto t = trim(line);
        if (t.empty()) continue;
        std::vector<std::string_view> fields;
        for (auto f : split(t, ' '))
            if (!trim(f).empty()) fields.push_back(trim(f));

        if (!have_header) {
            if (fields.size() != 5 || fields[0] != "#vanet-trace" || fields[1] != "v1")
                throw ParseError("expected '#vanet-trace v1 width height duration' header", line_no);
            try {
                trace.width = parse_double(fields[2]);
                trace.height = parse_double(fields[3]);
                trace.duration = parse_double(fields[4]);
            } catch (const ParseError& e) {
                throw ParseError(e.what(), line_no);
            }
            if (!(trace.width > 0) || !(trace.height > 0) || !(trace.duration > 0))
                throw ParseError("header dimensions must be positive", line_no);
            have_header = true;
            continue;
        }
        if (t.front() == '#') continue;
        if (fields.size() != 4) throw ParseError("expected 't node_id x y'", line_no);

        TraceSample s{};
        std::uint64_t id = 0;
        try {
            s.t = parse_double(fields[0]);
            id = parse_u64(fields[1]);
            s.pos = {parse_double(fields[2]), parse_double(fields[3])};
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        if (s.pos.x < 0 || s.pos.x > trace.width || s.pos.y < 0 || s.pos.y > trace.height)
            throw ParseError("position of node " + std::to_string(id) + " outside the area", line_no);
        if (id > 100000) throw ParseError("node id too large", line_no);
        if (id >= trace.nodes.size()) trace.nodes.resize(id + 1);
        auto& samples = trace.nodes[id];
        if (!samples.empty() && !(s.t > samples.back().t))
            throw ParseError("timestamps of node " + std::to_string(id) + " are not increasing", line_no);
        samples.push_back(s);
    }
    if (!have_header) throw ParseError("empty trace");
    if (trace.nodes.empty()) throw ParseError("trace has no records");
    for (std::size_t n = 0; n < trace.nodes.size(); ++n) {
        const auto& s = trace.nodes[n];
        if (s.empty()) throw ParseError("node " + std::to_string(n) + " has no samples");
        if (s.front().t > 0.0 || s.back().t < trace.duration)
            throw ParseError("node " + std::to_string(n) + " samples do not cover [0, " +
                             format_double(trace.duration) + "]");
    }
    return trace;
}

Trace load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open trace '" + path + "'");
    return read_trace(in);
}

void save_trace(const std::string& path, const Trace& trace) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write trace '" + path + "'");
    write_trace(out, trace);
}

} // namespace aodvtune
