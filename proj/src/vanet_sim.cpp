#include "aodvtune/vanet_sim.hpp"

#include "aodvtune/channel.hpp"
#include "aodvtune/error.hpp"
#include "aodvtune/rng.hpp"
#include "aodvtune/text_format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>
#include <unordered_set>

namespace aodvtune {

AodvConfig AodvConfig::from_genome(const Genome& g) {
    const auto& space = ParamSpace::aodv();
    auto violations = space.validate(g);
    if (!violations.empty()) {
        std::string msg = "invalid AODV configuration:";
        for (const auto& v : violations) msg += " " + v.message + ";";
        throw ConfigError(msg);
    }
    AodvConfig c;
    c.hello_interval = g[kHelloInterval];
    c.active_route_timeout = g[kActiveRouteTimeout];
    c.my_route_timeout = g[kMyRouteTimeout];
    c.node_traversal_time = g[kNodeTraversalTime];
    c.max_rreq_timeout = g[kMaxRreqTimeout];
    c.net_diameter = static_cast<int>(g[kNetDiameter]);
    c.allowed_hello_loss = static_cast<int>(g[kAllowedHelloLoss]);
    c.rreq_retries = static_cast<int>(g[kRreqRetries]);
    c.ttl_start = static_cast<int>(g[kTtlStart]);
    c.ttl_increment = static_cast<int>(g[kTtlIncrement]);
    c.ttl_threshold = static_cast<int>(g[kTtlThreshold]);
    return c;
}

std::vector<int> ring_ttl_sequence(const AodvConfig& cfg) {
    std::vector<int> seq;
    for (int ttl = cfg.ttl_start; ttl <= cfg.ttl_threshold; ttl += cfg.ttl_increment) seq.push_back(ttl);
    for (int i = 0; i <= cfg.rreq_retries; ++i) seq.push_back(cfg.net_diameter);
    return seq;
}

double ring_timeout(int ttl, const AodvConfig& cfg) {
    return std::min(2.0 * cfg.node_traversal_time * (ttl + 2), cfg.max_rreq_timeout);
}

std::string sim_outcome_csv_header() {
    return "replication,seed,energy_j,data_sent,data_delivered,pdr,hello,rreq,rrep,rerr,failed_discoveries";
}

std::string sim_outcome_to_csv(const SimOutcome& o, std::size_t replication, std::uint64_t seed) {
    return std::to_string(replication) + "," + std::to_string(seed) + "," + format_double(o.energy_joules) +
           "," + std::to_string(o.data_sent) + "," + std::to_string(o.data_delivered) + "," +
           format_double(o.pdr) + "," + std::to_string(o.hello_count) + "," + std::to_string(o.rreq_count) +
           "," + std::to_string(o.rrep_count) + "," + std::to_string(o.rerr_count) + "," +
           std::to_string(o.route_discoveries_failed);
}

namespace {

constexpr std::uint32_t kBroadcast = std::numeric_limits<std::uint32_t>::max();
constexpr double kNever = -std::numeric_limits<double>::infinity();
constexpr double kRerrMinGap = 1.0;

struct Packet {
    FrameKind kind = FrameKind::data;
    std::uint32_t from = 0;
    std::uint32_t to = kBroadcast;
    // data: source/destination; RREQ: originator/sought node; RREP: requester/
    // found node; RERR: data source/unreachable node.
    std::uint32_t origin = 0;
    std::uint32_t target = 0;
    std::uint32_t rreq_id = 0;
    int ttl = 0;
    int hops = 0;
    double lifetime = 0.0;
    std::size_t bytes = 0;
};

enum class EventKind : std::uint8_t { app_send, hello, ring_timeout, receive };

struct Event {
    double time;
    std::uint32_t node;
    std::uint64_t seq;
    EventKind kind;
    std::uint32_t index = 0;    // flow (app_send) or sought node (ring_timeout)
    std::uint64_t counter = 0;  // packet number (app_send) or RREQ id (ring_timeout)
    Packet pkt{};
};

struct Later {
    bool operator()(const Event& a, const Event& b) const {
        return std::tie(a.time, a.node, a.seq) > std::tie(b.time, b.node, b.seq);
    }
};

struct Route {
    std::uint32_t next_hop = 0;
    int hops = 0;
    double expiry = kNever;
    bool valid = false;
};

struct Discovery {
    bool active = false;
    std::size_t ring = 0;
    std::uint32_t rreq_id = 0;
    std::vector<Packet> buffer;
};

struct Window {
    double begin;
    double end;
};

struct NodeState {
    std::vector<Route> routes;
    std::vector<double> last_heard;
    std::vector<double> last_rerr;
    std::vector<Discovery> discoveries;
    std::unordered_set<std::uint64_t> seen_rreq;
    std::vector<Window> source_windows;
    double active_until = kNever;
    bool hello_pending = false;
    int pending_discoveries = 0;
    std::uint32_t next_rreq_id = 0;
    double energy = 0.0;
    std::uint32_t hellos = 0;
};

class Simulator {
public:
    Simulator(const AodvConfig& cfg, const SimInputs& in, std::uint64_t seed,
              std::vector<FrameRecord>* frames)
        : cfg_(cfg), in_(in), rng_(Stream::named(seed, StreamPurpose::channel)), frames_(frames),
          rings_(ring_ttl_sequence(cfg)) {
        const std::size_t n = in.trace.node_count();
        nodes_.resize(n);
        for (auto& s : nodes_) {
            s.routes.resize(n);
            s.last_heard.assign(n, kNever);
            s.last_rerr.assign(n, kNever);
            s.discoveries.resize(n);
        }
        const auto& cbr = in.scenario.cbr;
        packets_per_flow_ = cbr.packets_per_flow();
        interval_ = cbr.interval();
        for (std::uint32_t f = 0; f < in.flows.size(); ++f) {
            const auto& flow = in.flows[f];
            nodes_[flow.source].source_windows.push_back(
                {flow.start, flow.start + static_cast<double>(packets_per_flow_) * interval_});
            if (packets_per_flow_ > 0) schedule(flow.start, flow.source, EventKind::app_send, f, 0);
        }
    }

    SimOutcome run() {
        const double end = in_.scenario.sim_duration;
        while (!queue_.empty() && queue_.top().time < end) {
            Event ev = queue_.top();
            queue_.pop();
            now_ = ev.time;
            switch (ev.kind) {
            case EventKind::app_send: on_app_send(ev); break;
            case EventKind::hello: on_hello(ev.node); break;
            case EventKind::ring_timeout: on_ring_timeout(ev.node, ev.index, ev.counter); break;
            case EventKind::receive: on_receive(ev.node, ev.pkt); break;
            }
        }
        out_.pdr = out_.data_sent ? static_cast<double>(out_.data_delivered) / static_cast<double>(out_.data_sent)
                                  : 0.0;
        out_.energy_joules = 0.0;
        out_.hello_per_node.clear();
        for (const auto& s : nodes_) {
            out_.energy_joules += s.energy;
            out_.hello_per_node.push_back(s.hellos);
        }
        return out_;
    }

private:
    void schedule(double t, std::uint32_t node, EventKind kind, std::uint32_t index = 0,
                  std::uint64_t counter = 0, const Packet& pkt = {}) {
        queue_.push(Event{t, node, seq_++, kind, index, counter, pkt});
    }

    Position pos(std::uint32_t n) const { return in_.trace.position(n, now_); }

    // -- activity and hellos ------------------------------------------------

    bool source_active(std::uint32_t n) const {
        for (const auto& w : nodes_[n].source_windows)
            if (now_ >= w.begin && now_ < w.end) return true;
        return false;
    }

    bool is_active(std::uint32_t n) const {
        const auto& s = nodes_[n];
        return now_ < s.active_until || s.pending_discoveries > 0 || source_active(n);
    }

    void keep_active(std::uint32_t n) {
        auto& s = nodes_[n];
        s.active_until = std::max(s.active_until, now_ + cfg_.active_route_timeout);
        wake(n);
    }

    void wake(std::uint32_t n) {
        auto& s = nodes_[n];
        if (!s.hello_pending && is_active(n)) {
            s.hello_pending = true;
            schedule(now_, n, EventKind::hello);
        }
    }

    void on_hello(std::uint32_t n) {
        auto& s = nodes_[n];
        if (!is_active(n)) {
            s.hello_pending = false;
            return;
        }
        Packet p;
        p.kind = FrameKind::hello;
        p.origin = n;
        p.bytes = kHelloBytes + kFrameOverheadBytes;
        ++s.hellos;
        ++out_.hello_count;
        transmit(n, p);
        schedule(now_ + cfg_.hello_interval, n, EventKind::hello);
    }

    // -- channel ------------------------------------------------------------

    void transmit(std::uint32_t sender, Packet p) {
        p.from = sender;
        const double air = packet_airtime(p.bytes, in_.scenario.channel.bandwidth_bps);
        const auto& energy = in_.scenario.energy;
        nodes_[sender].energy += air * energy.tx_power_w;

        const Position here = pos(sender);
        std::uint32_t receivers = 0;
        auto attempt = [&](std::uint32_t r) {
            const double prob = reception_probability(distance(here, pos(r)), in_.scenario.channel);
            if (prob <= 0.0) return;
            if (prob < 1.0 && !(rng_.uniform01() < prob)) return;
            ++receivers;
            nodes_[r].energy += air * energy.rx_power_w;
            schedule(now_ + air, r, EventKind::receive, 0, 0, p);
        };
        if (p.to == kBroadcast) {
            for (std::uint32_t r = 0; r < nodes_.size(); ++r)
                if (r != sender) attempt(r);
        } else {
            attempt(p.to);
        }

        switch (p.kind) {
        case FrameKind::rreq: ++out_.rreq_count; break;
        case FrameKind::rrep: ++out_.rrep_count; break;
        case FrameKind::rerr: ++out_.rerr_count; break;
        default: break;
        }
        if (frames_) frames_->push_back({now_, sender, p.kind, p.bytes, receivers});
    }

    // -- routing table ------------------------------------------------------

    bool link_alive(std::uint32_t n, std::uint32_t neighbor) const {
        return now_ - nodes_[n].last_heard[neighbor] <= cfg_.allowed_hello_loss * cfg_.hello_interval;
    }

    bool route_live(const Route& r) const { return r.valid && now_ < r.expiry; }

    bool route_usable(std::uint32_t n, const Route& r) const {
        return route_live(r) && link_alive(n, r.next_hop);
    }

    void refresh(Route& r) {
        if (route_live(r)) r.expiry = std::max(r.expiry, now_ + cfg_.active_route_timeout);
    }

    // -- data plane ---------------------------------------------------------

    void on_app_send(const Event& ev) {
        const auto& flow = in_.flows[ev.index];
        if (ev.counter + 1 < packets_per_flow_)
            schedule(flow.start + static_cast<double>(ev.counter + 1) * interval_, flow.source,
                     EventKind::app_send, ev.index, ev.counter + 1);
        Packet p;
        p.kind = FrameKind::data;
        p.origin = flow.source;
        p.target = flow.destination;
        p.ttl = cfg_.net_diameter;
        p.bytes = in_.scenario.cbr.packet_bytes + kFrameOverheadBytes;
        ++out_.data_sent;
        wake(flow.source);
        send_data(flow.source, p);
    }

    void send_data(std::uint32_t n, Packet p) {
        auto& s = nodes_[n];
        Route& r = s.routes[p.target];
        if (route_usable(n, r)) {
            refresh(r);
            if (p.origin != n) refresh(s.routes[p.origin]);
            keep_active(n);
            p.to = r.next_hop;
            transmit(n, p);
            return;
        }
        const bool was_valid = r.valid;
        r.valid = false;
        if (n == p.origin) {
            buffer_for_discovery(n, p);
            return;
        }
        if (was_valid || now_ - s.last_rerr[p.target] >= kRerrMinGap) send_rerr(n, p.origin, p.target);
    }

    void buffer_for_discovery(std::uint32_t n, const Packet& p) {
        auto& d = nodes_[n].discoveries[p.target];
        if (d.buffer.size() < kDiscoveryBufferPackets) d.buffer.push_back(p);
        if (!d.active) start_discovery(n, p.target);
    }

    void deliver(std::uint32_t n, const Packet& p) {
        ++out_.data_delivered;
        refresh(nodes_[n].routes[p.origin]);
        keep_active(n);
    }

    // -- route discovery ----------------------------------------------------

    void start_discovery(std::uint32_t n, std::uint32_t target) {
        auto& d = nodes_[n].discoveries[target];
        d.active = true;
        d.ring = 0;
        ++nodes_[n].pending_discoveries;
        wake(n);
        send_rreq(n, target);
    }

    void send_rreq(std::uint32_t n, std::uint32_t target) {
        auto& s = nodes_[n];
        auto& d = s.discoveries[target];
        d.rreq_id = s.next_rreq_id++;
        s.seen_rreq.insert(rreq_key(n, d.rreq_id));
        const int ttl = rings_[d.ring];
        Packet p;
        p.kind = FrameKind::rreq;
        p.origin = n;
        p.target = target;
        p.rreq_id = d.rreq_id;
        p.ttl = ttl;
        p.bytes = kRreqBytes + kFrameOverheadBytes;
        transmit(n, p);
        schedule(now_ + ring_timeout(ttl, cfg_), n, EventKind::ring_timeout, target, d.rreq_id);
    }

    void on_ring_timeout(std::uint32_t n, std::uint32_t target, std::uint64_t rreq_id) {
        auto& s = nodes_[n];
        auto& d = s.discoveries[target];
        if (!d.active || d.rreq_id != rreq_id) return;
        if (++d.ring < rings_.size()) {
            send_rreq(n, target);
            return;
        }
        d.active = false;
        d.buffer.clear();
        --s.pending_discoveries;
        ++out_.route_discoveries_failed;
    }

    void finish_discovery(std::uint32_t n, std::uint32_t target) {
        auto& s = nodes_[n];
        auto& d = s.discoveries[target];
        if (!d.active) return;
        d.active = false;
        --s.pending_discoveries;
        std::vector<Packet> pending;
        pending.swap(d.buffer);
        for (const auto& p : pending) send_data(n, p);
    }

    static std::uint64_t rreq_key(std::uint32_t origin, std::uint32_t id) {
        return (static_cast<std::uint64_t>(origin) << 32) | id;
    }

    void install(std::uint32_t n, std::uint32_t dest, std::uint32_t via, int hops, double expiry) {
        Route& r = nodes_[n].routes[dest];
        if (route_live(r)) expiry = std::max(expiry, r.expiry);
        r = Route{via, hops, expiry, true};
    }

    // -- control plane ------------------------------------------------------

    void on_receive(std::uint32_t n, const Packet& p) {
        nodes_[n].last_heard[p.from] = now_;
        switch (p.kind) {
        case FrameKind::hello: break;
        case FrameKind::data: on_data(n, p); break;
        case FrameKind::rreq: on_rreq(n, p); break;
        case FrameKind::rrep: on_rrep(n, p); break;
        case FrameKind::rerr: on_rerr(n, p); break;
        }
    }

    void on_data(std::uint32_t n, Packet p) {
        if (p.target == n) {
            deliver(n, p);
            return;
        }
        if (--p.ttl <= 0) return;
        ++p.hops;
        send_data(n, p);
    }

    void on_rreq(std::uint32_t n, const Packet& p) {
        auto& s = nodes_[n];
        if (!s.seen_rreq.insert(rreq_key(p.origin, p.rreq_id)).second) return;
        if (p.origin == n) return;

        install(n, p.origin, p.from, p.hops + 1, now_ + cfg_.active_route_timeout);

        if (p.target == n) {
            send_rrep(n, p.from, p.origin, n, 0, cfg_.my_route_timeout);
            return;
        }
        const Route& known = s.routes[p.target];
        if (route_usable(n, known)) {
            send_rrep(n, p.from, p.origin, p.target, known.hops, known.expiry - now_);
            return;
        }
        if (p.ttl > 1) {
            Packet fwd = p;
            fwd.to = kBroadcast;
            --fwd.ttl;
            ++fwd.hops;
            transmit(n, fwd);
        }
    }

    void send_rrep(std::uint32_t n, std::uint32_t to, std::uint32_t requester, std::uint32_t found, int hops,
                   double lifetime) {
        Packet r;
        r.kind = FrameKind::rrep;
        r.to = to;
        r.origin = requester;
        r.target = found;
        r.hops = hops;
        r.ttl = cfg_.net_diameter;
        r.lifetime = lifetime;
        r.bytes = kRrepBytes + kFrameOverheadBytes;
        keep_active(n);
        transmit(n, r);
    }

    void on_rrep(std::uint32_t n, const Packet& p) {
        // newest reply wins the next hop
        install(n, p.target, p.from, p.hops + 1, now_ + p.lifetime);

        if (n == p.origin) {
            keep_active(n);
            finish_discovery(n, p.target);
            return;
        }
        const Route& back = nodes_[n].routes[p.origin];
        if (!route_live(back) || p.ttl <= 1) return;
        Packet fwd = p;
        fwd.to = back.next_hop;
        ++fwd.hops;
        --fwd.ttl;
        keep_active(n);
        transmit(n, fwd);
    }

    void send_rerr(std::uint32_t n, std::uint32_t data_origin, std::uint32_t unreachable) {
        auto& s = nodes_[n];
        s.last_rerr[unreachable] = now_;
        const Route& back = s.routes[data_origin];
        if (!route_live(back)) return;
        Packet e;
        e.kind = FrameKind::rerr;
        e.to = back.next_hop;
        e.origin = data_origin;
        e.target = unreachable;
        e.ttl = cfg_.net_diameter;
        e.bytes = kRerrBytes + kFrameOverheadBytes;
        transmit(n, e);
    }

    void on_rerr(std::uint32_t n, const Packet& p) {
        auto& s = nodes_[n];
        Route& r = s.routes[p.target];
        if (r.valid && r.next_hop == p.from) r.valid = false;
        if (n == p.origin || p.ttl <= 1) return;
        const Route& back = s.routes[p.origin];
        if (!route_live(back)) return;
        Packet fwd = p;
        fwd.to = back.next_hop;
        --fwd.ttl;
        transmit(n, fwd);
    }

    const AodvConfig& cfg_;
    const SimInputs& in_;
    Stream rng_;
    std::vector<FrameRecord>* frames_;
    std::vector<int> rings_;
    std::vector<NodeState> nodes_;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::uint64_t seq_ = 0;
    double now_ = 0.0;
    std::uint64_t packets_per_flow_ = 0;
    double interval_ = 0.0;
    SimOutcome out_;
};

} // namespace

SimOutcome simulate(const AodvConfig& cfg, const SimInputs& in, std::uint64_t seed,
                    std::vector<FrameRecord>* frames) {
    in.scenario.validate();
    if (in.trace.node_count() < 2) throw ConfigError("simulation needs at least two nodes");
    if (in.trace.duration < in.scenario.sim_duration)
        throw ConfigError("mobility trace is shorter than the simulated time");
    for (const auto& f : in.flows)
        if (f.source >= in.trace.node_count() || f.destination >= in.trace.node_count())
            throw ConfigError("flow names an unknown node id");
    Simulator sim(cfg, in, seed, frames);
    return sim.run();
}

SimOutcome simulate(const AodvConfig& cfg, const ScenarioSpec& scenario, std::uint64_t seed) {
    const Trace trace = build_trace(scenario);
    const auto flows = build_flows(scenario, trace.node_count());
    return simulate(cfg, SimInputs{scenario, trace, flows}, seed);
}

} // namespace aodvtune
