#include "iovsim/routing.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace iovsim {

double rtl(double src_tl, double i_tl, double dist) {
    if (!(dist > 0.0)) throw std::invalid_argument("rtl: distance must be > 0");
    const double norm = std::hypot(src_tl, i_tl);
    if (!(norm > 0.0)) throw std::invalid_argument("rtl: zero trust norm");
    return 1.0 / (dist * norm);
}

RoutingParams RoutingParams::from(const NetworkConfig& cfg) {
    RoutingParams p;
    p.radio_range = cfg.radio_range;
    p.mode = cfg.inequality_mode;
    p.preference = cfg.rtl_preference;
    p.hop_delay_ms = cfg.hop_delay_ms();
    return p;
}

std::string_view to_string(RouteFailure f) {
    switch (f) {
        case RouteFailure::none: return "none";
        case RouteFailure::no_candidate: return "no-candidate";
        case RouteFailure::loop: return "loop";
        case RouteFailure::hop_limit: return "hop-limit";
        case RouteFailure::dead_node: return "dead-node";
    }
    return "unknown";
}

std::vector<NodeId> candidates_same_cluster(const Network& net, NodeId current, NodeId dest,
                                            std::span<const NodeId> cluster_members, InequalityMode mode,
                                            double radio_range) {
    const Position cp = net.position(current);
    const Position dp = net.position(dest);
    const double span = distance(cp, dp);
    std::vector<NodeId> out;
    for (NodeId i : cluster_members) {
        if (i == current || i == dest || !net.alive(i)) continue;
        const Position ip = net.position(i);
        const double from_current = distance(cp, ip);
        if (from_current > radio_range) continue;
        const double from_dest = distance(dp, ip);
        const bool ok = mode == InequalityMode::literal ? (from_current > span && from_dest > span)
                                                        : (from_current < span && from_dest < span);
        if (ok) out.push_back(i);
    }
    return out;
}

namespace {

// Ranks candidates by relative trust. A pair with no trust on either side has
// no defined score and ranks behind every scored pair; such pairs are ordered
// by longer stride.
struct Scored {
    NodeId id;
    bool scored;
    double score;
    double dist;
};

bool better(const Scored& a, const Scored& b, RtlPreference pref) {
    if (a.scored != b.scored) return a.scored;
    if (a.scored && a.score != b.score)
        return pref == RtlPreference::minimize ? a.score < b.score : a.score > b.score;
    if (!a.scored && a.dist != b.dist) return a.dist > b.dist;
    return a.id < b.id;
}

std::optional<NodeId> pick_by_rtl(const Network& net, NodeId current, std::span<const NodeId> candidates,
                                  RtlPreference pref) {
    const double src_tl = net.advertised_trust(current);
    const Position cp = net.position(current);
    std::optional<Scored> best;
    for (NodeId i : candidates) {
        const double d = distance(cp, net.position(i));
        const double i_tl = net.advertised_trust(i);
        Scored s{i, std::hypot(src_tl, i_tl) > 0.0, 0.0, d};
        if (s.scored) s.score = rtl(src_tl, i_tl, d);
        if (!best || better(s, *best, pref)) best = s;
    }
    if (!best) return std::nullopt;
    return best->id;
}

}  // namespace

std::optional<NodeId> next_hop(const Network& net, NodeId current, NodeId dest, const ClusterAssignment& assignment,
                               const RoutingParams& params, const std::vector<bool>* exclude) {
    if (!net.alive(current)) return std::nullopt;
    const Position cp = net.position(current);
    if (net.alive(dest) && distance(cp, net.position(dest)) <= params.radio_range) return dest;
    if (!assignment.contains(current)) return std::nullopt;

    auto excluded = [&](NodeId i) { return exclude && i < exclude->size() && (*exclude)[i]; };
    const ClusterId here = assignment.at(current);

    if (assignment.contains(dest) && here == assignment.at(dest)) {
        const auto members = assignment.members(here);
        auto cands = candidates_same_cluster(net, current, dest, members, params.mode, params.radio_range);
        std::erase_if(cands, [&](NodeId i) { return excluded(i) || distance(cp, net.position(i)) == 0.0; });
        return pick_by_rtl(net, current, cands, params.preference);
    }

    // In-range neighbours that do not move away from the destination's rings.
    // Co-located identities offer no progress and have no defined RTL.
    std::map<ClusterId, std::vector<NodeId>> by_cluster;
    for (const Node& n : net.nodes()) {
        if (n.id == current || excluded(n.id) || !assignment.contains(n.id)) continue;
        const double d = distance(cp, n.pos);
        if (d == 0.0 || d > params.radio_range) continue;
        const ClusterId c = assignment.at(n.id);
        if (c.ring > here.ring) continue;
        by_cluster[c].push_back(n.id);
    }
    if (by_cluster.empty()) return std::nullopt;

    std::vector<ClusterId> clusters;
    for (const auto& [c, _] : by_cluster) clusters.push_back(c);
    const double bearing = polar_angle(cp, assignment.destination_pos());
    const ClusterId target = nearer_cluster(clusters, bearing, assignment.sector_count());
    return pick_by_rtl(net, current, by_cluster[target], params.preference);
}

RouteTrace plan_route(const Network& net, NodeId src, NodeId dest, const ClusterAssignment& assignment,
                      const RoutingParams& params) {
    if (src == dest) throw std::invalid_argument("route: source equals destination");
    RouteTrace t;
    t.hops.push_back(src);
    if (!net.alive(src) || !net.alive(dest)) {
        t.failure = RouteFailure::dead_node;
        return t;
    }
    const std::size_t limit = params.max_hops ? params.max_hops : net.size();
    std::vector<bool> visited(net.size(), false);
    visited[src] = true;
    NodeId current = src;
    while (true) {
        if (t.hops.size() - 1 >= limit) {
            t.failure = RouteFailure::hop_limit;
            return t;
        }
        const auto next = next_hop(net, current, dest, assignment, params, &visited);
        if (!next) {
            t.failure = RouteFailure::no_candidate;
            return t;
        }
        if (visited[*next]) {
            t.failure = RouteFailure::loop;
            return t;
        }
        visited[*next] = true;
        t.hops.push_back(*next);
        t.per_hop_delay.push_back(params.hop_delay_ms);
        t.per_hop_energy.push_back(net.config().energy_costs.tx + net.config().energy_costs.rx);
        current = *next;
        if (current == dest) {
            t.delivered = true;
            return t;
        }
    }
}

RouteTrace route(Network& net, NodeId src, NodeId dest, const ClusterAssignment& assignment,
                 const RoutingParams& params) {
    RouteTrace t = plan_route(net, src, dest, assignment, params);
    for (std::size_t i = 0; i + 1 < t.hops.size(); ++i) {
        const auto sent = net.charge(t.hops[i], EnergyAction::tx);
        const auto got = net.charge(t.hops[i + 1], EnergyAction::rx);
        t.per_hop_energy[i] = sent.drawn + got.drawn;
        if (!sent.applied || !got.applied) {
            // A relay died under an earlier charge: the packet stops there.
            t.hops.resize(i + 1);
            t.per_hop_delay.resize(i);
            t.per_hop_energy.resize(i);
            t.delivered = false;
            t.failure = RouteFailure::dead_node;
            return t;
        }
    }
    return t;
}

}  // namespace iovsim
