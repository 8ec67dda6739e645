#include "iovsim/cluster.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace iovsim {

std::uint32_t cluster_level(Position node, Position dest, double d_1hop) {
    if (!(d_1hop > 0.0)) throw std::invalid_argument("cluster_level: d_1hop must be > 0");
    const double d = distance(node, dest);
    if (d == 0.0) return 0;
    return static_cast<std::uint32_t>(std::ceil(d / d_1hop));
}

double polar_angle(Position p, Position center) {
    double theta = std::atan2(p.y - center.y, p.x - center.x);
    if (theta < 0.0) theta += 2.0 * std::numbers::pi;
    if (theta >= 2.0 * std::numbers::pi) theta = 0.0;
    return theta;
}

std::uint32_t sector_of(Position node, Position dest, std::size_t sector_count) {
    if (sector_count < 1) throw std::invalid_argument("sector_of: sector_count must be >= 1");
    const double theta = polar_angle(node, dest);
    auto s = static_cast<std::size_t>(std::floor(static_cast<double>(sector_count) * theta / (2.0 * std::numbers::pi)));
    return static_cast<std::uint32_t>(s >= sector_count ? sector_count - 1 : s);
}

ClusterAssignment::ClusterAssignment(NodeId destination, Position dest_pos, double d_1hop, std::size_t sector_count,
                                     std::size_t id_space)
    : destination_(destination), dest_pos_(dest_pos), d_1hop_(d_1hop), sector_count_(sector_count), map_(id_space) {}

void ClusterAssignment::set(NodeId id, ClusterId c) {
    if (id >= map_.size()) map_.resize(id + 1);
    if (!map_[id]) ++size_;
    map_[id] = c;
}

const ClusterId& ClusterAssignment::at(NodeId id) const {
    if (!contains(id)) throw std::out_of_range("node " + std::to_string(id) + " has no cluster");
    return *map_[id];
}

std::vector<NodeId> ClusterAssignment::members(ClusterId c) const {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < map_.size(); ++i)
        if (map_[i] && *map_[i] == c) out.push_back(static_cast<NodeId>(i));
    return out;
}

ClusterAssignment assign_all(std::span<const Node> nodes, NodeId dest, const NetworkConfig& config) {
    if (dest >= nodes.size()) throw std::invalid_argument("assign_all: destination not among nodes");
    const Position dp = nodes[dest].pos;
    ClusterAssignment out(dest, dp, config.radio_range, config.sector_count, nodes.size());
    for (const Node& n : nodes) {
        const bool live = n.is_phantom() ? nodes[n.sybil_owner].alive() : n.alive();
        if (!live) continue;
        out.set(n.id, {cluster_level(n.pos, dp, config.radio_range), sector_of(n.pos, dp, config.sector_count)});
    }
    return out;
}

ClusterAssignment assign_all(const Network& net, NodeId dest) { return assign_all(net.nodes(), dest, net.config()); }

namespace {

double angular_gap(double a, double b) {
    double d = std::fabs(a - b);
    d = std::fmod(d, 2.0 * std::numbers::pi);
    return d > std::numbers::pi ? 2.0 * std::numbers::pi - d : d;
}

}  // namespace

ClusterId nearer_cluster(std::span<const ClusterId> candidates, double bearing, std::size_t sector_count) {
    if (candidates.empty()) throw std::invalid_argument("nearer_cluster: empty candidate set");
    const double width = 2.0 * std::numbers::pi / static_cast<double>(sector_count);
    auto gap = [&](const ClusterId& c) { return angular_gap((c.sector + 0.5) * width, bearing); };
    ClusterId best = candidates.front();
    for (const ClusterId& c : candidates.subspan(1)) {
        if (c.ring != best.ring) {
            if (c.ring < best.ring) best = c;
            continue;
        }
        const double gc = gap(c), gb = gap(best);
        if (gc < gb || (gc == gb && c.sector < best.sector)) best = c;
    }
    return best;
}

}  // namespace iovsim
