#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "iovsim/net.hpp"

namespace iovsim {

// Fan-shaped cluster around a destination: a ring index counted in one-hop
// widths plus an angular sector.
struct ClusterId {
    std::uint32_t ring = 0;
    std::uint32_t sector = 0;

    friend auto operator<=>(const ClusterId&, const ClusterId&) = default;
};

// ceil(distance / d_1hop); 0 only when the node sits on the destination.
std::uint32_t cluster_level(Position node, Position dest, double d_1hop);

// Polar angle of p around center in [0, 2*pi).
double polar_angle(Position p, Position center);

// floor(sector_count * theta / 2pi) with theta the polar angle around dest.
std::uint32_t sector_of(Position node, Position dest, std::size_t sector_count);

class ClusterAssignment {
public:
    ClusterAssignment(NodeId destination, Position dest_pos, double d_1hop, std::size_t sector_count,
                      std::size_t id_space);

    NodeId destination() const { return destination_; }
    Position destination_pos() const { return dest_pos_; }
    double d_1hop() const { return d_1hop_; }
    std::size_t sector_count() const { return sector_count_; }

    void set(NodeId id, ClusterId c);
    bool contains(NodeId id) const { return id < map_.size() && map_[id].has_value(); }
    const ClusterId& at(NodeId id) const;
    std::size_t size() const { return size_; }

    // Ids of assigned nodes sharing cluster c, ascending.
    std::vector<NodeId> members(ClusterId c) const;

    friend bool operator==(const ClusterAssignment&, const ClusterAssignment&) = default;

private:
    NodeId destination_;
    Position dest_pos_;
    double d_1hop_;
    std::size_t sector_count_;
    std::vector<std::optional<ClusterId>> map_;
    std::size_t size_ = 0;
};


// Clusters every live node around dest. d_1hop is the configured radio range.
ClusterAssignment assign_all(const Network& net, NodeId dest);
ClusterAssignment assign_all(std::span<const Node> nodes, NodeId dest, const NetworkConfig& config);

// Minimum ring; ties go to the sector whose midline is angularly closest to
// `bearing` (the polar angle of the sender around the destination), then to
// the lower sector index.
ClusterId nearer_cluster(std::span<const ClusterId> candidates, double bearing, std::size_t sector_count);

}  // namespace iovsim
