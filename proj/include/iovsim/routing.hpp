#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "iovsim/cluster.hpp"
#include "iovsim/net.hpp"

namespace iovsim {

// 1 / (dist * sqrt(src_tl^2 + i_tl^2)). Rejects dist <= 0 and a zero trust norm.
double rtl(double src_tl, double i_tl, double dist);

struct RoutingParams {
    double radio_range = 600.0;
    InequalityMode mode = InequalityMode::inverted;
    RtlPreference preference = RtlPreference::minimize;
    double hop_delay_ms = 1.124;
    std::size_t max_hops = 0;  // 0: number of nodes in the network

    static RoutingParams from(const NetworkConfig& cfg);
};

// Same-cluster relays of `current` toward dest that are within radio range.
// literal: d(current,i) > d(current,dest) and d(dest,i) > d(current,dest).
// inverted: both inequalities reversed.
std::vector<NodeId> candidates_same_cluster(const Network& net, NodeId current, NodeId dest,
                                            std::span<const NodeId> cluster_members, InequalityMode mode,
                                            double radio_range);

// Next relay from `current`, or nullopt when nothing qualifies. Nodes flagged
// in `exclude` (indexed by id) are never returned.
std::optional<NodeId> next_hop(const Network& net, NodeId current, NodeId dest, const ClusterAssignment& assignment,
                               const RoutingParams& params, const std::vector<bool>* exclude = nullptr);

enum class RouteFailure { none, no_candidate, loop, hop_limit, dead_node };

std::string_view to_string(RouteFailure f);

struct RouteTrace {
    std::vector<NodeId> hops;  // src first
    bool delivered = false;
    RouteFailure failure = RouteFailure::none;
    std::vector<double> per_hop_delay;   // ms, one per link
    std::vector<double> per_hop_energy;  // mJ, one per link
};

// Walks next_hop from src without touching node energy.
RouteTrace plan_route(const Network& net, NodeId src, NodeId dest, const ClusterAssignment& assignment,
                      const RoutingParams& params);

// plan_route, then charges tx at every sender and rx at every receiver for one
// packet. per_hop_energy records what was actually drawn.
RouteTrace route(Network& net, NodeId src, NodeId dest, const ClusterAssignment& assignment,
                 const RoutingParams& params);

}  // namespace iovsim
