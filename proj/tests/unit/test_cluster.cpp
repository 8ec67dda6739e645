#include <stdexcept>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "iovsim/cluster.hpp"

using namespace iovsim;

namespace {

std::uint32_t ring_oracle(Position p, Position d, double w) {
    const long double dx = static_cast<long double>(p.x) - d.x, dy = static_cast<long double>(p.y) - d.y;
    return static_cast<std::uint32_t>(std::ceil(std::sqrt(dx * dx + dy * dy) / w));
}

Network grid_network(std::size_t count, std::uint64_t seed, double range = 600.0) {
    NetworkConfig cfg;
    cfg.node_count = count;
    cfg.rng_seed = seed;
    cfg.radio_range = range;
    return Network::deploy(cfg);
}

}  // namespace

TEST_CASE("cluster level") {
    CHECK(cluster_level({300, 400}, {0, 0}, 100) == 5);
    CHECK(cluster_level({7, 7}, {7, 7}, 100) == 0);
    CHECK(cluster_level({0, 1e-9}, {0, 0}, 100) == 1);
    CHECK(cluster_level({0, 100}, {0, 0}, 100) == 1);
    CHECK_THROWS_AS(cluster_level({1, 1}, {0, 0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(cluster_level({1, 1}, {0, 0}, -5.0), std::invalid_argument);

    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(0.0, 2500.0);
    const Position dest{1000, 1300};
    for (int i = 0; i < 1000; ++i) {
        const Position p{u(gen), u(gen)};
        CHECK(cluster_level(p, dest, 250.0) == ring_oracle(p, dest, 250.0));
    }
}

TEST_CASE("sectors") {
    const Position d{100, 100};
    CHECK(sector_of({200, 100}, d, 4) == 0);
    CHECK(sector_of({100, 200}, d, 4) == 1);
    CHECK(sector_of({0, 100}, d, 4) == 2);
    CHECK(sector_of({100, 0}, d, 4) == 3);
    CHECK(sector_of({150, 90}, d, 4) == 3);
    CHECK(polar_angle({100, 0}, d) == doctest::Approx(1.5 * std::numbers::pi));

    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(0.0, 200.0);
    for (int i = 0; i < 500; ++i) CHECK(sector_of({u(gen), u(gen)}, d, 1) == 0);
}

TEST_CASE("assign_all is total, idempotent and monotone") {
    Network net = grid_network(300, 9, 250.0);
    for (NodeId id : {3u, 17u, 41u}) net.node(id).residual_energy = 0.0;
    const NodeId dest = 5;
    const ClusterAssignment a = assign_all(net, dest);
    const ClusterAssignment b = assign_all(net, dest);
    CHECK(a == b);
    CHECK(a.size() == 297);
    CHECK_FALSE(a.contains(3));
    CHECK(a.at(dest).ring == 0);

    const Position dp = net.position(dest);
    for (const auto& n : net.nodes()) {
        if (!a.contains(n.id)) continue;
        const double d = distance(n.pos, dp);
        CHECK(a.at(n.id).ring == ring_oracle(n.pos, dp, 250.0));
        CHECK(a.at(n.id).sector == sector_of(n.pos, dp, 8));
        if (d > 0.0 && d <= 250.0) CHECK(a.at(n.id).ring == 1);
    }
    for (const auto& x : net.nodes())
        for (const auto& y : net.nodes()) {
            if (!a.contains(x.id) || !a.contains(y.id)) continue;
            if (distance(x.pos, dp) <= distance(y.pos, dp)) CHECK(a.at(x.id).ring <= a.at(y.id).ring);
        }

    const auto members = a.members(a.at(0));
    CHECK(std::is_sorted(members.begin(), members.end()));
    for (NodeId m : members) CHECK(a.at(m) == a.at(0));
}

TEST_CASE("single sector reduces to rings") {
    NetworkConfig cfg;
    cfg.node_count = 200;
    cfg.sector_count = 1;
    const auto nodes = deploy(cfg);
    const auto a = assign_all(nodes, 0, cfg);
    for (const auto& n : nodes) CHECK(a.at(n.id).sector == 0);
}

TEST_CASE("nearer cluster") {
    const std::vector<ClusterId> two_rings{{5, 0}, {3, 6}};
    CHECK(nearer_cluster(two_rings, 0.0, 8) == ClusterId{3, 6});

    // Sector midlines for 4 sectors sit at pi/4, 3pi/4, ...
    const std::vector<ClusterId> same_ring{{3, 0}, {3, 1}};
    CHECK(nearer_cluster(same_ring, 0.6 * std::numbers::pi, 4) == ClusterId{3, 1});
    CHECK(nearer_cluster(same_ring, 0.1 * std::numbers::pi, 4) == ClusterId{3, 0});
    const std::vector<ClusterId> twins{{3, 2}, {3, 2}, {3, 1}};
    CHECK(nearer_cluster(twins, std::numbers::pi, 4) == ClusterId{3, 1});
    // Angular distance wraps around 2pi.
    const std::vector<ClusterId> wrap{{2, 1}, {2, 3}};
    CHECK(nearer_cluster(wrap, 0.05, 4) == ClusterId{2, 3});

    const std::vector<ClusterId> one{{4, 2}};
    CHECK(nearer_cluster(one, 1.0, 8) == ClusterId{4, 2});
    CHECK_THROWS_AS(nearer_cluster({}, 0.0, 8), std::invalid_argument);
}

TEST_CASE("nearer cluster against an angular oracle") {
    std::mt19937_64 gen(8);
    for (int t = 0; t < 500; ++t) {
        const std::size_t s = 1 + gen() % 12;
        std::vector<ClusterId> cands;
        const std::size_t k = 1 + gen() % 6;
        for (std::size_t i = 0; i < k; ++i)
            cands.push_back({static_cast<std::uint32_t>(1 + gen() % 3), static_cast<std::uint32_t>(gen() % s)});
        const double bearing = std::uniform_real_distribution<double>(0.0, 2 * std::numbers::pi)(gen);
        auto gap = [&](const ClusterId& c) {
            const double mid = (c.sector + 0.5) * 2 * std::numbers::pi / static_cast<double>(s);
            const double d = std::fabs(mid - bearing);
            return std::min(d, 2 * std::numbers::pi - d);
        };
        ClusterId best = cands[0];
        for (const auto& c : cands) {
            if (c.ring != best.ring) {
                if (c.ring < best.ring) best = c;
                continue;
            }
            if (gap(c) < gap(best) || (gap(c) == gap(best) && c.sector < best.sector)) best = c;
        }
        CHECK(nearer_cluster(cands, bearing, s) == best);
    }
}
