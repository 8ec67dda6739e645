#include <stdexcept>
#include <cmath>
#include <random>

#include "doctest.h"
#include "iovsim/error.hpp"
#include "iovsim/net.hpp"

using namespace iovsim;

namespace {

Node fresh(double energy) {
    Node n;
    n.id = 0;
    n.residual_energy = energy;
    return n;
}

}  // namespace

TEST_CASE("distance") {
    CHECK(distance({0, 0}, {3, 4}) == 5.0);
    CHECK(distance({12.5, -3}, {12.5, -3}) == 0.0);

    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 2500.0);
    for (int i = 0; i < 100; ++i) {
        const Position a{u(gen), u(gen)}, b{u(gen), u(gen)};
        const long double dx = static_cast<long double>(a.x) - b.x;
        const long double dy = static_cast<long double>(a.y) - b.y;
        const long double exact = std::sqrt(dx * dx + dy * dy);
        CHECK(std::fabs(distance(a, b) - static_cast<double>(exact)) <= 1e-9 * static_cast<double>(exact));
        CHECK(distance(a, b) == distance(b, a));
    }
}

TEST_CASE("charge draws the configured cost") {
    const EnergyModel m;
    Node n = fresh(10.0);
    CHECK(charge(n, EnergyAction::tx, m).applied);
    CHECK(n.residual_energy == doctest::Approx(9.6).epsilon(1e-12));

    Node low = fresh(0.05);
    const auto r = charge(low, EnergyAction::rx, m);
    CHECK(r.died);
    CHECK(r.drawn == doctest::Approx(0.05));
    CHECK(low.residual_energy == 0.0);
    CHECK_FALSE(low.alive());

    const auto again = charge(low, EnergyAction::tx, m);
    CHECK_FALSE(again.applied);
    CHECK(again.drawn == 0.0);
    CHECK(low.residual_energy == 0.0);

    Node seq = fresh(5.0);
    charge(seq, EnergyAction::tx, m);
    charge(seq, EnergyAction::rx, m);
    charge(seq, EnergyAction::idle, m);
    CHECK(seq.residual_energy == doctest::Approx(4.4875).epsilon(1e-12));

    Node other = fresh(1.0);
    charge(other, EnergyAction::sleep, m);
    charge(other, EnergyAction::transition, m);
    CHECK(other.residual_energy == 0.0);
}

TEST_CASE("energy model rejects negative costs") {
    EnergyModel m;
    m.rx = -0.1;
    CHECK_THROWS_AS(m.validate(), ConfigError);
}

TEST_CASE("deploy") {
    NetworkConfig cfg;
    cfg.node_count = 2;
    cfg.rng_seed = 7;
    const auto a = deploy(cfg), b = deploy(cfg);
    REQUIRE(a.size() == 2);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].pos == b[i].pos);

    cfg.node_count = 1000;
    for (const auto& n : deploy(cfg)) {
        CHECK(n.pos.x >= 0.0);
        CHECK(n.pos.x <= 2500.0);
        CHECK(n.pos.y >= 0.0);
        CHECK(n.pos.y <= 2500.0);
        CHECK(n.residual_energy == cfg.initial_energy);
        CHECK(n.queue.capacity() == cfg.queue_capacity);
    }

    cfg.node_count = 10000;
    double sx = 0, sy = 0;
    for (const auto& n : deploy(cfg)) sx += n.pos.x, sy += n.pos.y;
    CHECK(std::fabs(sx / 10000 - 1250.0) < 0.05 * 1250.0);
    CHECK(std::fabs(sy / 10000 - 1250.0) < 0.05 * 1250.0);

    cfg.node_count = 1;
    CHECK_THROWS_AS(deploy(cfg), ConfigError);
}

TEST_CASE("deploy depends on the seed") {
    NetworkConfig cfg;
    cfg.node_count = 10;
    const auto a = deploy(cfg);
    cfg.rng_seed = 2;
    const auto b = deploy(cfg);
    CHECK_FALSE(a[0].pos == b[0].pos);
}

TEST_CASE("network config validation") {
    NetworkConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    auto bad = cfg;
    bad.radio_range = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.sector_count = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK(cfg.hop_delay_ms() == doctest::Approx(2048.0 / 2.0e6 * 1000.0 + 0.1));
}

TEST_CASE("queue is drop-tail with control ahead of data") {
    PacketQueue q(3);
    CHECK(q.push({1, 0, Priority::data}));
    CHECK(q.push({2, 0, Priority::data}));
    CHECK(q.push({3, 0, Priority::control}));
    CHECK(q.free_slots() == 0);
    CHECK_FALSE(q.push({4, 0, Priority::control}));
    CHECK(q.drops() == 1);
    CHECK(q.size() == 3);
    CHECK(q.pop()->id == 3);
    CHECK(q.pop()->id == 1);
    CHECK(q.push({5, 0, Priority::data}));
    CHECK(q.pop()->id == 2);
    CHECK(q.pop()->id == 5);
    CHECK_FALSE(q.pop());
}

TEST_CASE("queue length never exceeds capacity") {
    std::mt19937_64 gen(3);
    PacketQueue q(8);
    std::uint64_t expected_drops = 0;
    for (std::uint64_t i = 0; i < 2000; ++i) {
        if (gen() % 3 == 0) {
            q.pop();
        } else {
            const bool room = q.size() < 8;
            CHECK(q.push({i, 0, gen() % 2 ? Priority::data : Priority::control}) == room);
            if (!room) ++expected_drops;
        }
        CHECK(q.size() <= 8);
    }
    CHECK(q.drops() == expected_drops);
}

TEST_CASE("energy ledger matches per-node deltas") {
    NetworkConfig cfg;
    cfg.node_count = 30;
    cfg.initial_energy = 5.0;
    Network net = Network::deploy(cfg);
    std::mt19937_64 gen(5);
    double sum = 0.0;
    for (int i = 0; i < 5000; ++i) {
        const auto id = static_cast<NodeId>(gen() % cfg.node_count);
        const auto action = static_cast<EnergyAction>(gen() % kEnergyActionCount);
        sum += net.charge(id, action).drawn;
    }
    CHECK(net.ledger().total == doctest::Approx(sum).epsilon(1e-12));
    CHECK(net.consumed_energy() == doctest::Approx(sum).epsilon(1e-12));
    double by_action = 0.0;
    for (double v : net.ledger().by_action) by_action += v;
    CHECK(by_action == doctest::Approx(sum).epsilon(1e-12));
    for (const auto& n : net.nodes()) CHECK(n.residual_energy >= 0.0);
    CHECK(net.ledger().dead_charges > 0);
}

TEST_CASE("phantoms share the owner's device") {
    NetworkConfig cfg;
    cfg.node_count = 4;
    Network net = Network::deploy(cfg);
    net.node(1).trust.add(CommRecord(4, 5, 0.0, 2.0, 10.0, 9.0));
    const auto ids = net.add_phantoms(1, 3);
    REQUIRE(ids.size() == 3);
    CHECK(net.size() == 7);
    CHECK(net.real_count() == 4);
    for (NodeId p : ids) {
        CHECK(net.physical(p) == 1);
        CHECK(net.position(p) == net.position(1));
        CHECK(net.advertised_trust(p) == net.own_trust(1));
        CHECK(net.own_trust(p) == 0.0);
    }
    const double before = net.node(1).residual_energy;
    net.charge(ids[0], EnergyAction::tx);
    CHECK(net.node(1).residual_energy == doctest::Approx(before - 0.4));

    const auto honest = net.trust_table(false);
    const auto boasting = net.trust_table(true);
    CHECK(honest.size() == 7);
    CHECK(honest[5].tl == 0.0);
    CHECK(boasting[5].tl == net.own_trust(1));

    net.remove_phantoms();
    CHECK(net.size() == 4);
    CHECK_THROWS_AS(net.node(5), std::out_of_range);
}
