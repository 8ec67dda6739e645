#include <stdexcept>
#include <algorithm>
#include <set>

#include "doctest.h"
#include "iovsim/attacks.hpp"
#include "iovsim/error.hpp"
#include "iovsim/simulator.hpp"

using namespace iovsim;

namespace {

ScenarioConfig small_scenario(std::uint64_t seed) {
    ScenarioConfig cfg;
    cfg.network.node_count = 100;
    cfg.network.area_side = 1000;
    cfg.network.radio_range = 250;
    cfg.network.rng_seed = seed;
    cfg.comm_count = 200;
    return cfg;
}

}  // namespace

TEST_CASE("kind names round-trip") {
    for (AttackKind k : kAttackKinds) CHECK(attack_kind_from(to_string(k)) == k);
    CHECK_FALSE(attack_kind_from("eclipse"));
}

TEST_CASE("profile validation") {
    AttackProfile p;
    CHECK_NOTHROW(p.validate());
    p.fraction = 1.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.fraction = 0.1;
    p.mix = {0, 0, 0, 0};
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.mix = {1, -1, 0, 0};
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("marking") {
    AttackProfile p;
    Rng rng(1);
    const auto m = mark_communications(500, p, rng);
    CHECK(m.size() == 50);
    std::set<std::size_t> idx;
    for (const auto& x : m) idx.insert(x.index);
    CHECK(idx.size() == 50);
    CHECK(*idx.rbegin() < 500);
    CHECK(std::is_sorted(m.begin(), m.end(), [](auto& a, auto& b) { return a.index < b.index; }));

    Rng again(1);
    CHECK(mark_communications(500, p, again) == m);

    p.fraction = 0;
    CHECK(mark_communications(500, p, rng).empty());
    p.fraction = 1;
    p.mix = {0, 0, 1, 0};
    const auto all = mark_communications(40, p, rng);
    CHECK(all.size() == 40);
    for (const auto& x : all) CHECK(x.kind == AttackKind::finney);
    CHECK_THROWS_AS(mark_communications(0, p, rng), std::invalid_argument);
}

TEST_CASE("finney leaves the chain unchanged") {
    Ledger l(ChainCostModel{1, 1, 1, 1});
    for (int i = 0; i < 12; ++i) l.append_active(l.make_block(static_cast<std::uint64_t>(i), 0));
    const auto r = apply_finney(l, 3, 99);
    CHECK_FALSE(r.accepted);
    CHECK(r.delay_ms == 12.0);
    CHECK(l.main_length() == 12);
    CHECK(l.rejected() == 1);
}

TEST_CASE("ddos queue arithmetic") {
    NetworkConfig cfg;
    cfg.node_count = 5;
    cfg.queue_capacity = 6;
    for (std::size_t preload = 0; preload <= 6; ++preload) {
        for (std::size_t q : {0u, 3u, 10u}) {
            Network net = Network::deploy(cfg);
            for (std::size_t i = 0; i < preload; ++i) net.node(2).queue.push({i, 0});
            const double e_att = net.node(1).residual_energy, e_vic = net.node(2).residual_energy;
            const auto [ok, lost] = apply_ddos(net, 1, 2, q, 7);
            const std::size_t free = 6 - preload;
            CHECK(lost == (q > free ? q - free : 0));
            CHECK(ok + lost == q);
            CHECK(net.node(2).queue.size() == preload + ok);
            CHECK(net.node(1).residual_energy == doctest::Approx(e_att - 0.4 * static_cast<double>(q)));
            CHECK(net.node(2).residual_energy == doctest::Approx(e_vic - 0.1 * static_cast<double>(q)));
        }
    }
}

TEST_CASE("sybil phantoms") {
    NetworkConfig cfg;
    cfg.node_count = 10;
    Network net = Network::deploy(cfg);
    const auto ids = apply_sybil(net, 4, 5);
    CHECK(ids.size() == 5);
    CHECK(net.node(4).is_attacker);
    for (NodeId p : ids) CHECK(net.position(p) == net.position(4));
}

TEST_CASE("mitm picks a relay") {
    Rng rng(3);
    RouteTrace t;
    t.hops = {4, 9, 2, 7};
    t.delivered = true;
    for (int i = 0; i < 50; ++i) {
        const NodeId m = apply_mitm(t, rng);
        CHECK((m == 9 || m == 2));
    }
    t.hops = {4, 7};
    CHECK(apply_mitm(t, rng) == 4);
}

TEST_CASE("attacker choice avoids the endpoints") {
    NetworkConfig cfg;
    cfg.node_count = 30;
    cfg.area_side = 1000;
    cfg.radio_range = 200;
    const Network net = Network::deploy(cfg);
    Rng rng(2);
    for (int i = 0; i < 100; ++i) {
        const NodeId a = pick_attacker(net, 0, 1, 0, rng);
        CHECK(a != 0);
        CHECK(a != 1);
        CHECK(a < 30);
    }
}

TEST_CASE("attacks do not disturb traffic selection") {
    auto cfg = small_scenario(4);
    Simulator off(cfg);
    off.run();
    cfg.attack.enabled = true;
    Simulator on(cfg);
    on.run();
    REQUIRE(on.comms().size() == off.comms().size());
    for (std::size_t i = 0; i < on.comms().size(); ++i) {
        CHECK(on.comms()[i].src == off.comms()[i].src);
        CHECK(on.comms()[i].dest == off.comms()[i].dest);
    }
    CHECK(on.marked().size() == 20);
}

TEST_CASE("all-mitm traffic lowers delivery") {
    auto cfg = small_scenario(5);
    const auto clean = run_scenario(cfg);
    cfg.attack.enabled = true;
    cfg.attack.fraction = 1.0;
    cfg.attack.mix = {0, 0, 0, 1};
    const auto hit = run_scenario(cfg);
    CHECK(hit.pdr_pct < clean.pdr_pct);
}

TEST_CASE("finney blocks are all rejected") {
    auto cfg = small_scenario(6);
    cfg.attack.enabled = true;
    cfg.attack.mix = {0, 0, 1, 0};
    Simulator sim(cfg);
    const auto r = sim.run();
    CHECK(r.chain_stats.rejected == sim.marked().size());
    CHECK(r.chain_stats.main_length == cfg.comm_count - sim.marked().size());
}

TEST_CASE("phantoms never mine under mitigation") {
    auto cfg = small_scenario(7);
    cfg.attack.enabled = true;
    cfg.attack.fraction = 1.0;
    cfg.attack.mix = {1, 0, 0, 0};
    cfg.resplit_period = 1;
    Simulator sim(cfg);
    sim.run();
    for (NodeId m : sim.miners()) CHECK(m < cfg.network.node_count);

    // The phantom identities themselves carry no evidence.
    Network net = Network::deploy(cfg.network);
    for (NodeId i = 0; i < 20; ++i) net.node(i).trust.add(CommRecord(3, 4, 0, 1, 5, 4));
    const auto ph = apply_sybil(net, 3, 5);
    const auto table = net.trust_table(false);
    const auto top = select_miners(table, 20);
    for (NodeId p : ph) CHECK(std::find(top.begin(), top.end(), p) == top.end());
    const auto boast = select_miners(net.trust_table(true), 25);
    CHECK(std::count_if(boast.begin(), boast.end(), [&](NodeId id) { return id >= 100; }) == 5);
}
