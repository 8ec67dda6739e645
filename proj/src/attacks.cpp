#include "iovsim/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "iovsim/error.hpp"

namespace iovsim {

std::string_view to_string(AttackKind k) {
    switch (k) {
        case AttackKind::sybil: return "sybil";
        case AttackKind::ddos: return "ddos";
        case AttackKind::finney: return "finney";
        case AttackKind::mitm: return "mitm";
    }
    return "unknown";
}

std::optional<AttackKind> attack_kind_from(std::string_view name) {
    for (AttackKind k : kAttackKinds)
        if (to_string(k) == name) return k;
    return std::nullopt;
}

void AttackProfile::validate() const {
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw ConfigError("attack.fraction must lie in [0, 1]");
    double sum = 0.0;
    for (double w : mix.weights()) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("attack.mix weights must be finite and >= 0");
        sum += w;
    }
    if (!(sum > 0.0)) throw ConfigError("attack.mix weights must sum to > 0");
}

std::vector<MarkedComm> mark_communications(std::size_t total, const AttackProfile& profile, Rng& rng) {
    if (total < 1) throw std::invalid_argument("mark_communications: total must be >= 1");
    const auto count = static_cast<std::size_t>(std::llround(profile.fraction * static_cast<double>(total)));
    auto picks = rng.sample_without_replacement(total, std::min(count, total));
    const auto weights = profile.mix.weights();
    std::vector<MarkedComm> out;
    out.reserve(picks.size());
    for (std::size_t idx : picks) out.push_back({idx, kAttackKinds[rng.weighted_index(weights)]});
    std::sort(out.begin(), out.end(), [](const MarkedComm& a, const MarkedComm& b) { return a.index < b.index; });
    return out;
}

NodeId pick_attacker(const Network& net, NodeId src, NodeId dest, NodeId near, Rng& rng) {
    std::vector<NodeId> close, any;
    const double range = net.config().radio_range;
    for (std::size_t i = 0; i < net.real_count(); ++i) {
        const auto id = static_cast<NodeId>(i);
        if (id == src || id == dest || !net.alive(id)) continue;
        any.push_back(id);
        if (near != kNoNode && distance(net.position(id), net.position(near)) <= range) close.push_back(id);
    }
    const auto& pool = close.empty() ? any : close;
    if (pool.empty()) return kNoNode;
    return pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
}

std::vector<NodeId> apply_sybil(Network& net, NodeId attacker, std::size_t count) {
    net.node(attacker).is_attacker = true;
    return net.add_phantoms(attacker, count);
}

std::pair<std::size_t, std::size_t> apply_ddos(Network& net, NodeId attacker, NodeId victim, std::size_t count,
                                               std::uint64_t comm) {
    net.node(attacker).is_attacker = true;
    Node& v = net.node(net.physical(victim));
    std::size_t accepted = 0, dropped = 0;
    for (std::size_t i = 0; i < count; ++i) {
        net.charge(attacker, EnergyAction::tx);
        net.charge(v.id, EnergyAction::rx);
        Packet p;
        p.comm = comm;
        p.flood = true;
        p.id = (comm << 20) | (0x80000ULL + i);
        if (v.queue.push(p))
            ++accepted;
        else
            ++dropped;
    }
    return {accepted, dropped};
}

AppendResult apply_finney(Ledger& ledger, NodeId miner, std::uint64_t payload) {
    return ledger.append_active(ledger.forge_block(payload, miner));
}

NodeId apply_mitm(const RouteTrace& route, Rng& rng) {
    if (route.hops.empty()) return kNoNode;
    // Relays are hops[1 .. n-2]; a route without relays is intercepted on the source's link.
    const std::size_t last_relay = route.delivered ? route.hops.size() - 2 : route.hops.size() - 1;
    if (last_relay < 1) return route.hops.front();
    return route.hops[static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(last_relay)))];
}

AttackEffect apply(AttackKind kind, AttackContext& ctx) {
    AttackEffect e;
    e.kind = kind;
    switch (kind) {
        case AttackKind::sybil:
            e.attacker = pick_attacker(ctx.net, ctx.src, ctx.dest, ctx.src, ctx.rng);
            if (e.attacker != kNoNode) e.phantoms = apply_sybil(ctx.net, e.attacker, ctx.profile.sybil_identity_count);
            break;
        case AttackKind::ddos: {
            if (ctx.route && ctx.route->hops.size() >= 2)
                e.victim = ctx.route->hops[1];
            else
                e.victim = ctx.src;
            e.attacker = pick_attacker(ctx.net, ctx.src, ctx.dest, e.victim, ctx.rng);
            if (e.attacker == kNoNode) break;
            const auto [ok, lost] =
                apply_ddos(ctx.net, e.attacker, e.victim, ctx.profile.flood_multiplier, ctx.payload);
            e.flood_accepted = ok;
            e.flood_dropped = lost;
            break;
        }
        case AttackKind::finney:
            e.attacker = ctx.miner;
            e.block = apply_finney(ctx.ledger, ctx.miner, ctx.payload);
            break;
        case AttackKind::mitm:
            if (!ctx.route) throw std::invalid_argument("mitm attack needs a planned route");
            e.corrupting_hop = apply_mitm(*ctx.route, ctx.rng);
            e.attacker = e.corrupting_hop;
            if (e.attacker != kNoNode && e.attacker != ctx.src) ctx.net.node(ctx.net.physical(e.attacker)).is_attacker = true;
            break;
    }
    return e;
}

}  // namespace iovsim
