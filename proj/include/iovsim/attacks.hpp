#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "iovsim/ledger.hpp"
#include "iovsim/net.hpp"
#include "iovsim/rng.hpp"
#include "iovsim/routing.hpp"

namespace iovsim {

enum class AttackKind : std::uint8_t { sybil, ddos, finney, mitm };
inline constexpr std::array kAttackKinds{AttackKind::sybil, AttackKind::ddos, AttackKind::finney, AttackKind::mitm};

std::string_view to_string(AttackKind k);
std::optional<AttackKind> attack_kind_from(std::string_view name);

struct AttackMix {
    double sybil = 1.0;
    double ddos = 1.0;
    double finney = 1.0;
    double mitm = 1.0;

    std::vector<double> weights() const { return {sybil, ddos, finney, mitm}; }
};

struct AttackProfile {
    bool enabled = false;
    double fraction = 0.10;
    AttackMix mix;
    std::size_t sybil_identity_count = 5;
    std::size_t flood_multiplier = 10;
    // Miner selection scores phantoms by their own (empty) evidence.
    bool sybil_mitigation = true;

    void validate() const;
};

struct MarkedComm {
    std::size_t index;
    AttackKind kind;

    friend bool operator==(const MarkedComm&, const MarkedComm&) = default;
};

// round(fraction * total) communication indices chosen without replacement,
// each with a kind drawn from the mix. Sorted by index.
std::vector<MarkedComm> mark_communications(std::size_t total, const AttackProfile& profile, Rng& rng);

// Everything an attack may touch for one communication.
struct AttackContext {
    Network& net;
    Ledger& ledger;
    const AttackProfile& profile;
    Rng& rng;
    NodeId src = kNoNode;
    NodeId dest = kNoNode;
    const RouteTrace* route = nullptr;  // planned path, when known
    NodeId miner = kNoNode;             // for block submission
    std::uint64_t payload = 0;
};

struct AttackEffect {
    AttackKind kind = AttackKind::sybil;
    NodeId attacker = kNoNode;
    NodeId victim = kNoNode;
    std::vector<NodeId> phantoms;     // sybil
    std::size_t flood_accepted = 0;   // ddos
    std::size_t flood_dropped = 0;    // ddos
    std::optional<AppendResult> block;  // finney
    NodeId corrupting_hop = kNoNode;  // mitm: packets sent by this node arrive corrupted
};

// Picks an attacker that is neither src nor dest, preferring nodes in radio
// range of `near`.
NodeId pick_attacker(const Network& net, NodeId src, NodeId dest, NodeId near, Rng& rng);

// sybil: phantom identities co-located with the attacker join the network.
std::vector<NodeId> apply_sybil(Network& net, NodeId attacker, std::size_t count);

// ddos: `count` flood packets from attacker land in the victim's queue at once.
// Returns (accepted, dropped). Charges tx at the attacker and rx at the victim
// for each packet.
std::pair<std::size_t, std::size_t> apply_ddos(Network& net, NodeId attacker, NodeId victim, std::size_t count,
                                               std::uint64_t comm);

// finney: a block with a broken link is submitted to the active segment.
AppendResult apply_finney(Ledger& ledger, NodeId miner, std::uint64_t payload);

// mitm: a relay on the route (or, for a direct route, the source's link) that
// corrupts what it forwards.
NodeId apply_mitm(const RouteTrace& route, Rng& rng);

AttackEffect apply(AttackKind kind, AttackContext& ctx);

}  // namespace iovsim
