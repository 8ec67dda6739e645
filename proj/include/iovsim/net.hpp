#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "iovsim/trust.hpp"
#include "iovsim/types.hpp"

namespace iovsim {

struct Position {
    double x = 0.0;  // m
    double y = 0.0;  // m

    friend bool operator==(const Position&, const Position&) = default;
};

// Euclidean distance in meters.
double distance(Position a, Position b);

enum class EnergyAction : std::uint8_t { tx, rx, sleep, transition, idle };
inline constexpr std::size_t kEnergyActionCount = 5;

// Per-action energy costs in mJ.
struct EnergyModel {
    double tx = 0.4;
    double rx = 0.1;
    double sleep = 0.004;
    double transition = 2.0;
    double idle = 0.0125;

    double cost(EnergyAction a) const;
    void validate() const;
};

// literal: same-cluster candidates lie farther from both endpoints than the
// endpoints are from each other. inverted: candidates lie inside that lens.
enum class InequalityMode : std::uint8_t { literal, inverted };

// Which end of the relative-trust scale picks the next hop.
enum class RtlPreference : std::uint8_t { minimize, maximize };

struct NetworkConfig {
    std::size_t node_count = 1000;
    double area_side = 2500.0;          // m
    double radio_range = 600.0;         // m, also the one-hop cluster width
    std::size_t queue_capacity = 16;    // packets
    std::uint32_t packet_size = 2048;   // bits
    EnergyModel energy_costs;
    std::size_t sector_count = 8;
    InequalityMode inequality_mode = InequalityMode::inverted;
    std::uint64_t rng_seed = 1;
    double initial_energy = 1000.0;     // mJ per node
    double link_rate_bps = 2.0e6;
    double processing_delay_ms = 0.1;
    RtlPreference rtl_preference = RtlPreference::minimize;

    void validate() const;

    // Transmission plus processing time for one packet over one hop.
    double hop_delay_ms() const;
};

enum class Priority : std::uint8_t { control = 0, data = 1 };

struct Packet {
    std::uint64_t id = 0;
    std::uint64_t comm = 0;
    Priority priority = Priority::data;
    bool flood = false;
    bool corrupted = false;
};

// Bounded two-class buffer. Control packets leave before data packets, FIFO
// within a class. A packet arriving at a full buffer is dropped.
class PacketQueue {
public:
    explicit PacketQueue(std::size_t capacity) : capacity_(capacity) {}

    // false when the packet was dropped.
    bool push(const Packet& p);
    std::optional<Packet> pop();

    std::size_t size() const { return control_.size() + data_.size(); }
    bool empty() const { return size() == 0; }
    std::size_t capacity() const { return capacity_; }
    std::size_t free_slots() const { return capacity_ - size(); }
    std::uint64_t drops() const { return drops_; }

private:
    std::size_t capacity_;
    std::deque<Packet> control_;
    std::deque<Packet> data_;
    std::uint64_t drops_ = 0;
};

struct Node {
    NodeId id = kNoNode;
    Position pos;
    double residual_energy = 0.0;  // mJ
    PacketQueue queue{0};
    bool is_attacker = false;
    TrustState trust;
    // Set for sybil phantom identities: the physical device behind them.
    NodeId sybil_owner = kNoNode;

    bool alive() const { return residual_energy > 0.0; }
    bool is_phantom() const { return sybil_owner != kNoNode; }
};

struct ChargeResult {
    double drawn = 0.0;    // mJ actually removed
    bool applied = false;  // false when the node was already dead
    bool died = false;     // this charge exhausted the node
};

// Draws the configured cost, flooring residual energy at 0. Charging a dead
// node changes nothing and reports applied = false.
ChargeResult charge(Node& node, EnergyAction action, const EnergyModel& model);

// Uniform placement over the square, deterministic in config.rng_seed.
std::vector<Node> deploy(const NetworkConfig& config, std::size_t trust_window = 0);

// Running totals of every charge; checked against per-node energy deltas.
struct EnergyLedger {
    double total = 0.0;
    std::array<double, kEnergyActionCount> by_action{};
    std::array<std::uint64_t, kEnergyActionCount> events{};
    std::uint64_t dead_charges = 0;
};

class Network {
public:
    Network(NetworkConfig config, std::vector<Node> nodes);

    static Network deploy(const NetworkConfig& config, std::size_t trust_window = 0);

    const NetworkConfig& config() const { return config_; }
    std::span<const Node> nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    std::size_t real_count() const { return real_count_; }

    Node& node(NodeId id);
    const Node& node(NodeId id) const;

    // Phantoms resolve to their owner; real nodes to themselves.
    NodeId physical(NodeId id) const;
    Position position(NodeId id) const { return node(id).pos; }
    bool alive(NodeId id) const { return node(physical(id)).alive(); }

    // Trust level a node advertises to routing. Phantoms advertise their owner's.
    double advertised_trust(NodeId id) const;
    // Trust level from the node's own evidence (0 for phantoms).
    double own_trust(NodeId id) const;

    // Charges the physical device behind id and books it in the ledger.
    ChargeResult charge(NodeId id, EnergyAction action);
    const EnergyLedger& ledger() const { return ledger_; }

    // Sum of (initial - residual) over real nodes.
    double consumed_energy() const;

    std::vector<NodeId> add_phantoms(NodeId owner, std::size_t count);
    void remove_phantoms();

    // Live identities with their trust levels. Phantoms score their own (empty)
    // evidence unless phantoms_advertise is set, in which case they claim the
    // owner's level.
    std::vector<TrustEntry> trust_table(bool phantoms_advertise) const;

private:
    NetworkConfig config_;
    std::vector<Node> nodes_;
    std::size_t real_count_;
    EnergyLedger ledger_;
};

}  // namespace iovsim
