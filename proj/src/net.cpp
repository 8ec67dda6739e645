#include "iovsim/net.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "iovsim/error.hpp"
#include "iovsim/rng.hpp"

namespace iovsim {

double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

double EnergyModel::cost(EnergyAction a) const {
    switch (a) {
        case EnergyAction::tx: return tx;
        case EnergyAction::rx: return rx;
        case EnergyAction::sleep: return sleep;
        case EnergyAction::transition: return transition;
        case EnergyAction::idle: return idle;
    }
    return 0.0;
}

void EnergyModel::validate() const {
    for (double c : {tx, rx, sleep, transition, idle})
        if (!(c >= 0.0) || !std::isfinite(c)) throw ConfigError("energy costs must be finite and >= 0");
}

void NetworkConfig::validate() const {
    if (node_count < 2) throw ConfigError("node_count must be >= 2, got " + std::to_string(node_count));
    if (!(area_side > 0.0) || !std::isfinite(area_side)) throw ConfigError("area_side must be > 0");
    if (!(radio_range > 0.0) || !std::isfinite(radio_range)) throw ConfigError("radio_range must be > 0");
    if (queue_capacity < 1) throw ConfigError("queue_capacity must be >= 1");
    if (packet_size < 1) throw ConfigError("packet_size must be >= 1 bit");
    if (sector_count < 1) throw ConfigError("sector_count must be >= 1");
    if (!(initial_energy > 0.0) || !std::isfinite(initial_energy)) throw ConfigError("initial_energy must be > 0");
    if (!(link_rate_bps > 0.0) || !std::isfinite(link_rate_bps)) throw ConfigError("link_rate_bps must be > 0");
    if (!(processing_delay_ms >= 0.0) || !std::isfinite(processing_delay_ms))
        throw ConfigError("processing_delay_ms must be >= 0");
    energy_costs.validate();
}

double NetworkConfig::hop_delay_ms() const {
    return static_cast<double>(packet_size) / link_rate_bps * 1000.0 + processing_delay_ms;
}

bool PacketQueue::push(const Packet& p) {
    if (size() >= capacity_) {
        ++drops_;
        return false;
    }
    (p.priority == Priority::control ? control_ : data_).push_back(p);
    return true;
}

std::optional<Packet> PacketQueue::pop() {
    auto& q = !control_.empty() ? control_ : data_;
    if (q.empty()) return std::nullopt;
    Packet p = q.front();
    q.pop_front();
    return p;
}

ChargeResult charge(Node& node, EnergyAction action, const EnergyModel& model) {
    ChargeResult res;
    if (!node.alive()) return res;
    const double cost = model.cost(action);
    res.applied = true;
    res.drawn = cost < node.residual_energy ? cost : node.residual_energy;
    node.residual_energy = cost < node.residual_energy ? node.residual_energy - cost : 0.0;
    res.died = !node.alive();
    return res;
}

std::vector<Node> deploy(const NetworkConfig& config, std::size_t trust_window) {
    config.validate();
    Rng rng(derive_seed(config.rng_seed, Stream::deploy));
    std::vector<Node> nodes;
    nodes.reserve(config.node_count);
    for (std::size_t i = 0; i < config.node_count; ++i) {
        Node n;
        n.id = static_cast<NodeId>(i);
        n.pos.x = rng.uniform(0.0, config.area_side);
        n.pos.y = rng.uniform(0.0, config.area_side);
        n.residual_energy = config.initial_energy;
        n.queue = PacketQueue(config.queue_capacity);
        n.trust = TrustState(trust_window);
        nodes.push_back(std::move(n));
    }
    return nodes;
}

Network::Network(NetworkConfig config, std::vector<Node> nodes)
    : config_(std::move(config)), nodes_(std::move(nodes)), real_count_(nodes_.size()) {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (nodes_[i].id != i) throw std::invalid_argument("Network: node ids must equal their index");
}

Network Network::deploy(const NetworkConfig& config, std::size_t trust_window) {
    return Network(config, iovsim::deploy(config, trust_window));
}

Node& Network::node(NodeId id) {
    if (id >= nodes_.size()) throw std::out_of_range("unknown node id " + std::to_string(id));
    return nodes_[id];
}

const Node& Network::node(NodeId id) const {
    if (id >= nodes_.size()) throw std::out_of_range("unknown node id " + std::to_string(id));
    return nodes_[id];
}

NodeId Network::physical(NodeId id) const {
    const Node& n = node(id);
    return n.is_phantom() ? n.sybil_owner : id;
}

double Network::advertised_trust(NodeId id) const { return own_trust(physical(id)); }

double Network::own_trust(NodeId id) const {
    const Node& n = node(id);
    if (n.is_phantom()) return 0.0;
    return n.trust.trust_level(n.residual_energy);
}

ChargeResult Network::charge(NodeId id, EnergyAction action) {
    const auto res = iovsim::charge(node(physical(id)), action, config_.energy_costs);
    const auto a = static_cast<std::size_t>(action);
    if (res.applied) {
        ledger_.total += res.drawn;
        ledger_.by_action[a] += res.drawn;
        ++ledger_.events[a];
    } else {
        ++ledger_.dead_charges;
    }
    return res;
}

double Network::consumed_energy() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < real_count_; ++i) sum += config_.initial_energy - nodes_[i].residual_energy;
    return sum;
}

std::vector<NodeId> Network::add_phantoms(NodeId owner, std::size_t count) {
    if (node(owner).is_phantom()) throw std::invalid_argument("phantom owner must be a real node");
    std::vector<NodeId> ids;
    for (std::size_t i = 0; i < count; ++i) {
        Node n;
        n.id = static_cast<NodeId>(nodes_.size());
        n.pos = nodes_[owner].pos;
        n.residual_energy = 0.0;  // energy lives on the owner
        n.queue = PacketQueue(config_.queue_capacity);
        n.sybil_owner = owner;
        n.is_attacker = true;
        ids.push_back(n.id);
        nodes_.push_back(std::move(n));
    }
    return ids;
}

void Network::remove_phantoms() { nodes_.resize(real_count_); }

std::vector<TrustEntry> Network::trust_table(bool phantoms_advertise) const {
    std::vector<TrustEntry> out;
    for (const Node& n : nodes_) {
        if (!alive(n.id)) continue;
        const double tl = n.is_phantom() && phantoms_advertise ? advertised_trust(n.id) : own_trust(n.id);
        out.push_back({n.id, tl});
    }
    return out;
}

}  // namespace iovsim
