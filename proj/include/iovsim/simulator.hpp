#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "iovsim/attacks.hpp"
#include "iovsim/events.hpp"
#include "iovsim/ledger.hpp"
#include "iovsim/net.hpp"
#include "iovsim/routing.hpp"
#include "iovsim/scenario.hpp"

namespace iovsim {

struct ChainStats {
    std::size_t main_length = 0;
    std::size_t active_length = 0;
    std::uint64_t rejected = 0;
};

struct MetricsReport {
    std::string scenario;
    std::uint64_t seed = 0;
    std::size_t n_comms = 0;
    double avg_delay_ms = 0.0;
    double avg_energy_mj = 0.0;
    double avg_throughput_kbps = 0.0;
    double pdr_pct = 0.0;
    std::uint64_t drops = 0;
    std::uint64_t route_failures = 0;
    ChainStats chain_stats;
    double cumulative_block_delay_ms = 0.0;
    double total_energy_mj = 0.0;
};

// What happened to one communication.
struct CommLog {
    std::size_t index = 0;
    NodeId src = kNoNode;
    NodeId dest = kNoNode;
    double ts_start = 0.0;
    double ts_complete = 0.0;
    std::uint32_t intended = 0;   // packets the source meant to send
    std::uint32_t sent = 0;       // packets the source put on air
    std::uint32_t delivered = 0;  // intact packets at the destination
    std::uint32_t corrupted = 0;
    std::uint32_t dropped = 0;    // queue overflow
    bool route_delivered = false;
    RouteFailure route_failure = RouteFailure::none;
    std::vector<NodeId> path;
    std::optional<AttackKind> attack;
    double block_delay_ms = 0.0;
    bool block_accepted = false;
    // CommRecord logged to the source, when it was constructible.
    std::optional<CommRecord> source_record;
};

class Simulator {
public:
    explicit Simulator(ScenarioConfig cfg);

    void set_trace(TraceSink sink) { trace_ = std::move(sink); }

    MetricsReport run();

    const ScenarioConfig& config() const { return cfg_; }
    const Network& network() const { return net_; }
    const Ledger& ledger() const { return ledger_; }
    const std::vector<CommLog>& comms() const { return logs_; }
    const std::vector<MarkedComm>& marked() const { return marked_; }
    const std::vector<NodeId>& miners() const { return miners_; }
    std::uint64_t events_processed() const { return events_.processed(); }

private:
    struct Active;

    void schedule(EventKind kind, double time, std::uint64_t comm, NodeId from = kNoNode, NodeId to = kNoNode,
                  std::uint64_t packet = 0);
    void handle(const Event& e);
    void on_dispatch(const Event& e);
    void on_attack(const Event& e);
    void on_hop(const Event& e);
    void on_deliver(const Event& e);
    void on_block(const Event& e);

    void refresh_miners();
    void resplit();
    void plan_transfer();
    void launch(double t);
    void enqueue(NodeId at, const Packet& p, double t);
    void serve(NodeId at, double t);
    void resolve(const Packet& p, double t);
    void finish_comm(double t_complete);

    ScenarioConfig cfg_;
    RoutingParams routing_;
    Network net_;
    Ledger ledger_;
    EventQueue events_;
    TraceSink trace_;
    Rng traffic_rng_;
    Rng attack_rng_;
    std::vector<MarkedComm> marked_;
    std::vector<std::optional<AttackKind>> attack_of_;
    std::vector<NodeId> miners_;
    std::size_t miner_cursor_ = 0;
    std::size_t resplits_ = 0;
    std::vector<bool> busy_;
    std::unordered_map<std::uint64_t, Packet> in_flight_;
    std::uint64_t drops_ = 0;
    std::uint64_t route_failures_ = 0;
    std::vector<CommLog> logs_;

    struct Active {
        CommLog log;
        std::vector<NodeId> next_on_path;  // indexed by node id
        std::vector<std::uint32_t> sent_by;
        std::vector<double> energy_at_start;
        NodeId corrupting_hop = kNoNode;
        std::uint32_t resolved = 0;
        bool finney = false;
    };
    std::optional<Active> active_;
};

MetricsReport run_scenario(const ScenarioConfig& cfg);

struct SweepCell {
    std::size_t comm_count = 0;
    std::uint64_t seed = 0;
    std::optional<MetricsReport> report;
    std::string error;
};

// Every (count, seed) pair, counts outer. Runs are independent; a failing run
// records its error and the rest still execute. Output order does not depend
// on parallelism.
std::vector<SweepCell> sweep(const ScenarioConfig& base, std::span<const std::size_t> comm_counts,
                             std::span<const std::uint64_t> seeds, unsigned parallelism = 1);

inline constexpr const char* kCsvHeader =
    "scenario,seed,n_comms,avg_delay_ms,avg_energy_mj,avg_throughput_kbps,pdr_pct,drops,route_failures";

std::string format_csv(std::span<const MetricsReport> reports);
void emit_csv(std::span<const MetricsReport> reports, const std::filesystem::path& path);

// One JSON object per event, newline-terminated.
std::string event_to_json(const Event& e);

}  // namespace iovsim
