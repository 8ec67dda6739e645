#include "iovsim/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "iovsim/bfo.hpp"
#include "iovsim/cluster.hpp"
#include "iovsim/error.hpp"
#include "json.hpp"

namespace iovsim {

namespace {

constexpr std::uint64_t kPacketBits = 20;

std::uint64_t packet_id(std::uint64_t comm, std::uint64_t i) { return (comm << kPacketBits) | i; }

}  // namespace

Simulator::Simulator(ScenarioConfig cfg)
    : cfg_((cfg.validate(), std::move(cfg))),
      routing_(RoutingParams::from(cfg_.network)),
      net_(Network::deploy(cfg_.network, cfg_.trust_window)),
      ledger_(cfg_.cost_model),
      traffic_rng_(derive_seed(cfg_.network.rng_seed, Stream::traffic)),
      attack_rng_(derive_seed(cfg_.network.rng_seed, Stream::attack)),
      busy_(net_.size(), false) {}

void Simulator::schedule(EventKind kind, double time, std::uint64_t comm, NodeId from, NodeId to,
                         std::uint64_t packet) {
    Event e;
    e.time = time;
    e.kind = kind;
    e.comm = comm;
    e.from = from;
    e.to = to;
    e.packet = packet;
    events_.push(e);
}

MetricsReport Simulator::run() {
    attack_of_.assign(cfg_.comm_count, std::nullopt);
    if (cfg_.comm_count > 0 && cfg_.attack.enabled && cfg_.attack.fraction > 0.0) {
        marked_ = mark_communications(cfg_.comm_count, cfg_.attack, attack_rng_);
        for (const auto& m : marked_) attack_of_[m.index] = m.kind;
    }
    if (cfg_.comm_count > 0) schedule(EventKind::dispatch, 0.0, 0);
    while (!events_.empty()) handle(events_.pop());

    MetricsReport r;
    r.scenario = cfg_.scenario_label();
    r.seed = cfg_.network.rng_seed;
    r.n_comms = logs_.size();
    r.drops = drops_;
    r.route_failures = route_failures_;
    r.chain_stats = {ledger_.main_length(), ledger_.active_length(), ledger_.rejected()};
    r.cumulative_block_delay_ms = ledger_.cumulative_delay();
    r.total_energy_mj = net_.ledger().total;
    if (logs_.empty()) return r;

    double delay_sum = 0.0;
    std::uint64_t delivered = 0, intended = 0;
    for (const auto& c : logs_) {
        delay_sum += c.ts_complete - c.ts_start;
        delivered += c.delivered;
        intended += c.intended;
    }
    const auto n = static_cast<double>(logs_.size());
    r.avg_delay_ms = delay_sum / n;
    r.avg_energy_mj = net_.ledger().total / n;
    r.avg_throughput_kbps =
        delay_sum > 0.0 ? static_cast<double>(delivered) * cfg_.network.packet_size / delay_sum : 0.0;
    r.pdr_pct = intended ? 100.0 * static_cast<double>(delivered) / static_cast<double>(intended) : 0.0;
    return r;
}

void Simulator::handle(const Event& e) {
    if (trace_) trace_(e);
    switch (e.kind) {
        case EventKind::dispatch: on_dispatch(e); break;
        case EventKind::attack_effect: on_attack(e); break;
        case EventKind::hop: on_hop(e); break;
        case EventKind::deliver: on_deliver(e); break;
        case EventKind::block_submit: on_block(e); break;
    }
}

void Simulator::refresh_miners() {
    const auto table = net_.trust_table(!cfg_.attack.sybil_mitigation);
    if (table.empty()) return;
    const auto want = static_cast<std::size_t>(std::llround(cfg_.miner_fraction * static_cast<double>(table.size())));
    miners_ = select_miners(table, std::clamp<std::size_t>(want, 1, table.size()));
}

void Simulator::resplit() {
    if (ledger_.active_length() < 2 || miners_.empty()) return;
    std::vector<TrustEntry> weights;
    bool any_trust = false;
    for (NodeId m : miners_) {
        weights.push_back({m, net_.own_trust(m)});
        any_trust = any_trust || weights.back().tl > 0.0;
    }
    // Without any evidence yet every miner weighs the same.
    if (!any_trust)
        for (auto& w : weights) w.tl = 1.0;
    BfoConfig bfo = cfg_.bfo;
    bfo.rng_seed = derive_seed(cfg_.bfo.rng_seed ^ mix64(cfg_.network.rng_seed), resplits_++);
    const BfoResult res = optimize(bfo, ledger_.active(), ledger_.cost(), weights);
    ledger_.resplit(res.config);
}

void Simulator::on_dispatch(const Event& e) {
    const std::size_t idx = e.comm;
    if (idx % cfg_.resplit_period == 0) {
        refresh_miners();
        if (cfg_.sidechain_enabled && idx > 0) resplit();
    }

    std::vector<NodeId> alive;
    for (std::size_t i = 0; i < net_.real_count(); ++i)
        if (net_.alive(static_cast<NodeId>(i))) alive.push_back(static_cast<NodeId>(i));
    if (alive.size() < 2 || miners_.empty()) return;  // network exhausted: the run ends here

    const auto a = static_cast<std::size_t>(traffic_rng_.uniform_int(0, static_cast<std::int64_t>(alive.size()) - 1));
    auto b = static_cast<std::size_t>(traffic_rng_.uniform_int(0, static_cast<std::int64_t>(alive.size()) - 2));
    if (b >= a) ++b;

    Active act;
    act.log.index = idx;
    act.log.src = alive[a];
    act.log.dest = alive[b];
    act.log.ts_start = e.time;
    act.log.intended = static_cast<std::uint32_t>(cfg_.packets_per_comm);
    act.log.attack = attack_of_[idx];
    act.energy_at_start.reserve(net_.real_count());
    for (std::size_t i = 0; i < net_.real_count(); ++i) act.energy_at_start.push_back(net_.nodes()[i].residual_energy);
    active_ = std::move(act);

    if (attack_of_[idx]) {
        schedule(EventKind::attack_effect, e.time, idx, kNoNode, kNoNode, static_cast<std::uint64_t>(*attack_of_[idx]));
        return;
    }
    plan_transfer();
    launch(e.time);
}

void Simulator::on_attack(const Event& e) {
    const AttackKind kind = *attack_of_[e.comm];
    AttackContext ctx{net_, ledger_, cfg_.attack, attack_rng_};
    ctx.src = active_->log.src;
    ctx.dest = active_->log.dest;
    ctx.payload = e.comm;
    switch (kind) {
        case AttackKind::sybil:
            apply(kind, ctx);
            plan_transfer();
            break;
        case AttackKind::ddos: {
            plan_transfer();
            const RouteTrace path{active_->log.path, active_->log.route_delivered, active_->log.route_failure, {}, {}};
            ctx.route = &path;
            const AttackEffect eff = apply(kind, ctx);
            drops_ += eff.flood_dropped;
            if (eff.victim != kNoNode) {
                const NodeId v = net_.physical(eff.victim);
                if (!busy_[v]) serve(v, e.time);
            }
            break;
        }
        case AttackKind::mitm: {
            plan_transfer();
            const RouteTrace path{active_->log.path, active_->log.route_delivered, active_->log.route_failure, {}, {}};
            ctx.route = &path;
            active_->corrupting_hop = apply(kind, ctx).corrupting_hop;
            break;
        }
        case AttackKind::finney:
            plan_transfer();
            active_->finney = true;
            break;
    }
    launch(e.time);
}

void Simulator::plan_transfer() {
    Active& act = *active_;
    const ClusterAssignment clusters = assign_all(net_, act.log.dest);
    const RouteTrace trace = plan_route(net_, act.log.src, act.log.dest, clusters, routing_);
    act.log.path = trace.hops;
    act.log.route_delivered = trace.delivered;
    act.log.route_failure = trace.failure;
    if (!trace.delivered) ++route_failures_;
    act.next_on_path.assign(net_.size(), kNoNode);
    act.sent_by.assign(net_.size(), 0);
    for (std::size_t i = 0; i + 1 < trace.hops.size(); ++i) act.next_on_path[trace.hops[i]] = trace.hops[i + 1];
    if (busy_.size() < net_.size()) busy_.resize(net_.size(), false);
}

void Simulator::launch(double t) {
    const Active& act = *active_;
    for (std::uint32_t i = 0; i < act.log.intended; ++i) {
        Packet p;
        p.id = packet_id(act.log.index, i);
        p.comm = act.log.index;
        enqueue(act.log.src, p, t);
    }
}

void Simulator::enqueue(NodeId at, const Packet& p, double t) {
    if (!net_.node(at).queue.push(p)) {
        ++drops_;
        if (!p.flood) {
            ++active_->log.dropped;
            resolve(p, t);
        }
        return;
    }
    if (!busy_[at]) serve(at, t);
}

void Simulator::serve(NodeId at, double t) {
    const double hop = routing_.hop_delay_ms;
    while (true) {
        auto next_packet = net_.node(at).queue.pop();
        if (!next_packet) {
            busy_[at] = false;
            return;
        }
        Packet p = *next_packet;
        if (p.flood) {
            busy_[at] = true;
            in_flight_[p.id] = p;
            schedule(EventKind::hop, t + hop, p.comm, at, kNoNode, p.id);
            return;
        }
        Active& act = *active_;
        const NodeId next = act.next_on_path[at];
        if (next == kNoNode) {  // the planned route ends short of the destination here
            resolve(p, t);
            continue;
        }
        if (!net_.charge(at, EnergyAction::tx).applied) {
            resolve(p, t);
            continue;
        }
        if (at == act.log.src) ++act.log.sent;
        ++act.sent_by[at];
        if (at == act.corrupting_hop) p.corrupted = true;
        busy_[at] = true;
        in_flight_[p.id] = p;
        schedule(EventKind::hop, t + hop, p.comm, at, next, p.id);
        return;
    }
}

void Simulator::on_hop(const Event& e) {
    auto node = in_flight_.extract(e.packet);
    const Packet p = node.mapped();
    busy_[e.from] = false;
    if (e.to != kNoNode) {
        if (!net_.charge(e.to, EnergyAction::rx).applied) {
            resolve(p, e.time);
        } else if (e.to == active_->log.dest) {
            in_flight_[p.id] = p;
            schedule(EventKind::deliver, e.time, p.comm, e.from, e.to, p.id);
        } else {
            enqueue(e.to, p, e.time);
        }
    }
    if (!busy_[e.from]) serve(e.from, e.time);
}

void Simulator::on_deliver(const Event& e) {
    auto node = in_flight_.extract(e.packet);
    const Packet p = node.mapped();
    if (p.corrupted)
        ++active_->log.corrupted;
    else
        ++active_->log.delivered;
    resolve(p, e.time);
}

void Simulator::resolve(const Packet& p, double t) {
    if (p.flood) return;
    Active& act = *active_;
    if (++act.resolved == act.log.intended) schedule(EventKind::block_submit, t, act.log.index);
}

void Simulator::on_block(const Event& e) {
    Active& act = *active_;
    const NodeId miner = miners_[miner_cursor_++ % miners_.size()];
    AppendResult res;
    if (act.finney) {
        AttackContext ctx{net_, ledger_, cfg_.attack, attack_rng_};
        ctx.miner = miner;
        ctx.payload = e.comm;
        res = *apply(AttackKind::finney, ctx).block;
    } else {
        res = ledger_.append_active(ledger_.make_block(e.comm, miner));
    }
    act.log.block_delay_ms = res.delay_ms;
    act.log.block_accepted = res.accepted;
    finish_comm(e.time + res.delay_ms);
}

void Simulator::finish_comm(double t_complete) {
    Active& act = *active_;
    act.log.ts_complete = t_complete;
    if (act.log.sent > 0) {
        for (NodeId id : act.log.path) {
            if (id >= net_.real_count() || act.sent_by[id] == 0) continue;
            Node& n = net_.node(id);
            const double e0 = act.energy_at_start[id];
            if (!CommRecord::is_valid(act.log.delivered, act.log.sent, act.log.ts_start, t_complete, e0,
                                      n.residual_energy))
                continue;
            const CommRecord rec(act.log.delivered, act.log.sent, act.log.ts_start, t_complete, e0, n.residual_energy);
            n.trust.add(rec);
            if (id == act.log.src) act.log.source_record = rec;
        }
    }
    net_.remove_phantoms();
    const std::size_t next = act.log.index + 1;
    logs_.push_back(std::move(act.log));
    active_.reset();
    if (next < cfg_.comm_count) schedule(EventKind::dispatch, t_complete, next);
}

MetricsReport run_scenario(const ScenarioConfig& cfg) { return Simulator(cfg).run(); }

std::vector<SweepCell> sweep(const ScenarioConfig& base, std::span<const std::size_t> comm_counts,
                             std::span<const std::uint64_t> seeds, unsigned parallelism) {
    if (comm_counts.empty() || seeds.empty()) throw std::invalid_argument("sweep: counts and seeds must be non-empty");
    std::vector<SweepCell> cells;
    for (std::size_t n : comm_counts)
        for (std::uint64_t s : seeds) cells.push_back({n, s, std::nullopt, {}});

    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (std::size_t i = cursor++; i < cells.size(); i = cursor++) {
            SweepCell& cell = cells[i];
            try {
                ScenarioConfig cfg = base;
                cfg.comm_count = cell.comm_count;
                cfg.network.rng_seed = cell.seed;
                cell.report = run_scenario(cfg);
            } catch (const std::exception& ex) {
                cell.error = ex.what();
            }
        }
    };
    const unsigned threads = std::clamp<unsigned>(parallelism, 1, static_cast<unsigned>(cells.size()));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return cells;
}

std::string format_csv(std::span<const MetricsReport> reports) {
    std::string out = kCsvHeader;
    out += '\n';
    char buf[512];
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof buf, "%s,%llu,%zu,%.4f,%.4f,%.4f,%.4f,%llu,%llu\n", r.scenario.c_str(),
                      static_cast<unsigned long long>(r.seed), r.n_comms, r.avg_delay_ms, r.avg_energy_mj,
                      r.avg_throughput_kbps, r.pdr_pct, static_cast<unsigned long long>(r.drops),
                      static_cast<unsigned long long>(r.route_failures));
        out += buf;
    }
    return out;
}

void emit_csv(std::span<const MetricsReport> reports, const std::filesystem::path& path) {
    if (reports.empty()) throw std::invalid_argument("emit_csv: no reports");
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    const std::string text = format_csv(reports);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    f.flush();
    if (!f) throw IoError("failed writing '" + path.string() + "'");
}

std::string event_to_json(const Event& e) {
    nlohmann::json j;
    j["t"] = e.time;
    j["seq"] = e.seq;
    j["kind"] = std::string(to_string(e.kind));
    j["comm"] = e.comm;
    j["from"] = e.from == kNoNode ? nlohmann::json() : nlohmann::json(e.from);
    j["to"] = e.to == kNoNode ? nlohmann::json() : nlohmann::json(e.to);
    if (e.kind == EventKind::attack_effect)
        j["attack"] = std::string(to_string(static_cast<AttackKind>(e.packet)));
    else
        j["packet"] = e.packet;
    return j.dump();
}

}  // namespace iovsim
