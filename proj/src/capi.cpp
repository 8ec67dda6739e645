#include "iovsim/iovsim.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "iovsim/bfo.hpp"
#include "iovsim/error.hpp"
#include "iovsim/scenario.hpp"
#include "iovsim/simulator.hpp"

struct iovsim_config {
    iovsim::ScenarioConfig cfg;
};

struct iovsim_report_set {
    std::vector<iovsim::MetricsReport> reports;
};

namespace {

thread_local std::string last_error;

iovsim_status fail(iovsim_status code, const std::string& msg) {
    last_error = msg;
    return code;
}

template <class F>
iovsim_status guarded(F&& body) {
    try {
        last_error.clear();
        return body();
    } catch (const iovsim::ConfigError& e) {
        return fail(IOVSIM_ERR_CONFIG, e.what());
    } catch (const iovsim::IoError& e) {
        return fail(IOVSIM_ERR_IO, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(IOVSIM_ERR_ARGUMENT, e.what());
    } catch (const std::out_of_range& e) {
        return fail(IOVSIM_ERR_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(IOVSIM_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(IOVSIM_ERR_INTERNAL, "unknown error");
    }
}

iovsim_status adopt(iovsim::ScenarioConfig cfg, iovsim_config** out) {
    cfg.validate();
    *out = new iovsim_config{std::move(cfg)};
    return IOVSIM_OK;
}

}  // namespace

extern "C" {

const char* iovsim_version(void) { return "0.1.0"; }

const char* iovsim_last_error(void) { return last_error.c_str(); }

iovsim_status iovsim_config_default(iovsim_config** out) {
    if (!out) return fail(IOVSIM_ERR_ARGUMENT, "out is null");
    return guarded([&] { return adopt(iovsim::ScenarioConfig{}, out); });
}

iovsim_status iovsim_config_from_file(const char* path, iovsim_config** out) {
    if (!path || !out) return fail(IOVSIM_ERR_ARGUMENT, "null argument");
    return guarded([&] { return adopt(iovsim::load_config(path), out); });
}

iovsim_status iovsim_config_from_json(const char* json, iovsim_config** out) {
    if (!json || !out) return fail(IOVSIM_ERR_ARGUMENT, "null argument");
    return guarded([&] { return adopt(iovsim::parse_config(json), out); });
}

void iovsim_config_free(iovsim_config* cfg) { delete cfg; }

iovsim_status iovsim_config_set_seed(iovsim_config* cfg, uint64_t seed) {
    if (!cfg) return fail(IOVSIM_ERR_ARGUMENT, "config is null");
    cfg->cfg.network.rng_seed = seed;
    last_error.clear();
    return IOVSIM_OK;
}

iovsim_status iovsim_config_set_attacks(iovsim_config* cfg, int enabled) {
    if (!cfg) return fail(IOVSIM_ERR_ARGUMENT, "config is null");
    cfg->cfg.attack.enabled = enabled != 0;
    last_error.clear();
    return IOVSIM_OK;
}

iovsim_status iovsim_config_set_comm_count(iovsim_config* cfg, uint64_t count) {
    if (!cfg) return fail(IOVSIM_ERR_ARGUMENT, "config is null");
    cfg->cfg.comm_count = count;
    last_error.clear();
    return IOVSIM_OK;
}

iovsim_status iovsim_run(const iovsim_config* cfg, const char* trace_path, iovsim_report_set** out) {
    if (!cfg || !out) return fail(IOVSIM_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        iovsim::Simulator sim(cfg->cfg);
        std::ofstream trace;
        if (trace_path) {
            trace.open(trace_path, std::ios::binary | std::ios::trunc);
            if (!trace) throw iovsim::IoError(std::string("cannot open '") + trace_path + "' for writing");
            sim.set_trace([&trace](const iovsim::Event& e) { trace << iovsim::event_to_json(e) << '\n'; });
        }
        auto set = std::make_unique<iovsim_report_set>();
        set->reports.push_back(sim.run());
        if (trace_path) {
            trace.flush();
            if (!trace) throw iovsim::IoError(std::string("failed writing '") + trace_path + "'");
        }
        *out = set.release();
        return IOVSIM_OK;
    });
}

iovsim_status iovsim_sweep(const iovsim_config* cfg, const uint64_t* counts, size_t n_counts, const uint64_t* seeds,
                           size_t n_seeds, unsigned parallelism, iovsim_report_set** out) {
    if (!cfg || !counts || !seeds || !out) return fail(IOVSIM_ERR_ARGUMENT, "null argument");
    if (n_counts == 0 || n_seeds == 0) return fail(IOVSIM_ERR_ARGUMENT, "counts and seeds must be non-empty");
    return guarded([&] {
        const std::vector<std::size_t> c(counts, counts + n_counts);
        const std::vector<std::uint64_t> s(seeds, seeds + n_seeds);
        const auto cells = iovsim::sweep(cfg->cfg, c, s, parallelism);
        auto set = std::make_unique<iovsim_report_set>();
        for (const auto& cell : cells) {
            if (!cell.report)
                throw std::runtime_error("run with " + std::to_string(cell.comm_count) + " comms, seed " +
                                         std::to_string(cell.seed) + " failed: " + cell.error);
            set->reports.push_back(*cell.report);
        }
        *out = set.release();
        return IOVSIM_OK;
    });
}

size_t iovsim_report_count(const iovsim_report_set* set) { return set ? set->reports.size() : 0; }

iovsim_status iovsim_report_get(const iovsim_report_set* set, size_t index, iovsim_metrics* out) {
    if (!set || !out) return fail(IOVSIM_ERR_ARGUMENT, "null argument");
    if (index >= set->reports.size()) return fail(IOVSIM_ERR_ARGUMENT, "report index out of range");
    const auto& r = set->reports[index];
    iovsim_metrics m{};
    std::snprintf(m.scenario, sizeof m.scenario, "%s", r.scenario.c_str());
    m.seed = r.seed;
    m.n_comms = r.n_comms;
    m.avg_delay_ms = r.avg_delay_ms;
    m.avg_energy_mj = r.avg_energy_mj;
    m.avg_throughput_kbps = r.avg_throughput_kbps;
    m.pdr_pct = r.pdr_pct;
    m.drops = r.drops;
    m.route_failures = r.route_failures;
    m.main_chain_length = r.chain_stats.main_length;
    m.active_segment_length = r.chain_stats.active_length;
    m.rejected_blocks = r.chain_stats.rejected;
    m.total_energy_mj = r.total_energy_mj;
    *out = m;
    last_error.clear();
    return IOVSIM_OK;
}

iovsim_status iovsim_report_write_csv(const iovsim_report_set* set, const char* path) {
    if (!set || !path) return fail(IOVSIM_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        iovsim::emit_csv(set->reports, path);
        return IOVSIM_OK;
    });
}

void iovsim_report_free(iovsim_report_set* set) { delete set; }

iovsim_status iovsim_bfo_trace_csv(const iovsim_config* cfg, uint64_t chain_len, const char* path) {
    if (!cfg || !path) return fail(IOVSIM_ERR_ARGUMENT, "null argument");
    if (chain_len < 2) return fail(IOVSIM_ERR_ARGUMENT, "chain_len must be at least 2");
    return guarded([&] {
        const auto& sc = cfg->cfg;
        const auto k = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(sc.miner_fraction * static_cast<double>(sc.network.node_count))));
        std::vector<iovsim::TrustEntry> miners;
        for (std::size_t i = 0; i < k; ++i) miners.push_back({static_cast<iovsim::NodeId>(i), 1.0});
        iovsim::Chain chain;
        for (std::uint64_t i = 0; i < chain_len; ++i)
            chain.push(chain.make_block(i, miners[i % miners.size()].id));
        const auto res = iovsim::optimize(sc.bfo, chain, sc.cost_model, miners);

        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw iovsim::IoError(std::string("cannot open '") + path + "' for writing");
        f << "iteration,best_fitness,split_point\n";
        char buf[128];
        for (const auto& row : res.trace) {
            std::snprintf(buf, sizeof buf, "%zu,%.4f,%zu\n", row.iteration, row.best_fitness, row.best_split);
            f << buf;
        }
        f.flush();
        if (!f) throw iovsim::IoError(std::string("failed writing '") + path + "'");
        return IOVSIM_OK;
    });
}

}  // extern "C"
