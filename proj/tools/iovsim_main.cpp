#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "iovsim/iovsim.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct Options {
    std::string config;
    std::string out;
    std::string attack;
    std::string trace;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string comms = "50:500:50";
    std::string seeds = "1";
    std::uint64_t comm_count = 0;
    std::uint64_t chain_len = 200;
    unsigned jobs = 1;
};

std::uint64_t parse_u64(const std::string& s) {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument("not an unsigned integer: '" + s + "'");
    return v;
}

// "a:b:s" or a single count.
std::vector<std::uint64_t> parse_comms(const std::string& text) {
    std::vector<std::uint64_t> out;
    const auto c1 = text.find(':');
    if (c1 == std::string::npos) return {parse_u64(text)};
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos) throw std::invalid_argument("--comms expects start:stop:step");
    const auto a = parse_u64(text.substr(0, c1));
    const auto b = parse_u64(text.substr(c1 + 1, c2 - c1 - 1));
    const auto step = parse_u64(text.substr(c2 + 1));
    if (step == 0 || a > b) throw std::invalid_argument("--comms range is empty");
    for (std::uint64_t v = a; v <= b; v += step) out.push_back(v);
    return out;
}

// "a..b" or a comma list.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> out;
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        const auto a = parse_u64(text.substr(0, dots));
        const auto b = parse_u64(text.substr(dots + 2));
        if (a > b) throw std::invalid_argument("--seeds range is empty");
        for (std::uint64_t v = a; v <= b; ++v) out.push_back(v);
        return out;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        out.push_back(parse_u64(text.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

int report(iovsim_status st) {
    std::fprintf(stderr, "iovsim: %s\n", iovsim_last_error());
    return st == IOVSIM_ERR_CONFIG ? kExitConfig : kExitFailure;
}

struct ConfigHandle {
    iovsim_config* p = nullptr;
    ~ConfigHandle() { iovsim_config_free(p); }
};

struct ReportHandle {
    iovsim_report_set* p = nullptr;
    ~ReportHandle() { iovsim_report_free(p); }
};

int load(const Options& o, ConfigHandle& cfg) {
    const iovsim_status st =
        o.config.empty() ? iovsim_config_default(&cfg.p) : iovsim_config_from_file(o.config.c_str(), &cfg.p);
    if (st != IOVSIM_OK) return report(st);
    if (o.attack == "on" || o.attack == "off") iovsim_config_set_attacks(cfg.p, o.attack == "on");
    if (o.seed_set) iovsim_config_set_seed(cfg.p, o.seed);
    if (o.comm_count) iovsim_config_set_comm_count(cfg.p, o.comm_count);
    return 0;
}

int cmd_run(const Options& o) {
    ConfigHandle cfg;
    if (int rc = load(o, cfg)) return rc;
    ReportHandle reports;
    iovsim_status st = iovsim_run(cfg.p, o.trace.empty() ? nullptr : o.trace.c_str(), &reports.p);
    if (st != IOVSIM_OK) return report(st);
    st = iovsim_report_write_csv(reports.p, o.out.c_str());
    return st == IOVSIM_OK ? 0 : report(st);
}

int cmd_sweep(const Options& o) {
    ConfigHandle cfg;
    if (int rc = load(o, cfg)) return rc;
    const auto counts = parse_comms(o.comms);
    const auto seeds = parse_seeds(o.seeds);
    ReportHandle reports;
    iovsim_status st =
        iovsim_sweep(cfg.p, counts.data(), counts.size(), seeds.data(), seeds.size(), o.jobs, &reports.p);
    if (st != IOVSIM_OK) return report(st);
    st = iovsim_report_write_csv(reports.p, o.out.c_str());
    return st == IOVSIM_OK ? 0 : report(st);
}

int cmd_bfo(const Options& o) {
    ConfigHandle cfg;
    if (int rc = load(o, cfg)) return rc;
    const iovsim_status st = iovsim_bfo_trace_csv(cfg.p, o.chain_len, o.out.c_str());
    return st == IOVSIM_OK ? 0 : report(st);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trust-clustered IoV routing and side-chain simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", iovsim_version());
    Options o;

    auto common = [&o](CLI::App* sub) {
        sub->add_option("--config", o.config, "Scenario JSON file (defaults when omitted)");
        sub->add_option("--out", o.out, "Output CSV path")->required();
        sub->add_option("--attack", o.attack, "Override the attack profile")->check(CLI::IsMember({"on", "off"}));
    };

    auto* run = app.add_subcommand("run", "Run one scenario");
    common(run);
    run->add_option_function<std::uint64_t>(
        "--seed", [&o](std::uint64_t s) { o.seed = s, o.seed_set = true; }, "Network seed");
    run->add_option("--comm-count", o.comm_count, "Override the number of communications");
    run->add_option("--trace", o.trace, "Write every event as JSON lines");

    auto* sw = app.add_subcommand("sweep", "Run a grid of communication counts and seeds");
    common(sw);
    sw->add_option("--comms", o.comms, "start:stop:step or a single count")->capture_default_str();
    sw->add_option("--seeds", o.seeds, "a..b or a comma list")->capture_default_str();
    sw->add_option("--jobs", o.jobs, "Parallel runs")->check(CLI::PositiveNumber)->capture_default_str();

    auto* bfo = app.add_subcommand("bfo", "Trace the split optimizer on a synthetic chain");
    common(bfo);
    bfo->add_option("--chain-len", o.chain_len, "Chain length")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitFailure;
    }

    try {
        if (*run) return cmd_run(o);
        if (*sw) return cmd_sweep(o);
        return cmd_bfo(o);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "iovsim: %s\n", e.what());
        return kExitFailure;
    }
}
