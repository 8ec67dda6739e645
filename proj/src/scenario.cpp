#include "iovsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "iovsim/error.hpp"
#include "json.hpp"

namespace iovsim {

using nlohmann::json;

void ScenarioConfig::validate() const {
    network.validate();
    attack.validate();
    bfo.validate();
    cost_model.validate();
    if (!(miner_fraction > 0.0 && miner_fraction <= 1.0)) throw ConfigError("miner_fraction must lie in (0, 1]");
    if (resplit_period < 1) throw ConfigError("resplit_period must be >= 1");
    if (packets_per_comm < 1) throw ConfigError("packets_per_comm must be >= 1");
    if (packets_per_comm > std::numeric_limits<std::uint32_t>::max())
        throw ConfigError("packets_per_comm too large");
}

std::string ScenarioConfig::scenario_label() const {
    return attack.enabled && attack.fraction > 0.0 ? "attack" : "normal";
}

namespace {

class Reader {
public:
    Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) fail("", "must be a JSON object");
    }

    void allow(std::initializer_list<const char*> keys) const {
        for (const auto& [k, _] : obj_.items()) {
            bool known = false;
            for (const char* a : keys) known = known || k == a;
            if (!known) fail(k, "unknown key");
        }
    }

    void number(const char* key, double& out) const {
        if (!obj_.contains(key)) return;
        const json& v = obj_.at(key);
        if (!v.is_number()) fail(key, "expected a number");
        out = v.get<double>();
        if (!std::isfinite(out)) fail(key, "must be finite");
    }

    template <typename T>
    void integer(const char* key, T& out) const {
        if (!obj_.contains(key)) return;
        const json& v = obj_.at(key);
        if (!v.is_number_unsigned()) fail(key, "expected a non-negative integer");
        const auto raw = v.get<std::uint64_t>();
        if (raw > std::numeric_limits<T>::max()) fail(key, "out of range");
        out = static_cast<T>(raw);
    }

    void boolean(const char* key, bool& out) const {
        if (!obj_.contains(key)) return;
        const json& v = obj_.at(key);
        if (!v.is_boolean()) fail(key, "expected true or false");
        out = v.get<bool>();
    }

    std::string string(const char* key) const {
        const json& v = obj_.at(key);
        if (!v.is_string()) fail(key, "expected a string");
        return v.get<std::string>();
    }

    bool has(const char* key) const { return obj_.contains(key); }

    Reader child(const char* key) const { return Reader(obj_.at(key), qualify(key)); }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw ConfigError("config key '" + qualify(key) + "': " + what);
    }

private:
    std::string qualify(const std::string& key) const {
        if (path_.empty()) return key;
        return key.empty() ? path_ : path_ + "." + key;
    }

    const json& obj_;
    std::string path_;
};

void read_energy(const Reader& r, EnergyModel& e) {
    r.allow({"tx", "rx", "sleep", "transition", "idle"});
    r.number("tx", e.tx);
    r.number("rx", e.rx);
    r.number("sleep", e.sleep);
    r.number("transition", e.transition);
    r.number("idle", e.idle);
}

void read_network(const Reader& r, NetworkConfig& n) {
    r.allow({"node_count", "area_side", "radio_range", "queue_capacity", "packet_size", "energy_costs",
             "sector_count", "inequality_mode", "rng_seed", "initial_energy", "link_rate_bps",
             "processing_delay_ms", "rtl_preference"});
    r.integer("node_count", n.node_count);
    r.number("area_side", n.area_side);
    r.number("radio_range", n.radio_range);
    r.integer("queue_capacity", n.queue_capacity);
    r.integer("packet_size", n.packet_size);
    if (r.has("energy_costs")) read_energy(r.child("energy_costs"), n.energy_costs);
    r.integer("sector_count", n.sector_count);
    if (r.has("inequality_mode")) {
        const auto m = r.string("inequality_mode");
        if (m == "literal")
            n.inequality_mode = InequalityMode::literal;
        else if (m == "inverted")
            n.inequality_mode = InequalityMode::inverted;
        else
            r.fail("inequality_mode", "expected \"literal\" or \"inverted\"");
    }
    r.integer("rng_seed", n.rng_seed);
    r.number("initial_energy", n.initial_energy);
    r.number("link_rate_bps", n.link_rate_bps);
    r.number("processing_delay_ms", n.processing_delay_ms);
    if (r.has("rtl_preference")) {
        const auto m = r.string("rtl_preference");
        if (m == "min")
            n.rtl_preference = RtlPreference::minimize;
        else if (m == "max")
            n.rtl_preference = RtlPreference::maximize;
        else
            r.fail("rtl_preference", "expected \"min\" or \"max\"");
    }
}

void read_attack(const Reader& r, AttackProfile& a) {
    r.allow({"enabled", "fraction", "mix", "sybil_identity_count", "flood_multiplier", "sybil_mitigation"});
    r.boolean("enabled", a.enabled);
    r.number("fraction", a.fraction);
    if (r.has("mix")) {
        const Reader m = r.child("mix");
        m.allow({"sybil", "ddos", "finney", "mitm"});
        m.number("sybil", a.mix.sybil);
        m.number("ddos", a.mix.ddos);
        m.number("finney", a.mix.finney);
        m.number("mitm", a.mix.mitm);
    }
    r.integer("sybil_identity_count", a.sybil_identity_count);
    r.integer("flood_multiplier", a.flood_multiplier);
    r.boolean("sybil_mitigation", a.sybil_mitigation);
}

void read_bfo(const Reader& r, BfoConfig& b) {
    r.allow({"nb", "lb", "ni", "n_eval", "rng_seed"});
    r.integer("nb", b.nb);
    r.number("lb", b.lb);
    r.integer("ni", b.ni);
    r.integer("n_eval", b.n_eval);
    r.integer("rng_seed", b.rng_seed);
}

void read_cost(const Reader& r, ChainCostModel& c) {
    r.allow({"dr", "dv", "dh", "dw"});
    r.number("dr", c.dr);
    r.number("dv", c.dv);
    r.number("dh", c.dh);
    r.number("dw", c.dw);
}

}  // namespace

ScenarioConfig parse_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    ScenarioConfig cfg;
    const Reader r(doc, "");
    r.allow({"network", "attack", "bfo", "comm_count", "miner_fraction", "cost_model", "sidechain_enabled",
             "resplit_period", "packets_per_comm", "trust_window"});
    if (r.has("network")) read_network(r.child("network"), cfg.network);
    if (r.has("attack")) read_attack(r.child("attack"), cfg.attack);
    if (r.has("bfo")) read_bfo(r.child("bfo"), cfg.bfo);
    if (r.has("cost_model")) read_cost(r.child("cost_model"), cfg.cost_model);
    r.integer("comm_count", cfg.comm_count);
    r.number("miner_fraction", cfg.miner_fraction);
    r.boolean("sidechain_enabled", cfg.sidechain_enabled);
    r.integer("resplit_period", cfg.resplit_period);
    r.integer("packets_per_comm", cfg.packets_per_comm);
    r.integer("trust_window", cfg.trust_window);
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string to_json(const ScenarioConfig& c) {
    const auto& n = c.network;
    json j;
    j["network"] = {
        {"node_count", n.node_count},
        {"area_side", n.area_side},
        {"radio_range", n.radio_range},
        {"queue_capacity", n.queue_capacity},
        {"packet_size", n.packet_size},
        {"energy_costs",
         {{"tx", n.energy_costs.tx},
          {"rx", n.energy_costs.rx},
          {"sleep", n.energy_costs.sleep},
          {"transition", n.energy_costs.transition},
          {"idle", n.energy_costs.idle}}},
        {"sector_count", n.sector_count},
        {"inequality_mode", n.inequality_mode == InequalityMode::literal ? "literal" : "inverted"},
        {"rng_seed", n.rng_seed},
        {"initial_energy", n.initial_energy},
        {"link_rate_bps", n.link_rate_bps},
        {"processing_delay_ms", n.processing_delay_ms},
        {"rtl_preference", n.rtl_preference == RtlPreference::minimize ? "min" : "max"},
    };
    j["attack"] = {
        {"enabled", c.attack.enabled},
        {"fraction", c.attack.fraction},
        {"mix",
         {{"sybil", c.attack.mix.sybil},
          {"ddos", c.attack.mix.ddos},
          {"finney", c.attack.mix.finney},
          {"mitm", c.attack.mix.mitm}}},
        {"sybil_identity_count", c.attack.sybil_identity_count},
        {"flood_multiplier", c.attack.flood_multiplier},
        {"sybil_mitigation", c.attack.sybil_mitigation},
    };
    j["bfo"] = {{"nb", c.bfo.nb}, {"lb", c.bfo.lb}, {"ni", c.bfo.ni}, {"n_eval", c.bfo.n_eval},
                {"rng_seed", c.bfo.rng_seed}};
    j["cost_model"] = {{"dr", c.cost_model.dr}, {"dv", c.cost_model.dv}, {"dh", c.cost_model.dh},
                       {"dw", c.cost_model.dw}};
    j["comm_count"] = c.comm_count;
    j["miner_fraction"] = c.miner_fraction;
    j["sidechain_enabled"] = c.sidechain_enabled;
    j["resplit_period"] = c.resplit_period;
    j["packets_per_comm"] = c.packets_per_comm;
    j["trust_window"] = c.trust_window;
    return j.dump(2) + "\n";
}

}  // namespace iovsim
