#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "iovsim/attacks.hpp"
#include "iovsim/bfo.hpp"
#include "iovsim/ledger.hpp"
#include "iovsim/net.hpp"

namespace iovsim {

struct ScenarioConfig {
    NetworkConfig network;
    AttackProfile attack;
    BfoConfig bfo;
    std::size_t comm_count = 500;
    double miner_fraction = 0.10;
    ChainCostModel cost_model;
    bool sidechain_enabled = true;
    std::size_t resplit_period = 50;    // communications between side-chain re-splits
    std::size_t packets_per_comm = 5;
    std::size_t trust_window = 0;       // 0 keeps every record

    void validate() const;

    // "attack" when attacks are enabled with a non-zero fraction, else "normal".
    std::string scenario_label() const;
};

// Parses one JSON document. Keys mirror the field names above; unknown keys
// and ill-typed values raise ConfigError. Missing keys keep their defaults.
ScenarioConfig parse_config(std::string_view json_text);
ScenarioConfig load_config(const std::filesystem::path& path);

// Full JSON rendering of a config (every key present).
std::string to_json(const ScenarioConfig& cfg);

}  // namespace iovsim
