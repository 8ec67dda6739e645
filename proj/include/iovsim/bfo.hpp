#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "iovsim/ledger.hpp"
#include "iovsim/rng.hpp"
#include "iovsim/trust.hpp"

namespace iovsim {

struct BfoConfig {
    std::size_t nb = 20;      // bacteria per population
    double lb = 1.0;          // learning rate: spawn centre and cull threshold weight
    std::size_t ni = 30;      // iterations, the initial population counts as the first
    std::size_t n_eval = 10;  // blocks appended per fitness evaluation, 10% of them invalid
    std::uint64_t rng_seed = 1;

    void validate() const;
};

struct Bacterium {
    std::size_t split_point = 1;
    std::optional<double> fitness;
};

// Uniform integer over [round(center - spread), round(center + spread)]
// intersected with [lo, hi]. When the two ranges do not overlap the result is
// the bound of [lo, hi] nearest to the drawing range.
std::int64_t stoch(double center, double spread, std::int64_t lo, std::int64_t hi, Rng& rng);

// nb bacteria with split points stoch(nb*lb/2, nb/2, 1, chain_len-1).
std::vector<Bacterium> spawn(const BfoConfig& cfg, std::size_t chain_len, Rng& rng);

// Positions (ascending) of the invalid blocks among n_eval appends.
std::vector<std::size_t> invalid_slots(std::size_t n_eval, Rng& rng);

struct FitnessTrace {
    std::vector<std::size_t> invalid_positions;
    std::vector<double> valid_terms;    // append delay * miner trust
    std::vector<double> invalid_terms;  // rejection delay * miner trust
    double fitness = 0.0;
};

// Appends n_eval blocks to a copy of `segment`, the ones at invalid_positions
// forged, miners taken round-robin. Fitness is mean(valid_terms) +
// mean(invalid_terms).
FitnessTrace evaluate_appends(const Chain& segment, std::span<const std::size_t> invalid_positions,
                              const ChainCostModel& cost, std::span<const TrustEntry> miners, std::size_t n_eval);

// Splits a copy of chain at b.split_point and evaluates appends on the active
// (shorter) part with invalid positions drawn from rng.
double fitness(const Bacterium& b, const Chain& chain, const ChainCostModel& cost, std::span<const TrustEntry> miners,
               std::size_t n_eval, Rng& rng);

// lb * mean fitness.
double threshold(std::span<const Bacterium> population, double lb);

// Scores split points against one chain. Every evaluation replays the same
// invalid-block placement so bacteria are compared on equal terms.
class FitnessEvaluator {
public:
    FitnessEvaluator(const Chain& chain, ChainCostModel cost, std::vector<TrustEntry> miners, std::size_t n_eval,
                     std::uint64_t placement_seed);

    double operator()(std::size_t split_point) const;
    std::size_t chain_len() const { return chain_.size(); }

private:
    const Chain& chain_;
    ChainCostModel cost_;
    std::vector<TrustEntry> miners_;
    std::size_t n_eval_;
    std::uint64_t placement_seed_;
};

// Bacteria above threshold are replaced by fresh, evaluated spawns; the rest
// are carried over unchanged.
std::vector<Bacterium> iterate(std::vector<Bacterium> population, const BfoConfig& cfg,
                               const FitnessEvaluator& eval, Rng& rng, std::size_t* regenerated = nullptr);

struct BfoTraceRow {
    std::size_t iteration = 0;
    double best_fitness = 0.0;
    std::size_t best_split = 0;
    double threshold = 0.0;
    std::size_t regenerated = 0;
};

struct BfoResult {
    SidechainConfig config;
    double best_fitness = 0.0;
    std::vector<BfoTraceRow> trace;
};

// Seed of the invalid-block placement optimize() scores every split against.
std::uint64_t placement_seed(const BfoConfig& cfg);

// Runs cfg.ni rounds and returns the best split ever seen.
BfoResult optimize(const BfoConfig& cfg, const Chain& chain, const ChainCostModel& cost,
                   std::span<const TrustEntry> miners);

}  // namespace iovsim
