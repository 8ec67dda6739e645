#include "iovsim/bfo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "iovsim/error.hpp"

namespace iovsim {

namespace {

constexpr std::uint64_t kSpawnStream = 0xBAC7;
constexpr std::uint64_t kPlacementStream = 0x5107;

double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

void BfoConfig::validate() const {
    if (nb < 2) throw ConfigError("bfo.nb must be >= 2");
    if (!(lb > 0.0 && lb <= 2.0)) throw ConfigError("bfo.lb must lie in (0, 2]");
    if (ni < 1) throw ConfigError("bfo.ni must be >= 1");
    if (n_eval < 10 || n_eval % 10 != 0) throw ConfigError("bfo.n_eval must be a positive multiple of 10");
}

std::int64_t stoch(double center, double spread, std::int64_t lo, std::int64_t hi, Rng& rng) {
    if (lo > hi) throw std::invalid_argument("stoch: lo > hi");
    const auto from = static_cast<std::int64_t>(std::lround(center - spread));
    const auto to = static_cast<std::int64_t>(std::lround(center + spread));
    const std::int64_t a = std::max(std::min(from, to), lo);
    const std::int64_t b = std::min(std::max(from, to), hi);
    if (a > b) return std::max(from, to) < lo ? lo : hi;
    return rng.uniform_int(a, b);
}

namespace {

Bacterium spawn_one(const BfoConfig& cfg, std::size_t chain_len, Rng& rng) {
    const double n = static_cast<double>(cfg.nb);
    return {static_cast<std::size_t>(stoch(n * cfg.lb / 2.0, n / 2.0, 1, static_cast<std::int64_t>(chain_len) - 1, rng)),
            std::nullopt};
}

}  // namespace

std::vector<Bacterium> spawn(const BfoConfig& cfg, std::size_t chain_len, Rng& rng) {
    if (chain_len < 2) throw std::invalid_argument("spawn: chain length must be >= 2");
    std::vector<Bacterium> pop;
    pop.reserve(cfg.nb);
    for (std::size_t i = 0; i < cfg.nb; ++i) pop.push_back(spawn_one(cfg, chain_len, rng));
    return pop;
}

std::vector<std::size_t> invalid_slots(std::size_t n_eval, Rng& rng) {
    auto slots = rng.sample_without_replacement(n_eval, n_eval / 10);
    std::sort(slots.begin(), slots.end());
    return slots;
}

FitnessTrace evaluate_appends(const Chain& segment, std::span<const std::size_t> invalid_positions,
                              const ChainCostModel& cost, std::span<const TrustEntry> miners, std::size_t n_eval) {
    if (miners.empty()) throw std::invalid_argument("fitness: empty miner set");
    FitnessTrace t;
    t.invalid_positions.assign(invalid_positions.begin(), invalid_positions.end());
    Chain work = segment;
    std::size_t next_invalid = 0;
    for (std::size_t i = 0; i < n_eval; ++i) {
        const TrustEntry& m = miners[i % miners.size()];
        const bool forged = next_invalid < invalid_positions.size() && invalid_positions[next_invalid] == i;
        if (forged) ++next_invalid;
        const Block b = forged ? work.forge_block(i, m.id) : work.make_block(i, m.id);
        const AppendResult r = append(work, b, cost);
        (r.accepted ? t.valid_terms : t.invalid_terms).push_back(r.delay_ms * m.tl);
    }
    t.fitness = mean(t.valid_terms) + mean(t.invalid_terms);
    return t;
}

double fitness(const Bacterium& b, const Chain& chain, const ChainCostModel& cost, std::span<const TrustEntry> miners,
               std::size_t n_eval, Rng& rng) {
    if (n_eval % 10 != 0) throw std::invalid_argument("fitness: n_eval must be a multiple of 10");
    if (miners.empty()) throw std::invalid_argument("fitness: empty miner set");
    auto [a, rest] = split(chain, {b.split_point, chain.size()});
    const Chain& active = active_segment(a, rest) == SegmentSide::a ? a : rest;
    const auto slots = invalid_slots(n_eval, rng);
    return evaluate_appends(active, slots, cost, miners, n_eval).fitness;
}

double threshold(std::span<const Bacterium> population, double lb) {
    if (population.empty()) throw std::invalid_argument("threshold: empty population");
    double sum = 0.0;
    for (const auto& b : population) {
        if (!b.fitness) throw std::invalid_argument("threshold: unevaluated bacterium");
        sum += *b.fitness;
    }
    return lb * (sum / static_cast<double>(population.size()));
}

FitnessEvaluator::FitnessEvaluator(const Chain& chain, ChainCostModel cost, std::vector<TrustEntry> miners,
                                   std::size_t n_eval, std::uint64_t placement_seed)
    : chain_(chain), cost_(cost), miners_(std::move(miners)), n_eval_(n_eval), placement_seed_(placement_seed) {
    if (miners_.empty()) throw std::invalid_argument("fitness: empty miner set");
    if (chain_.size() < 2) throw std::invalid_argument("optimize: chain length must be >= 2");
}

double FitnessEvaluator::operator()(std::size_t split_point) const {
    Rng rng(placement_seed_);
    return fitness(Bacterium{split_point, std::nullopt}, chain_, cost_, miners_, n_eval_, rng);
}

std::vector<Bacterium> iterate(std::vector<Bacterium> population, const BfoConfig& cfg,
                               const FitnessEvaluator& eval, Rng& rng, std::size_t* regenerated) {
    const double fth = threshold(population, cfg.lb);
    std::size_t replaced = 0;
    for (auto& b : population) {
        if (*b.fitness <= fth) continue;
        b = spawn_one(cfg, eval.chain_len(), rng);
        b.fitness = eval(b.split_point);
        ++replaced;
    }
    if (regenerated) *regenerated = replaced;
    return population;
}

std::uint64_t placement_seed(const BfoConfig& cfg) { return derive_seed(cfg.rng_seed, kPlacementStream); }

BfoResult optimize(const BfoConfig& cfg, const Chain& chain, const ChainCostModel& cost,
                   std::span<const TrustEntry> miners) {
    cfg.validate();
    const FitnessEvaluator eval(chain, cost, std::vector<TrustEntry>(miners.begin(), miners.end()), cfg.n_eval,
                                placement_seed(cfg));
    Rng rng(derive_seed(cfg.rng_seed, kSpawnStream));

    BfoResult res;
    std::optional<Bacterium> best;
    std::vector<Bacterium> pop;
    for (std::size_t it = 0; it < cfg.ni; ++it) {
        BfoTraceRow row;
        row.iteration = it;
        if (it == 0) {
            pop = spawn(cfg, chain.size(), rng);
            for (auto& b : pop) b.fitness = eval(b.split_point);
            row.regenerated = pop.size();
            row.threshold = threshold(pop, cfg.lb);
        } else {
            row.threshold = threshold(pop, cfg.lb);
            pop = iterate(std::move(pop), cfg, eval, rng, &row.regenerated);
        }
        for (const auto& b : pop)
            if (!best || *b.fitness < *best->fitness) best = b;
        row.best_fitness = *best->fitness;
        row.best_split = best->split_point;
        res.trace.push_back(row);
    }
    res.config = {best->split_point, chain.size()};
    res.best_fitness = *best->fitness;
    return res;
}

}  // namespace iovsim
