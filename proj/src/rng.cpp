#include "iovsim/rng.hpp"

#include <numeric>
#include <stdexcept>

namespace iovsim {

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());  // full 64-bit range
    // Rejection sampling removes modulo bias.
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % span);
    std::uint64_t r = engine_();
    while (r >= limit) r = engine_();
    return lo + static_cast<std::int64_t>(r % span);
}

std::size_t Rng::weighted_index(const std::vector<double>& weights) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (weights.empty() || !(total > 0.0)) throw std::invalid_argument("weighted_index: weights must sum > 0");
    const double target = uniform01() * total;
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0.0) throw std::invalid_argument("weighted_index: negative weight");
        if (weights[i] > 0.0) last_positive = i;
        acc += weights[i];
        if (target < acc && weights[i] > 0.0) return i;
    }
    return last_positive;
}

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n, std::size_t k) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = static_cast<std::size_t>(uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(n - 1)));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

}  // namespace iovsim
