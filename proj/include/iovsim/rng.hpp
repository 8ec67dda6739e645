#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace iovsim {

// Seeded generator. Derived draws use only the raw 64-bit engine output, so
// traces match across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [lo, hi] (inclusive); requires lo <= hi.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    // Index drawn proportionally to non-negative weights (sum > 0).
    std::size_t weighted_index(const std::vector<double>& weights);

    // k distinct values from [0, n) in draw order (partial Fisher-Yates).
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

private:
    std::mt19937_64 engine_;
};

// splitmix64 finalizer; used for stream derivation and block digests.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Independent seed for a named stream of a master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix64(mix64(master) ^ mix64(stream * 0x2545f4914f6cdd1dULL + 1));
}

enum class Stream : std::uint64_t {
    deploy = 1,
    traffic = 2,
    attack = 3,
    bfo = 4,
};

inline std::uint64_t derive_seed(std::uint64_t master, Stream s) {
    return derive_seed(master, static_cast<std::uint64_t>(s));
}

}  // namespace iovsim
