// Deterministic seeded randomness. Every random draw in a protocol run,
// attack trial or Monte Carlo loop goes through this wrapper so that a
// (config, seed) pair replays byte-for-byte.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace qpce {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    std::uint64_t u64() { return engine_(); }

    // Unbiased integer in [0, bound) via rejection sampling; avoids the
    // platform-defined behaviour of std::uniform_int_distribution.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("bound must be positive");
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t r;
        do {
            r = u64();
        } while (r >= limit);
        return r % bound;
    }

    int bit() { return static_cast<int>(u64() >> 63); }

    double real01() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    std::vector<std::uint8_t> bits(std::size_t count) {
        std::vector<std::uint8_t> out(count);
        for (auto& b : out) b = static_cast<std::uint8_t>(bit());
        return out;
    }

    // k distinct values from [0, n), ascending. Partial Fisher-Yates.
    std::vector<std::size_t> sample_positions(std::size_t k, std::size_t n) {
        if (k > n) throw std::invalid_argument("cannot sample more positions than exist");
        std::vector<std::size_t> pool(n);
        for (std::size_t i = 0; i < n; ++i) pool[i] = i;
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + below(n - i);
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k);
        std::sort(pool.begin(), pool.end());
        return pool;
    }

    // Independent stream for a fixed purpose tag; keeps honest-party draws
    // stable when an adversary is toggled on.
    Rng derive(std::uint64_t tag) const {
        return Rng(splitmix64(seed_ ^ splitmix64(tag)));
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace qpce
