#pragma once

#include <cstdint>

namespace epic {

// Deterministic random stream (splitmix64). We roll our own instead of
// <random> distributions because distribution output is not pinned by the
// standard and run logs must replay bit-identically across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n). Modulo bias is < n / 2^64, irrelevant at our scales.
    std::uint64_t next_below(std::uint64_t n) { return n <= 1 ? 0 : next_u64() % n; }

    // Child stream derivation: hashes the parts into a fresh seed so sibling
    // streams (per generation, per candidate) are independent and replayable.
    static std::uint64_t derive(std::uint64_t seed) { return mix_step(seed); }

    template <typename... Rest>
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t part, Rest... rest) {
        return derive(mix_step(seed ^ (part + 0x9E3779B97F4A7C15ull)), rest...);
    }

private:
    static std::uint64_t mix_step(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace epic
