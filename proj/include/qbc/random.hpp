#pragma once

#include <cstdint>
#include <random>

namespace qbc {

// Deterministic pseudo-random source. Equal seeds produce identical
// outcome sequences bit for bit; every probabilistic operation in the
// library draws from one of these and nothing else.
class random_source {
public:
    explicit random_source(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 bits of precision.
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform on [0, n). Rejection keeps the draw unbiased.
    std::uint64_t next_index(std::uint64_t n) {
        const std::uint64_t limit = n == 0 ? 0 : UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    int next_bit() { return static_cast<int>(engine_() & 1u); }

    // Independent sub-source for trial `index`: seed and index are mixed
    // through SplitMix64, so trials can run concurrently yet reproducibly.
    random_source split(std::uint64_t index) const {
        std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ull * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return random_source(z ^ (z >> 31));
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace qbc
