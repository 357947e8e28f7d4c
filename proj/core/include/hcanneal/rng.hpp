#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace hcanneal {

// SplitMix64 finalizer (Steele et al. constants).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stable hash of (master, stream, index) -> sub-seed. Trial workers, sweep
// points and augmentation all receive their seeds through this, so a whole
// experiment is reproducible from one master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index) {
    constexpr std::uint64_t gamma = 0x9e3779b97f4a7c15ULL;
    std::uint64_t h = mix64(master + gamma);
    h = mix64(h ^ (stream + gamma));
    h = mix64(h ^ (index + gamma));
    return h;
}

// Random source for every stochastic component. Wraps std::mt19937_64, whose
// raw output sequence is pinned by the standard, and maps it to ints/reals
// with fixed arithmetic (std::uniform_int_distribution is not portable
// across standard libraries). A seed therefore reproduces bit-identical
// results on any platform. Results metadata records the generator name.
class Rng {
public:
    static constexpr const char* algorithm = "mt19937_64";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform integer in [0, n); rejection sampling, no modulo bias.
    int below(int n) {
        const auto bound = static_cast<std::uint64_t>(n);
        constexpr std::uint64_t top = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t limit = top - top % bound;
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return static_cast<int>(x % bound);
    }

    // Uniform real in [0, 1) with 53-bit resolution.
    double real01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return real01() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace hcanneal
