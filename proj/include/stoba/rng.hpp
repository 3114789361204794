#pragma once

#include <cstdint>

namespace stoba {

/* Counter-friendly 64-bit generator (splitmix64 core). Cheap to seed, so each
 * Monte Carlo trial gets its own independent stream via mix_seed. */
struct SplitMix64 {
    uint64_t state = 0;

    explicit SplitMix64(uint64_t seed = 0) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in (0, 1]; strictly positive so -log is always finite.
    double uniform_pos() { return ((next() >> 11) + 1) * 0x1.0p-53; }

    // Uniform in [0, 1).
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
};

inline uint64_t mix_seed(uint64_t master, uint64_t i) {
    SplitMix64 g(master ^ (0x9e3779b97f4a7c15ULL * (i + 1)));
    return g.next();
}

}  // namespace stoba
