//==============================================================================
// util.hpp
// Deterministic RNG (splitmix64) so that seeded artifacts are byte-identical
// across platforms, independent of the standard library's distributions.
//==============================================================================
#pragma once

#include <cstdint>

#include "birknls/seqspace.hpp"

namespace birknls {

struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    /// uniform in [0, 1)
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
    /// uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

/// Random real state with ||zeta||_2 = ||xi||_2 + ||eta||_2 == rho.
TruncState random_real_state(int J, double rho, Rng& rng);

}  // namespace birknls
