#pragma once

#include <cstdint>

namespace race {

// Counter-based 64-bit generator (splitmix64 finalizer over an additive
// counter). Streams derived from (seed, stream) are independent and
// reproducible, so parallel replicas merge deterministically.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound), bound >= 1; fixed-point scaling, no rejection
    uint64_t next_below(uint64_t bound) {
        return static_cast<uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

    double next_unit() { return (next() >> 11) * 0x1.0p-53; }

    static uint64_t derive_stream(uint64_t seed, uint64_t stream) {
        SplitMix64 g(seed ^ (0x94d049bb133111ebull * (stream + 1)));
        g.next();
        return g.next();
    }

private:
    uint64_t state_;
};

// Decodes a flat index u in [0, N(N-1)/2) to the u-th unordered pair
// (i, j), 0 <= i < j < N, using u = j(j-1)/2 + i.
struct PairIndex {
    int i, j;
};

inline PairIndex pair_from_index(uint64_t u, int n) {
    // j = floor((1+sqrt(1+8u))/2), corrected for fp rounding
    auto j = static_cast<int64_t>((1.0 + __builtin_sqrt(1.0 + 8.0 * double(u))) / 2.0);
    while (j * (j - 1) / 2 > static_cast<int64_t>(u)) --j;
    while ((j + 1) * j / 2 <= static_cast<int64_t>(u)) ++j;
    auto i = static_cast<int64_t>(u) - j * (j - 1) / 2;
    (void)n;
    return {static_cast<int>(i), static_cast<int>(j)};
}

}  // namespace race
