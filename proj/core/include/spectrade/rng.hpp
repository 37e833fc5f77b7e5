#pragma once

#include <cstdint>
#include <string_view>

#include "spectrade/canonical.hpp"
#include "spectrade/hash.hpp"

namespace spectrade {

// Deterministic stream generator (splitmix64 walk). std:: distributions are
// implementation-defined, so all draws go through the helpers below.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t state) : state_(state) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double next_range(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // Uniform in [0, n). n must be > 0.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

// One 64-bit scenario seed fans out into independent named streams, so adding
// a stream never perturbs existing ones.
inline RandomStream named_stream(std::uint64_t seed, std::string_view name) {
    CanonicalWriter w;
    w.u64(seed);
    w.str(name);
    Digest d = w.hash();
    std::uint64_t state = 0;
    for (int i = 0; i < 8; ++i) state = (state << 8) | d[i];
    return RandomStream(state);
}

} // namespace spectrade
