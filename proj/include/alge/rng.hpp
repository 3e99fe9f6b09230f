#pragma once

#include <cstdint>

namespace alge {

/// splitmix64 finalizer; bijective 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from a master seed and two indices.
/// Used to give every (node, run) pair of a simulation its own substream so
/// results do not depend on how work is split across workers.
inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t h = mix64(master ^ 0x5851F42D4C957F2DULL);
    h = mix64(h + a);
    h = mix64(h + b);
    return h;
}

/// Small deterministic PRNG (splitmix64 sequence). Not cryptographic.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    /// Uniform integer in [0, bound). bound must be > 0. Rejection sampling,
    /// so results are exactly uniform and platform-independent.
    std::uint64_t uniform_index(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t r;
        do {
            r = next();
        } while (r >= limit);
        return r % bound;
    }

    double uniform(double lo, double hi) { return lo + next_double() * (hi - lo); }

private:
    std::uint64_t state_;
};

}  // namespace alge
