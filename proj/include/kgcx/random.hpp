#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace kgcx {

/// 64-bit FNV-1a over raw bytes. Labels are hashed as opaque byte strings.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Named sub-seed: every stage draws from its own stream so re-running one
/// stage never perturbs another.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose) {
    return mix64(seed ^ mix64(fnv1a64(purpose)));
}

/// Small deterministic generator. Unlike the <random> distributions its
/// output is fixed across standard library implementations.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). Rejection sampling removes modulo bias.
    std::uint64_t bounded(std::uint64_t bound) {
        const std::uint64_t limit = bound == 0 ? 0 : (~std::uint64_t{0} - bound + 1) % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= limit) {
                return r % bound;
            }
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace kgcx
