#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace stylus {

// All seeded behavior in the toolkit flows through splitmix64, a 64-bit
// counter-based generator. The algorithm is fixed by these constants and is
// platform-independent, so split files, shuffles, and bootstrap draws
// replicate bit-for-bit across machines and future versions.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [0, n) by rejection sampling. n must be > 0.
    uint64_t next_below(uint64_t n) {
        const uint64_t threshold = -n % n; // (2^64 - n) mod n
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform double in [0, 1) with 53 bits of precision.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    uint64_t state_;
};

inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

// splitmix64 finalizer as a standalone mixer.
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from (seed, salt). Used for per-novel,
// per-sample, per-class, and per-iteration streams so that parallel order
// never changes output.
inline uint64_t derive_seed(uint64_t seed, uint64_t salt) {
    return mix64(seed + 0x9E3779B97F4A7C15ull * (salt + 1));
}

inline uint64_t derive_seed(uint64_t seed, std::string_view salt) {
    return derive_seed(seed, fnv1a64(salt));
}

// Fisher-Yates.
template <typename T>
void seeded_shuffle(std::vector<T>& v, SplitMix64& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(rng.next_below(i));
        using std::swap;
        swap(v[i - 1], v[j]);
    }
}

} // namespace stylus
