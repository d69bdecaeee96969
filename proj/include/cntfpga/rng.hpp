#pragma once
// Seeded RNG used across the simulator. splitmix64 gives portable, toolchain
// independent streams; std:: distributions are implementation-defined and
// would break byte-identical reruns, so the few draw kinds we need live here.

#include <cmath>
#include <cstdint>

namespace cntfpga {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Stateless mixing finalizer. Also used to derive child seeds, so unrelated
// streams (per site, per sample, per oscillator) never overlap.
inline uint64_t hash_u64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline uint64_t seed_stream(uint64_t master, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    uint64_t h = hash_u64(master ^ 0x6a09e667f3bcc909ull);
    h = hash_u64(h ^ a);
    h = hash_u64(h ^ b);
    h = hash_u64(h ^ c);
    return h;
}

class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1); 53-bit mantissa so doubles round-trip exactly.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Box-Muller with a cached spare; avoids std::normal_distribution on purpose.
    double normal(double mean, double sigma) {
        if (has_spare_) {
            has_spare_ = false;
            return mean + sigma * spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(kTwoPi * u2);
        has_spare_ = true;
        return mean + sigma * r * std::cos(kTwoPi * u2);
    }

    // Uniform integer in [0, n) by rejection, bias-free.
    uint64_t uniform_int(uint64_t n) {
        if (n <= 1) return 0;
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return x % n;
    }

private:
    uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace cntfpga
