#pragma once
#include <cmath>
#include <cstdint>

namespace fou {

// SplitMix64 (Steele/Lea/Flood; Vigna's fixed-increment variant). One stream
// per path keeps parallel Monte Carlo free of shared state.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += UINT64_C(0x9E3779B97F4A7C15));
        z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
        return z ^ (z >> 31);
    }

    // uniform on (0,1]; never 0 so log() is safe
    double next_uniform() {
        return (double)((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Box-Muller with cached spare
    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = next_uniform();
        double u2 = next_uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
    return z ^ (z >> 31);
}

// Derive a generator for (master_seed, stream_id); distinct streams are
// decorrelated by the double mix.
inline SplitMix64 stream_rng(std::uint64_t master_seed, std::uint64_t stream_id) {
    std::uint64_t s = mix64(master_seed + UINT64_C(0x9E3779B97F4A7C15));
    s ^= mix64(stream_id * UINT64_C(0xBF58476D1CE4E5B9) + UINT64_C(0x94D049BB133111EB));
    return SplitMix64(s);
}

} // namespace fou
