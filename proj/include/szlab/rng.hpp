#pragma once

#include <cstdint>
#include <string_view>

namespace szlab {

// SplitMix64, the fixed project PRNG. Versioned so reports can name the exact
// stream semantics; changing anything here is a format break.
inline constexpr std::string_view kRngName = "sm64-v1";

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 random bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [0,n). Rejection-free modulo is fine here: n is always tiny
    // relative to 2^64, the bias is < n/2^64 and irrelevant for instance generation.
    std::uint64_t next_below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
};

// Counter-scheme sub-seed derivation: stream s of master m is mix(m + (s+1)*gamma).
// Stream 0 is distinct from the master sequence itself.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + (stream + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace szlab
