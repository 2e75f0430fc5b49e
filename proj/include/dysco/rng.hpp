#pragma once

// Counter-based deterministic random streams. Every (seed, counter...) tuple
// maps to an independent stream, so parallel Monte Carlo shots never share
// state and results are independent of scheduling.

#include <cmath>
#include <cstdint>

#include "dysco/constants.hpp"

namespace dysco {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Collapse (seed, a, b) into one well-mixed 64-bit stream key.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

/// Small sequential generator over a derived stream. Not cryptographic;
/// chosen for exact cross-platform reproducibility (std:: distributions are
/// implementation-defined and would break byte-identical outputs).
class Rng {
public:
    explicit Rng(std::uint64_t stream_key) : state_(stream_key) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [0, 2*pi).
    double uniform_angle() { return two_pi * uniform(); }

    /// Standard normal via Box-Muller (deterministic, portable).
    double gaussian() {
        const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

private:
    std::uint64_t state_;
};

}  // namespace dysco
