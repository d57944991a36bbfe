#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace fermiblock {

/// splitmix64 finalizer; full avalanche on 64-bit inputs.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: output k is a pure function of (key, k), so
/// streams can be split without sharing state and replays are exact.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed = 0, std::uint64_t stream = 0)
        : key_(mix64(mix64(seed) ^ (0x6a09e667f3bcc909ULL + stream))) {}

    /// Independent stream derived from this generator's key.
    CounterRng split(std::uint64_t stream) const {
        CounterRng r;
        r.key_ = mix64(key_ ^ mix64(0x3c6ef372fe94f82bULL + stream));
        return r;
    }

    std::uint64_t next_u64() { return mix64(key_ ^ counter_++); }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    bool bernoulli(double p) { return next_double() < p; }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    std::complex<double> gaussian_pair() {
        // Box-Muller
        double u1 = next_double(), u2 = next_double();
        while (u1 <= 1e-300) u1 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(2.0 * 3.14159265358979323846 * u2),
                r * std::sin(2.0 * 3.14159265358979323846 * u2)};
    }

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

/// Keyed pseudo-random value for a lattice site, uniform in [-1, 1).
/// Deterministic in (key, coords); used for quenched onsite disorder.
inline double prf_uniform(std::uint64_t key, std::span<const std::int64_t> coords) {
    std::uint64_t acc = mix64(key ^ 0x853c49e6748fea9bULL);
    for (std::int64_t c : coords)
        acc = mix64(acc + static_cast<std::uint64_t>(c) * 0x9e3779b97f4a7c15ULL);
    return 2.0 * (static_cast<double>(acc >> 11) * 0x1.0p-53) - 1.0;
}

inline double prf_uniform(std::uint64_t key, const std::vector<std::int64_t>& coords) {
    return prf_uniform(key, std::span<const std::int64_t>(coords));
}

}  // namespace fermiblock
