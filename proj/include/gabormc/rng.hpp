// SPDX-License-Identifier: Apache-2.0
//
// gabormc - pulse-shaped multicarrier interference bounds and simulation

#pragma once

#include <cstdint>
#include <cmath>
#include <complex>
#include <random>

namespace gabormc {

// splitmix64 finalizer; used for counter-based per-trial seed derivation so
// results do not depend on how trials are distributed over workers.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed for trial i of a run seeded with `seed`.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    return splitmix64(seed + trial * 0x9E3779B97F4A7C15ULL);
}

// Deterministic random stream. mt19937_64 is fully specified by the standard;
// uniform/normal transforms are hand-rolled so sequences are identical across
// platforms and library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform in [0,1) with 53-bit resolution
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // circularly-symmetric complex gaussian with E|z|^2 = var
    std::complex<double> cnormal(double var = 1.0) {
        const double s = std::sqrt(var / 2.0);
        return {s * normal(), s * normal()};
    }

    std::uint64_t next_u64() { return gen_(); }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace gabormc
