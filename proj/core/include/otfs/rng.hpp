#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace otfs {

/// splitmix64 step; also the documented seed-splitting rule used to derive
/// independent per-trial / per-purpose streams from a master seed.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Deterministic stream derivation: stream(master, a, b) is the seed of the
/// sub-generator for purpose `a`, index `b`. Fixed for reproducibility;
/// results must not depend on worker count or evaluation order.
inline uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b = 0) {
    uint64_t s = master;
    splitmix64(s);
    s ^= 0x6A09E667F3BCC909ull * (a + 1);
    splitmix64(s);
    s ^= 0xBB67AE8584CAA73Bull * (b + 1);
    uint64_t t = s;
    return splitmix64(t);
}

/// Small deterministic generator (xoshiro256++). Hand-rolled normal sampling
/// keeps output identical across standard library implementations.
class Rng {
  public:
    explicit Rng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, 2*pi).
    double angle() { return 2.0 * M_PI * uniform(); }

    uint32_t bit() { return static_cast<uint32_t>(next_u64() >> 63); }

    /// Standard normal via Box-Muller (cached second deviate).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    /// Circularly-symmetric complex normal with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance = 1.0) {
        const double s = std::sqrt(variance / 2.0);
        return {s * normal(), s * normal()};
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4] = {};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace otfs
