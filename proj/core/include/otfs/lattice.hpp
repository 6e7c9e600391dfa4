#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace otfs {

/**
 * Frame geometry shared by every module.
 *
 * A Zak-OTFS frame of bandwidth B and duration T carries M*N symbols on the
 * information lattice (k/B, l/T). The delay/Doppler periods satisfy
 * tau_p * nu_p = 1, with M = B*tau_p delay bins and N = T*nu_p Doppler bins
 * per fundamental period.
 */
struct LatticeParams {
    double bandwidth_hz = 0.0;       // B
    double duration_s = 0.0;         // T
    double delay_period_s = 0.0;     // tau_p
    double doppler_period_hz = 0.0;  // nu_p
    int delay_bins = 0;              // M
    int doppler_bins = 0;            // N

    /// Derive the lattice from (B, T, nu_p). M and N must come out integral.
    static LatticeParams make(double bandwidth_hz, double duration_s,
                              double doppler_period_hz) {
        if (bandwidth_hz <= 0 || duration_s <= 0 || doppler_period_hz <= 0)
            throw std::invalid_argument("LatticeParams: B, T, nu_p must be positive");
        LatticeParams p;
        p.bandwidth_hz = bandwidth_hz;
        p.duration_s = duration_s;
        p.doppler_period_hz = doppler_period_hz;
        p.delay_period_s = 1.0 / doppler_period_hz;
        const double m = bandwidth_hz * p.delay_period_s;
        const double n = duration_s * doppler_period_hz;
        p.delay_bins = static_cast<int>(std::lround(m));
        p.doppler_bins = static_cast<int>(std::lround(n));
        if (p.delay_bins < 1 || std::abs(m - p.delay_bins) > 1e-6 * m)
            throw std::invalid_argument("LatticeParams: M = B*tau_p is not a positive integer (" +
                                        std::to_string(m) + ")");
        if (p.doppler_bins < 1 || std::abs(n - p.doppler_bins) > 1e-6 * n)
            throw std::invalid_argument("LatticeParams: N = T*nu_p is not a positive integer (" +
                                        std::to_string(n) + ")");
        p.check();
        return p;
    }

    void check() const {
        const double prod = delay_period_s * doppler_period_hz;
        if (std::abs(prod - 1.0) > 1e-12)
            throw std::invalid_argument("LatticeParams: tau_p * nu_p must equal 1");
    }

    int bins() const { return delay_bins * doppler_bins; }
    double delay_resolution_s() const { return 1.0 / bandwidth_hz; }     // tau_p / M
    double doppler_resolution_hz() const { return 1.0 / duration_s; }    // nu_p / N

    bool same_grid(const LatticeParams& o) const {
        return delay_bins == o.delay_bins && doppler_bins == o.doppler_bins &&
               bandwidth_hz == o.bandwidth_hz && duration_s == o.duration_s;
    }
};

}  // namespace otfs
