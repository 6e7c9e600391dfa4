#pragma once

#include <vector>

#include "otfs/lattice.hpp"

namespace otfs {

enum class FilterKind { Sinc, Rrc };

/**
 * Factorizable DD pulse-shaping filter w(tau, nu) = w1(tau) * w2(nu).
 *
 * Sinc:  w(tau, nu) = sqrt(B*T) * sinc(B*tau) * sinc(T*nu)
 * RRC:   w(tau, nu) = sqrt(B*T) * r_bt(B*tau) * r_bn(T*nu)
 *
 * with r_b the unit-rate root-raised-cosine impulse response. Both factors
 * are truncated at half_width_* lattice bins; the sinc default of 20 bins
 * reflects its slow 1/x decay, the RRC default of 8 its faster rolloff.
 */
struct FilterSpec {
    FilterKind kind = FilterKind::Sinc;
    double beta_tau = 0.0;  // delay rolloff, RRC only
    double beta_nu = 0.0;   // Doppler rolloff, RRC only
    int half_width_tau = 20;  // K_tau, lattice bins
    int half_width_nu = 20;   // K_nu, lattice bins

    static FilterSpec sinc(int half_width = 20) {
        FilterSpec s;
        s.kind = FilterKind::Sinc;
        s.half_width_tau = s.half_width_nu = half_width;
        return s;
    }
    static FilterSpec rrc(double beta_tau, double beta_nu, int half_width = 8) {
        FilterSpec s;
        s.kind = FilterKind::Rrc;
        s.beta_tau = beta_tau;
        s.beta_nu = beta_nu;
        s.half_width_tau = s.half_width_nu = half_width;
        return s;
    }

    void check() const;
};

/// Unit-rate root-raised-cosine impulse response r_beta(x); r_0 = sinc.
double rrc_pulse(double x, double beta);

/// Delay factor w1(tau) = sqrt(B) * r(B*tau), zero outside the truncation window.
double filter_delay_profile(const FilterSpec& spec, const LatticeParams& p, double tau_s);

/// Doppler factor w2(nu) = sqrt(T) * r(T*nu), zero outside the truncation window.
double filter_doppler_profile(const FilterSpec& spec, const LatticeParams& p, double nu_hz);

/// Full filter value w(tau, nu) = w1(tau) * w2(nu).
double filter_evaluate(const FilterSpec& spec, const LatticeParams& p, double tau_s, double nu_hz);

/**
 * Separable filter table on the Q-times oversampled DD grid:
 * tau = i/(Q*B) for |i| <= Q*K_tau and nu = j/(Q*T) for |j| <= Q*K_nu.
 * Effective integration measure per node is 1/(Q*B) * 1/(Q*T).
 */
struct FilterTable {
    int oversampling = 1;                // Q
    int half_tau = 0;                    // Q*K_tau
    int half_nu = 0;                     // Q*K_nu
    std::vector<double> delay_samples;   // w1, index i + half_tau
    std::vector<double> doppler_samples; // w2, index j + half_nu

    double delay(int i) const { return delay_samples[static_cast<size_t>(i + half_tau)]; }
    double doppler(int j) const { return doppler_samples[static_cast<size_t>(j + half_nu)]; }
    double value(int i, int j) const { return delay(i) * doppler(j); }
};

FilterTable sample_grid(const FilterSpec& spec, const LatticeParams& p, int oversampling);

}  // namespace otfs
