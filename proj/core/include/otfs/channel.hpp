#pragma once

#include <cstdint>
#include <vector>

#include "otfs/filters.hpp"
#include "otfs/taps.hpp"
#include "otfs/zak.hpp"

namespace otfs {

struct PathComponent {
    cplx gain;         // h_i
    double delay_s;    // tau_i >= 0
    double doppler_hz; // nu_i
};

/// One doubly-spread channel draw: y(t) = sum_i h_i x(t - tau_i) e^{j2pi nu_i (t - tau_i)}.
struct ChannelRealization {
    std::vector<PathComponent> paths;

    double max_delay_s() const;
    double max_abs_doppler_hz() const;
};

/**
 * Power-delay profile with a maximum Doppler shift. Gains are Rayleigh with
 * per-path variances normalized to sum to 1 in ensemble mean; per-path
 * Doppler is nu_max * cos(theta_i) with theta_i uniform on [0, 2*pi).
 */
struct ChannelProfile {
    std::vector<double> delays_us;
    std::vector<double> powers_db;
    double doppler_max_hz = 0.0;

    /// Six-path ITU Vehicular-A profile.
    static ChannelProfile veh_a(double doppler_max_hz);

    /// Linear powers normalized to unit sum.
    std::vector<double> normalized_powers() const;

    void check() const;
};

/// Deterministic draw for a given seed.
ChannelRealization draw_channel(const ChannelProfile& profile, uint64_t seed);
inline ChannelRealization draw_veh_a(double doppler_max_hz, uint64_t seed) {
    return draw_channel(ChannelProfile::veh_a(doppler_max_hz), seed);
}

/// Delay spread < tau_p and two-sided Doppler spread < nu_p.
bool crystallization_holds(const ChannelProfile& profile, const LatticeParams& p);

/**
 * Effective discrete channel h_eff[k, l]: the composition
 * w_rx (twisted*) h_phy (twisted*) w_tx sampled on the information lattice,
 * evaluated by Riemann summation of the explicit double integral on the
 * Q-times oversampled filter grid. Taps below `floor_rel` of the peak
 * magnitude are dropped.
 */
DDTapSet compute_h_eff(const ChannelRealization& ch, const FilterSpec& w_tx,
                       const FilterSpec& w_rx, const LatticeParams& p, int oversampling,
                       double floor_rel = 1e-5);

/**
 * Time-domain simulation path, independent of compute_h_eff: transmit
 * pulse shaping, the physical channel, matched receive filtering, and
 * lattice sampling all on a Q-times oversampled time grid spanning
 * `periods` frame durations (circular, center-origin). Fractional path
 * delays are handled by evaluating the analytic transmit pulse at the
 * shifted sample positions.
 *
 * The transmit/receive Doppler windows are synthesized from the same
 * oversampled Doppler-grid samples the effective-channel integral uses, so
 * for on-lattice channels the two routes agree to rounding when `periods`
 * covers the full window span (periods == oversampling).
 */
class TdChannelSimulator {
  public:
    TdChannelSimulator(const LatticeParams& p, const FilterSpec& w_tx, const FilterSpec& w_rx,
                       int oversampling, int periods = 3);

    /// Noise-free received DD frame for a transmit frame (critical-rate IDZT of the DD symbols).
    DDSignal apply(const ChannelRealization& ch, const TDFrame& frame) const;

    const LatticeParams& params() const { return params_; }
    int oversampling() const { return oversampling_; }
    int periods() const { return periods_; }

  private:
    LatticeParams params_;
    FilterSpec w_tx_, w_rx_;
    int oversampling_ = 16;  // Q
    int periods_ = 3;        // simulated frame durations
    int critical_ = 0;       // periods * M * N critical-rate slots
    int total_ = 0;          // Q * critical_ oversampled slots
    std::vector<double> rx_delay_taps_;   // w1_rx on the oversampled grid
    std::vector<double> tx_window_crit_;  // TX Doppler window at critical positions
    std::vector<double> rx_window_ov_;    // RX Doppler window at oversampled positions
};

/// One-shot convenience wrapper around TdChannelSimulator.
DDSignal apply_td(const ChannelRealization& ch, const TDFrame& frame, const FilterSpec& w_tx,
                  const FilterSpec& w_rx, const LatticeParams& p, int oversampling,
                  int periods = 3);

/// i.i.d. circularly-symmetric AWGN, variance n0 per DD bin.
DDSignal add_noise(const DDSignal& sig, double n0, uint64_t seed);

}  // namespace otfs
