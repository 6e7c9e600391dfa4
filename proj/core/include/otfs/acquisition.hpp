#pragma once

#include <Eigen/Dense>

#include "otfs/taps.hpp"

namespace otfs {

/**
 * Single-pilot acquisition: a dedicated frame carries sqrt(E_p) on one DD bin
 * (default the center (M/2, N/2)) and the effective channel is read off the
 * received response, tap by tap, with no channel model assumed.
 */
struct PilotConfig {
    int pilot_delay_bin = 0;    // k_p
    int pilot_doppler_bin = 0;  // l_p
    double energy = 1.0;        // E_p
    int region_delay = 0;       // R_k, taps read for -R_k - extra <= dk <= R_k
    int region_doppler = 0;     // R_l
    // With even M (or N), a symmetric window of 2R+1 bins leaves one
    // row/column at half the period unread -- exactly where channels at the
    // crystallization edge land. The extras widen the window one step on the
    // negative side so "use everything" really reads every bin once.
    int region_delay_extra = 0;
    int region_doppler_extra = 0;
    double threshold_sigmas = 3.0;

    /// Center pilot using the whole fundamental domain as estimation region.
    static PilotConfig centered(const LatticeParams& p, double energy);

    void check(const LatticeParams& p) const;
};

/// The pilot frame itself: sqrt(E_p) at the pilot bin, zero elsewhere.
DDSignal make_pilot_signal(const LatticeParams& p, const PilotConfig& cfg);

/**
 * Read the effective channel off a received pilot frame. Exact for
 * noise-free pilots whose true taps lie inside the estimation region; taps
 * with magnitude below threshold_sigmas * sqrt(n0 / E_p) are zeroed.
 */
DDTapSet estimate_h_eff(const DDSignal& received_pilot, const PilotConfig& cfg, double n0);

/// Vectorized I/O matrix: row l*M+k is output bin (k,l), column l'*M+k' input bin (k',l').
struct ChannelMatrix {
    LatticeParams params;
    Eigen::MatrixXcd H;
};

/// Expand taps into the full MN x MN matrix so that for every signal x,
/// vectorize(twisted_convolve(taps, x)) == H * vectorize(x).
ChannelMatrix build_H(const DDTapSet& taps, const LatticeParams& p);

/**
 * Relative prediction error per DD bin: the normalized squared error between
 * the response predicted from the estimated taps and the true channel
 * response to a unit symbol on that bin. Bins with zero true response are
 * reported as NaN.
 */
std::vector<double> compute_rpe(const DDTapSet& true_taps, const DDTapSet& estimated,
                                const LatticeParams& p);

}  // namespace otfs
