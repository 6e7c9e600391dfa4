#pragma once

#include "otfs/dd_signal.hpp"

namespace otfs {

/**
 * One frame of time-domain samples at the critical rate B: s[q], q = 0..M*N-1,
 * spanning duration T. These are the pulse-train amplitudes of the Zak-OTFS
 * waveform; the quasi-periodic DD extension corresponds to extending the
 * frame T-periodically in time.
 */
struct TDFrame {
    LatticeParams params;
    std::vector<cplx> samples;  // length M*N

    TDFrame() = default;
    explicit TDFrame(const LatticeParams& p)
        : params(p), samples(static_cast<size_t>(p.bins()), cplx{0.0, 0.0}) {}

    double energy() const {
        double e = 0.0;
        for (const auto& v : samples) e += std::norm(v);
        return e;
    }
};

/**
 * Unitary discrete Zak transform pair.
 *
 *   inverse: s[k + m*M] = (1/sqrt(N)) * sum_l x[k, l] exp(+j*2*pi*l*m/N)
 *   forward: x[k, l]    = (1/sqrt(N)) * sum_m s[k + m*M] exp(-j*2*pi*l*m/N)
 *
 * A zero-Doppler DD pulse maps to the classic pulsone: N equal time pulses
 * of amplitude 1/sqrt(N), one per delay period, modulated by a tone whose
 * frequency is set by the pulse's Doppler coordinate.
 */
TDFrame inverse_zak(const DDSignal& sig);
DDSignal forward_zak(const TDFrame& frame);

}  // namespace otfs
