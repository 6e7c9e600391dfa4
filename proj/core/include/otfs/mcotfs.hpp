#pragma once

#include <memory>

#include "otfs/acquisition.hpp"
#include "otfs/channel.hpp"
#include "otfs/zak.hpp"

namespace otfs {

/**
 * Time-frequency grid of the multicarrier modem: N slots of duration tau_p,
 * M subcarriers at spacing nu_p / ... = B / M. Entry [n, m] lives at flat
 * index n*M + m.
 */
struct TFGrid {
    LatticeParams params;
    std::vector<cplx> samples;  // slot-major, length M*N

    TFGrid() = default;
    explicit TFGrid(const LatticeParams& p)
        : params(p), samples(static_cast<size_t>(p.bins()), cplx{0.0, 0.0}) {}
};

/// Inverse symplectic finite Fourier transform:
/// X_tf[n, m] = (1/sqrt(N*M)) sum_{k,l} x[k, l] exp(j*2*pi*(n*l/N - m*k/M)).
TFGrid isfft(const DDSignal& dd);

/// Exact inverse of isfft.
DDSignal sfft(const TFGrid& tf);

/// Heisenberg transform with rectangular pulses and no cyclic prefix:
/// per-slot unitary IDFT across subcarriers, slots concatenated in time.
TDFrame mc_modulate(const TFGrid& tf);

/// Matched rectangular-pulse receiver: per-slot DFT.
TFGrid mc_demodulate(const TDFrame& frame);

/**
 * Physical channel for the multicarrier modem: the critical-rate frame is
 * treated as one T-periodic band-limited block, delays act as exact spectral
 * phase ramps on the Q-times oversampled grid, Doppler shifts multiply in
 * time, and an ideal band-limiting receive filter returns the critical-rate
 * samples. Not thread-safe; use one instance per worker.
 */
class McChannelSimulator {
  public:
    McChannelSimulator(const LatticeParams& p, int oversampling);
    ~McChannelSimulator();
    McChannelSimulator(const McChannelSimulator&) = delete;
    McChannelSimulator& operator=(const McChannelSimulator&) = delete;

    TDFrame apply(const ChannelRealization& ch, const TDFrame& frame) const;

    /// Full noise-free modem round trip: DD symbols in, received DD frame out.
    DDSignal transmit_receive(const ChannelRealization& ch, const DDSignal& x) const;

    const LatticeParams& params() const { return params_; }

  private:
    LatticeParams params_;
    int oversampling_;
    struct FftPlans;
    std::unique_ptr<FftPlans> plans_;
};

/**
 * Model-free multicarrier acquisition: reads the received pilot response off
 * as the kernel of a 2-D periodic convolution across the DD grid. That model
 * is only approximate for doubly-spread channels, which is precisely the
 * failure mode under study. Kernel entries below
 * threshold_sigmas * sqrt(n0/E_p) are zeroed.
 */
std::vector<cplx> mc_estimate_kernel(const DDSignal& received_pilot, const PilotConfig& cfg,
                                     double n0);

/// Doubly-circulant channel matrix of the assumed periodic-convolution model.
ChannelMatrix mc_build_H(const std::vector<cplx>& kernel, const LatticeParams& p);

}  // namespace otfs
