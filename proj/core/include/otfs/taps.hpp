#pragma once

#include <map>
#include <utility>

#include "otfs/dd_signal.hpp"

namespace otfs {

/**
 * Sparse effective-channel filter: discrete DD taps h[k, l] on plain Z^2
 * indices (aperiodic, unlike DDSignal) with recorded support bounds.
 *
 * The discrete twisted convolution of a tap set with a quasi-periodic signal,
 *
 *   y[k, l] = sum_{k', l'} h[k - k', l - l'] x[k', l'] exp(j*2*pi*(l-l')*k'/(N*M)),
 *
 * is the channel I/O relation; the sum is finite because the taps have
 * bounded support, and the output is again quasi-periodic.
 */
class DDTapSet {
  public:
    DDTapSet() = default;
    explicit DDTapSet(const LatticeParams& params) : params_(params) {}

    const LatticeParams& params() const { return params_; }

    /// Accumulate gain onto tap (k, l).
    void add(int k, int l, cplx gain);
    void set(int k, int l, cplx gain);

    cplx gain_at(int k, int l) const;
    size_t size() const { return taps_.size(); }
    bool empty() const { return taps_.empty(); }

    /// Drop taps with |gain| below `floor_rel` times the largest |gain|.
    void prune(double floor_rel);

    int k_min() const { return k_min_; }
    int k_max() const { return k_max_; }
    int l_min() const { return l_min_; }
    int l_max() const { return l_max_; }

    const std::map<std::pair<int, int>, cplx>& taps() const { return taps_; }

    double energy() const;

  private:
    void update_bounds(int k, int l);
    void recompute_bounds();

    LatticeParams params_;
    std::map<std::pair<int, int>, cplx> taps_;
    int k_min_ = 0, k_max_ = 0, l_min_ = 0, l_max_ = 0;
};

/// y = h (twisted*) x on the fundamental domain.
DDSignal twisted_convolve(const DDTapSet& h, const DDSignal& x);

/// Tap-set composition a (twisted*) b; twisted convolution is associative,
/// so convolving signals with (a*b) equals convolving twice.
DDTapSet twisted_convolve(const DDTapSet& a, const DDTapSet& b);

/// Response of tap set h to a unit quasi-periodic pulse at bin (k, l),
/// accumulated into `out` (must be zero-initialised, same lattice). Exactly
/// twisted_convolve(h, unit pulse) but in O(|taps|).
void accumulate_pulse_response(const DDTapSet& h, int k, int l, cplx amplitude, DDSignal& out);

}  // namespace otfs
