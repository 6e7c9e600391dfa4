#include "otfs/acquisition.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace otfs {

PilotConfig PilotConfig::centered(const LatticeParams& p, double energy) {
    PilotConfig cfg;
    cfg.pilot_delay_bin = p.delay_bins / 2;
    cfg.pilot_doppler_bin = p.doppler_bins / 2;
    cfg.energy = energy;
    cfg.region_delay = (p.delay_bins - 1) / 2;
    cfg.region_doppler = (p.doppler_bins - 1) / 2;
    // The row and column half a period away from the pilot stay unread even
    // for even M, N: a single pilot cannot tell +M/2 from -M/2 (the unwind
    // phases differ), and a wrong-sign tap is worse than a missing one.
    return cfg;
}

void PilotConfig::check(const LatticeParams& p) const {
    if (pilot_delay_bin < 0 || pilot_delay_bin >= p.delay_bins || pilot_doppler_bin < 0 ||
        pilot_doppler_bin >= p.doppler_bins)
        throw std::invalid_argument("PilotConfig: pilot bin outside fundamental domain");
    if (energy <= 0.0) throw std::invalid_argument("PilotConfig: pilot energy must be positive");
    if (region_delay < 0 || region_delay_extra < 0 || region_delay_extra > 1 ||
        2 * region_delay + 1 + region_delay_extra > p.delay_bins || region_doppler < 0 ||
        region_doppler_extra < 0 || region_doppler_extra > 1 ||
        2 * region_doppler + 1 + region_doppler_extra > p.doppler_bins)
        throw std::invalid_argument("PilotConfig: estimation region exceeds fundamental domain");
}

DDSignal make_pilot_signal(const LatticeParams& p, const PilotConfig& cfg) {
    cfg.check(p);
    DDSignal x(p);
    x.at(cfg.pilot_delay_bin, cfg.pilot_doppler_bin) = std::sqrt(cfg.energy);
    return x;
}

DDTapSet estimate_h_eff(const DDSignal& received_pilot, const PilotConfig& cfg, double n0) {
    const LatticeParams& p = received_pilot.params();
    cfg.check(p);
    const double MN = static_cast<double>(p.delay_bins) * p.doppler_bins;
    const double amp = std::sqrt(cfg.energy);
    const double threshold = n0 > 0.0 ? cfg.threshold_sigmas * std::sqrt(n0 / cfg.energy) : 0.0;
    DDTapSet est(p);
    for (int dl = -cfg.region_doppler - cfg.region_doppler_extra; dl <= cfg.region_doppler; ++dl) {
        for (int dk = -cfg.region_delay - cfg.region_delay_extra; dk <= cfg.region_delay; ++dk) {
            const cplx y = received_pilot.extend(cfg.pilot_delay_bin + dk, cfg.pilot_doppler_bin + dl);
            // unwind the twisted-convolution phase of the single pilot input
            const double ph = -2.0 * M_PI * dl * cfg.pilot_delay_bin / MN;
            const cplx tap = y * cplx{std::cos(ph), std::sin(ph)} / amp;
            if (std::abs(tap) > threshold) est.set(dk, dl, tap);
        }
    }
    return est;
}

ChannelMatrix build_H(const DDTapSet& taps, const LatticeParams& p) {
    const int M = p.delay_bins, N = p.doppler_bins;
    const double MN = static_cast<double>(M) * N;
    ChannelMatrix cm{p, Eigen::MatrixXcd::Zero(p.bins(), p.bins())};
    for (const auto& [ab, g] : taps.taps()) {
        const int a = ab.first, b = ab.second;
        for (int l = 0; l < N; ++l) {
            const int lp = l - b - floor_div(l - b, N) * N;
            for (int k = 0; k < M; ++k) {
                const int n = floor_div(k - a, M);
                const int kp = k - a - n * M;
                // twisted phase at the aliased input position, plus the
                // quasi-periodic phase of the delay wrap
                const double ph = 2.0 * M_PI * (b * (k - a) / MN + static_cast<double>(n) * lp / N);
                cm.H(l * M + k, lp * M + kp) += g * cplx{std::cos(ph), std::sin(ph)};
            }
        }
    }
    return cm;
}

std::vector<double> compute_rpe(const DDTapSet& true_taps, const DDTapSet& estimated,
                                const LatticeParams& p) {
    const int M = p.delay_bins, N = p.doppler_bins;
    std::vector<double> rpe(static_cast<size_t>(p.bins()));
    DDSignal y_true(p), y_pred(p);
    for (int l = 0; l < N; ++l) {
        for (int k = 0; k < M; ++k) {
            std::fill(y_true.samples().begin(), y_true.samples().end(), cplx{0.0, 0.0});
            std::fill(y_pred.samples().begin(), y_pred.samples().end(), cplx{0.0, 0.0});
            accumulate_pulse_response(true_taps, k, l, cplx{1.0, 0.0}, y_true);
            accumulate_pulse_response(estimated, k, l, cplx{1.0, 0.0}, y_pred);
            double num = 0.0, den = 0.0;
            for (int i = 0; i < p.bins(); ++i) {
                num += std::norm(y_pred.samples()[i] - y_true.samples()[i]);
                den += std::norm(y_true.samples()[i]);
            }
            rpe[static_cast<size_t>(l) * M + k] =
                den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
        }
    }
    return rpe;
}

}  // namespace otfs
