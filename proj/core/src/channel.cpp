#include "otfs/channel.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "otfs/rng.hpp"

namespace otfs {

double ChannelRealization::max_delay_s() const {
    double d = 0.0;
    for (const auto& path : paths) d = std::max(d, path.delay_s);
    return d;
}

double ChannelRealization::max_abs_doppler_hz() const {
    double d = 0.0;
    for (const auto& path : paths) d = std::max(d, std::abs(path.doppler_hz));
    return d;
}

ChannelProfile ChannelProfile::veh_a(double doppler_max_hz) {
    ChannelProfile p;
    p.delays_us = {0.0, 0.31, 0.71, 1.09, 1.73, 2.51};
    p.powers_db = {0.0, -1.0, -9.0, -10.0, -15.0, -20.0};
    p.doppler_max_hz = doppler_max_hz;
    p.check();
    return p;
}

std::vector<double> ChannelProfile::normalized_powers() const {
    std::vector<double> lin(powers_db.size());
    double sum = 0.0;
    for (size_t i = 0; i < powers_db.size(); ++i) {
        lin[i] = std::pow(10.0, powers_db[i] / 10.0);
        sum += lin[i];
    }
    for (auto& v : lin) v /= sum;
    return lin;
}

void ChannelProfile::check() const {
    if (delays_us.empty() || delays_us.size() != powers_db.size())
        throw std::invalid_argument("ChannelProfile: need matching non-empty delay/power lists");
    if (doppler_max_hz < 0.0)
        throw std::invalid_argument("ChannelProfile: doppler_max_hz must be >= 0");
    for (double d : delays_us)
        if (d < 0.0) throw std::invalid_argument("ChannelProfile: delays must be >= 0");
}

ChannelRealization draw_channel(const ChannelProfile& profile, uint64_t seed) {
    profile.check();
    Rng rng(seed);
    const auto powers = profile.normalized_powers();
    ChannelRealization ch;
    ch.paths.resize(profile.delays_us.size());
    for (size_t i = 0; i < ch.paths.size(); ++i) {
        ch.paths[i].gain = rng.complex_normal(powers[i]);
        ch.paths[i].delay_s = profile.delays_us[i] * 1e-6;
        ch.paths[i].doppler_hz = profile.doppler_max_hz * std::cos(rng.angle());
    }
    return ch;
}

bool crystallization_holds(const ChannelProfile& profile, const LatticeParams& p) {
    const double tau_max = *std::max_element(profile.delays_us.begin(), profile.delays_us.end()) * 1e-6;
    return tau_max < p.delay_period_s && 2.0 * profile.doppler_max_hz < p.doppler_period_hz;
}

DDTapSet compute_h_eff(const ChannelRealization& ch, const FilterSpec& w_tx,
                       const FilterSpec& w_rx, const LatticeParams& p, int oversampling,
                       double floor_rel) {
    if (oversampling < 1) throw std::invalid_argument("compute_h_eff: oversampling must be >= 1");
    if (ch.paths.empty()) throw std::invalid_argument("compute_h_eff: empty path list");
    if (ch.max_delay_s() >= p.delay_period_s || 2.0 * ch.max_abs_doppler_hz() >= p.doppler_period_hz)
        std::clog << "compute_h_eff: warning, channel spread violates the crystallization condition\n";

    const int Q = oversampling;
    const double B = p.bandwidth_hz, T = p.duration_s;
    const double dtau = 1.0 / (Q * B), dnu = 1.0 / (Q * T);
    const int Ptau = Q * w_rx.half_width_tau;  // rx delay-grid half width
    const int Rnu = Q * w_rx.half_width_nu;    // rx Doppler-grid half width

    // rx filter factors on the integration grid
    std::vector<double> w1rx(2 * Ptau + 1), w2rx(2 * Rnu + 1);
    for (int i = -Ptau; i <= Ptau; ++i) w1rx[i + Ptau] = filter_delay_profile(w_rx, p, i * dtau);
    for (int r = -Rnu; r <= Rnu; ++r) w2rx[r + Rnu] = filter_doppler_profile(w_rx, p, r * dnu);

    DDTapSet out(p);
    for (const auto& path : ch.paths) {
        const double tau_i = path.delay_s, nu_i = path.doppler_hz;
        const int k_lo = static_cast<int>(std::ceil(B * tau_i - w_rx.half_width_tau - w_tx.half_width_tau));
        const int k_hi = static_cast<int>(std::floor(B * tau_i + w_rx.half_width_tau + w_tx.half_width_tau));
        const int l_lo = static_cast<int>(std::ceil(T * nu_i - w_rx.half_width_nu - w_tx.half_width_nu));
        const int l_hi = static_cast<int>(std::floor(T * nu_i + w_rx.half_width_nu + w_tx.half_width_nu));
        const int nk = k_hi - k_lo + 1, nl = l_hi - l_lo + 1;
        const int nr = 2 * Rnu + 1;

        // Inner delay integral A1(k, r) = sum_p w1rx(tau') w1tx(k/B - tau_i - tau')
        //                                  exp(-j*2*pi*(nu_i + r*dnu)*tau') * dtau
        std::vector<cplx> A1(static_cast<size_t>(nk) * nr, cplx{0.0, 0.0});
        for (int ki = 0; ki < nk; ++ki) {
            const double a = (k_lo + ki) / B - tau_i;
            cplx* row = &A1[static_cast<size_t>(ki) * nr];
            for (int pi = -Ptau; pi <= Ptau; ++pi) {
                const double w1p = w1rx[pi + Ptau];
                if (w1p == 0.0) continue;
                const double tau_prime = pi * dtau;
                const double g = w1p * filter_delay_profile(w_tx, p, a - tau_prime);
                if (g == 0.0) continue;
                const double base_ph = -2.0 * M_PI * (nu_i - Rnu * dnu) * tau_prime;
                const double step_ph = -2.0 * M_PI * dnu * tau_prime;
                cplx ph = g * cplx{std::cos(base_ph), std::sin(base_ph)};
                const cplx rot{std::cos(step_ph), std::sin(step_ph)};
                for (int r = 0; r < nr; ++r) {
                    row[r] += ph;
                    ph *= rot;
                }
            }
            for (int r = 0; r < nr; ++r) row[r] *= dtau;
        }

        // tx Doppler factor w2tx(l/T - nu' - nu_i) per (l, r)
        std::vector<double> w2s(static_cast<size_t>(nl) * nr);
        for (int li = 0; li < nl; ++li) {
            const double b = (l_lo + li) / T - nu_i;
            for (int r = -Rnu; r <= Rnu; ++r)
                w2s[static_cast<size_t>(li) * nr + (r + Rnu)] =
                    w2rx[r + Rnu] * filter_doppler_profile(w_tx, p, b - r * dnu);
        }

        // Assemble C_i on the lattice and accumulate h_i * C_i.
        for (int ki = 0; ki < nk; ++ki) {
            const int k = k_lo + ki;
            const double tau = k / B;
            const cplx* A1row = &A1[static_cast<size_t>(ki) * nr];
            // exp(j*2*pi*nu'*tau) over the r grid
            const double base_ph = 2.0 * M_PI * (-Rnu * dnu) * tau;
            const double step_ph = 2.0 * M_PI * dnu * tau;
            const cplx rot{std::cos(step_ph), std::sin(step_ph)};
            std::vector<cplx> expr(nr);
            cplx ph{std::cos(base_ph), std::sin(base_ph)};
            for (int r = 0; r < nr; ++r) {
                expr[r] = ph;
                ph *= rot;
            }
            const double lead_ph = 2.0 * M_PI * nu_i * (tau - tau_i);
            const cplx lead = path.gain * cplx{std::cos(lead_ph), std::sin(lead_ph)};
            for (int li = 0; li < nl; ++li) {
                const double* w2row = &w2s[static_cast<size_t>(li) * nr];
                cplx acc{0.0, 0.0};
                for (int r = 0; r < nr; ++r) acc += w2row[r] * A1row[r] * expr[r];
                const cplx tap = lead * acc * dnu;
                if (tap != cplx{0.0, 0.0}) out.add(k, l_lo + li, tap);
            }
        }
    }
    out.prune(floor_rel);
    return out;
}

TdChannelSimulator::TdChannelSimulator(const LatticeParams& p, const FilterSpec& w_tx,
                                       const FilterSpec& w_rx, int oversampling, int periods)
    : params_(p), w_tx_(w_tx), w_rx_(w_rx), oversampling_(oversampling), periods_(periods) {
    if (oversampling < 1) throw std::invalid_argument("TdChannelSimulator: oversampling must be >= 1");
    if (periods < 1) throw std::invalid_argument("TdChannelSimulator: periods must be >= 1");
    w_tx.check();
    w_rx.check();
    critical_ = periods_ * p.bins();
    total_ = oversampling_ * critical_;

    const int Q = oversampling_;
    const double B = p.bandwidth_hz, T = p.duration_s;
    const double dt = 1.0 / (Q * B);

    const int half = Q * w_rx_.half_width_tau;
    rx_delay_taps_.resize(static_cast<size_t>(2 * half + 1));
    for (int g = -half; g <= half; ++g)
        rx_delay_taps_[g + half] = filter_delay_profile(w_rx_, p, g * dt);

    // Doppler windows: Riemann synthesis from the same Q-grid samples of w2
    // that the effective-channel integral uses, so both routes share one
    // Doppler discretization.
    auto window = [&](const FilterSpec& spec, double u) {
        const double dnu = 1.0 / (Q * T);
        const int half_nu = Q * spec.half_width_nu;
        double acc = filter_doppler_profile(spec, p, 0.0);
        for (int r = 1; r <= half_nu; ++r)
            acc += 2.0 * filter_doppler_profile(spec, p, r * dnu) * std::cos(2.0 * M_PI * r * dnu * u);
        return acc * dnu;
    };
    tx_window_crit_.resize(static_cast<size_t>(critical_));
    for (int j = 0; j < critical_; ++j)
        tx_window_crit_[j] = window(w_tx_, (j - critical_ / 2) / B);
    rx_window_ov_.resize(static_cast<size_t>(total_));
    for (int q = 0; q < total_; ++q)
        rx_window_ov_[q] = window(w_rx_, (q - total_ / 2) * dt);
}

DDSignal TdChannelSimulator::apply(const ChannelRealization& ch, const TDFrame& frame) const {
    if (!frame.params.same_grid(params_))
        throw std::invalid_argument("TdChannelSimulator: frame lattice mismatch");
    if (frame.samples.size() != static_cast<size_t>(params_.bins()))
        throw std::invalid_argument("TdChannelSimulator: frame core length must be M*N");

    const LatticeParams& p = params_;
    const int Q = oversampling_, MN = p.bins(), L = total_, C = critical_;
    const double B = p.bandwidth_hz, T = p.duration_s;
    const double dt = 1.0 / (Q * B);
    const int half = Q * w_tx_.half_width_tau;
    const double sqrtT = std::sqrt(T);

    // Windowed pulse-train amplitudes at critical positions.
    std::vector<cplx> amp(static_cast<size_t>(C));
    for (int j = 0; j < C; ++j) {
        const int jc = j - C / 2;
        const int src = jc >= 0 ? jc % MN : (jc % MN + MN) % MN;
        amp[j] = sqrtT * frame.samples[src] * tx_window_crit_[j];
    }

    std::vector<cplx> received(static_cast<size_t>(L), cplx{0.0, 0.0});
    std::vector<cplx> shifted(static_cast<size_t>(L));
    std::vector<double> pulse(static_cast<size_t>(2 * half + 2));
    for (const auto& path : ch.paths) {
        // Transmit pulses re-evaluated at the delayed positions: exact
        // fractional delay within the model.
        const double qshift = path.delay_s * Q * B;
        const int d = static_cast<int>(std::floor(qshift));
        const double frac = qshift - d;
        for (int g = -half; g <= half + 1; ++g)
            pulse[g + half] = filter_delay_profile(w_tx_, p, (g - frac) * dt);

        std::fill(shifted.begin(), shifted.end(), cplx{0.0, 0.0});
        for (int j = 0; j < C; ++j) {
            const cplx a = amp[j];
            if (a == cplx{0.0, 0.0}) continue;
            const int center = Q * (j - C / 2) + d + L / 2;
            for (int g = -half; g <= half + 1; ++g) {
                const double w = pulse[g + half];
                if (w == 0.0) continue;
                int q = center + g;
                q -= L * floor_div(q, L);
                shifted[q] += a * w;
            }
        }

        // Doppler modulation exp(j*2*pi*nu_i*(t - tau_i)), rotor resynced in blocks.
        const double step = 2.0 * M_PI * path.doppler_hz * dt;
        const cplx rot{std::cos(step), std::sin(step)};
        for (int q0 = 0; q0 < L; q0 += 4096) {
            const double t0 = (q0 - L / 2) * dt - path.delay_s;
            cplx ph = path.gain * cplx{std::cos(2.0 * M_PI * path.doppler_hz * t0),
                                       std::sin(2.0 * M_PI * path.doppler_hz * t0)};
            const int q1 = std::min(q0 + 4096, L);
            for (int q = q0; q < q1; ++q) {
                received[q] += ph * shifted[q];
                ph *= rot;
            }
        }
    }

    // Matched receive filtering: window then delay-domain convolution,
    // sampled at the critical positions only.
    for (int q = 0; q < L; ++q) received[q] *= rx_window_ov_[q];

    const int rx_half = Q * w_rx_.half_width_tau;
    std::vector<cplx> critical_out(static_cast<size_t>(C));
    for (int j = 0; j < C; ++j) {
        const int center = Q * (j - C / 2) + L / 2;
        cplx acc{0.0, 0.0};
        for (int g = -rx_half; g <= rx_half; ++g) {
            const double w = rx_delay_taps_[g + rx_half];
            if (w == 0.0) continue;
            int q = center - g;
            q -= L * floor_div(q, L);
            acc += w * received[q];
        }
        critical_out[j] = acc * dt;
    }

    // Zak fold: collapse T-periods, then the DZT gives the DD samples.
    TDFrame folded(p);
    for (int j = 0; j < C; ++j) {
        const int jc = j - C / 2;
        const int dst = jc >= 0 ? jc % MN : (jc % MN + MN) % MN;
        folded.samples[dst] += critical_out[j];
    }
    DDSignal out = forward_zak(folded);
    for (auto& v : out.samples()) v *= sqrtT;
    return out;
}

DDSignal apply_td(const ChannelRealization& ch, const TDFrame& frame, const FilterSpec& w_tx,
                  const FilterSpec& w_rx, const LatticeParams& p, int oversampling, int periods) {
    return TdChannelSimulator(p, w_tx, w_rx, oversampling, periods).apply(ch, frame);
}

DDSignal add_noise(const DDSignal& sig, double n0, uint64_t seed) {
    if (n0 < 0.0) throw std::invalid_argument("add_noise: n0 must be >= 0");
    if (n0 == 0.0) return sig;
    DDSignal out = sig;
    Rng rng(seed);
    for (auto& v : out.samples()) v += rng.complex_normal(n0);
    return out;
}

}  // namespace otfs
