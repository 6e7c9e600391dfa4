#include "otfs/mcotfs.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace otfs {

namespace {

std::mutex g_fftw_plan_mutex;  // FFTW planning is not thread-safe

cplx omega(double turns) { return {std::cos(2.0 * M_PI * turns), std::sin(2.0 * M_PI * turns)}; }

}  // namespace

TFGrid isfft(const DDSignal& dd) {
    const LatticeParams& p = dd.params();
    const int M = p.delay_bins, N = p.doppler_bins;
    TFGrid tf(p);
    // separable: IDFT over Doppler (l -> n), DFT over delay (k -> m)
    std::vector<cplx> tmp(static_cast<size_t>(M) * N);  // [k, n]
    for (int k = 0; k < M; ++k)
        for (int n = 0; n < N; ++n) {
            cplx acc{0.0, 0.0};
            for (int l = 0; l < N; ++l) acc += dd.at(k, l) * omega(static_cast<double>(n) * l / N);
            tmp[static_cast<size_t>(k) * N + n] = acc;
        }
    const double scale = 1.0 / std::sqrt(static_cast<double>(M) * N);
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < M; ++m) {
            cplx acc{0.0, 0.0};
            for (int k = 0; k < M; ++k)
                acc += tmp[static_cast<size_t>(k) * N + n] * omega(-static_cast<double>(m) * k / M);
            tf.samples[static_cast<size_t>(n) * M + m] = acc * scale;
        }
    return tf;
}

DDSignal sfft(const TFGrid& tf) {
    const LatticeParams& p = tf.params;
    const int M = p.delay_bins, N = p.doppler_bins;
    DDSignal dd(p);
    std::vector<cplx> tmp(static_cast<size_t>(M) * N);  // [k, n]
    for (int n = 0; n < N; ++n)
        for (int k = 0; k < M; ++k) {
            cplx acc{0.0, 0.0};
            for (int m = 0; m < M; ++m)
                acc += tf.samples[static_cast<size_t>(n) * M + m] * omega(static_cast<double>(m) * k / M);
            tmp[static_cast<size_t>(k) * N + n] = acc;
        }
    const double scale = 1.0 / std::sqrt(static_cast<double>(M) * N);
    for (int k = 0; k < M; ++k)
        for (int l = 0; l < N; ++l) {
            cplx acc{0.0, 0.0};
            for (int n = 0; n < N; ++n)
                acc += tmp[static_cast<size_t>(k) * N + n] * omega(-static_cast<double>(n) * l / N);
            dd.at(k, l) = acc * scale;
        }
    return dd;
}

TDFrame mc_modulate(const TFGrid& tf) {
    const LatticeParams& p = tf.params;
    const int M = p.delay_bins, N = p.doppler_bins;
    TDFrame frame(p);
    const double scale = 1.0 / std::sqrt(static_cast<double>(M));
    for (int n = 0; n < N; ++n)
        for (int r = 0; r < M; ++r) {
            cplx acc{0.0, 0.0};
            for (int m = 0; m < M; ++m)
                acc += tf.samples[static_cast<size_t>(n) * M + m] * omega(static_cast<double>(m) * r / M);
            frame.samples[static_cast<size_t>(n) * M + r] = acc * scale;
        }
    return frame;
}

TFGrid mc_demodulate(const TDFrame& frame) {
    const LatticeParams& p = frame.params;
    const int M = p.delay_bins, N = p.doppler_bins;
    if (frame.samples.size() != static_cast<size_t>(p.bins()))
        throw std::invalid_argument("mc_demodulate: frame length must be M*N");
    TFGrid tf(p);
    const double scale = 1.0 / std::sqrt(static_cast<double>(M));
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < M; ++m) {
            cplx acc{0.0, 0.0};
            for (int r = 0; r < M; ++r)
                acc += frame.samples[static_cast<size_t>(n) * M + r] * omega(-static_cast<double>(m) * r / M);
            tf.samples[static_cast<size_t>(n) * M + m] = acc * scale;
        }
    return tf;
}

struct McChannelSimulator::FftPlans {
    int crit = 0, over = 0;
    fftw_complex* buf_crit = nullptr;
    fftw_complex* buf_over = nullptr;
    fftw_plan fwd_crit{}, inv_crit{}, fwd_over{}, inv_over{};

    FftPlans(int mn, int l) : crit(mn), over(l) {
        std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
        buf_crit = fftw_alloc_complex(static_cast<size_t>(crit));
        buf_over = fftw_alloc_complex(static_cast<size_t>(over));
        fwd_crit = fftw_plan_dft_1d(crit, buf_crit, buf_crit, FFTW_FORWARD, FFTW_ESTIMATE);
        inv_crit = fftw_plan_dft_1d(crit, buf_crit, buf_crit, FFTW_BACKWARD, FFTW_ESTIMATE);
        fwd_over = fftw_plan_dft_1d(over, buf_over, buf_over, FFTW_FORWARD, FFTW_ESTIMATE);
        inv_over = fftw_plan_dft_1d(over, buf_over, buf_over, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftPlans() {
        std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
        fftw_destroy_plan(fwd_crit);
        fftw_destroy_plan(inv_crit);
        fftw_destroy_plan(fwd_over);
        fftw_destroy_plan(inv_over);
        fftw_free(buf_crit);
        fftw_free(buf_over);
    }
    cplx* crit_data() { return reinterpret_cast<cplx*>(buf_crit); }
    cplx* over_data() { return reinterpret_cast<cplx*>(buf_over); }
};

McChannelSimulator::McChannelSimulator(const LatticeParams& p, int oversampling)
    : params_(p), oversampling_(oversampling) {
    if (oversampling < 1) throw std::invalid_argument("McChannelSimulator: oversampling must be >= 1");
    plans_ = std::make_unique<FftPlans>(p.bins(), oversampling * p.bins());
}

McChannelSimulator::~McChannelSimulator() = default;

TDFrame McChannelSimulator::apply(const ChannelRealization& ch, const TDFrame& frame) const {
    const LatticeParams& p = params_;
    const int MN = p.bins(), L = oversampling_ * MN;
    if (frame.samples.size() != static_cast<size_t>(MN))
        throw std::invalid_argument("McChannelSimulator: frame length must be M*N");
    const double T = p.duration_s;
    auto& fp = *plans_;

    // critical-rate spectrum
    std::copy(frame.samples.begin(), frame.samples.end(), fp.crit_data());
    fftw_execute(fp.fwd_crit);
    std::vector<cplx> spec(static_cast<size_t>(MN));
    std::copy(fp.crit_data(), fp.crit_data() + MN, spec.begin());

    std::vector<cplx> accum(static_cast<size_t>(L), cplx{0.0, 0.0});
    for (const auto& path : ch.paths) {
        // zero-padded spectrum with the exact delay phase ramp
        std::fill(fp.over_data(), fp.over_data() + L, cplx{0.0, 0.0});
        for (int f = -MN / 2; f < MN / 2; ++f) {
            const int src = (f + MN) % MN;
            const int dst = (f + L) % L;
            fp.over_data()[dst] = spec[static_cast<size_t>(src)] * omega(-f * path.delay_s / T);
        }
        fftw_execute(fp.inv_over);
        // Doppler modulation in time; IFFT is unnormalized, fold in 1/MN
        const double dt = T / L;
        const double scale = 1.0 / MN;
        for (int q = 0; q < L; ++q) {
            const double t = q * dt - path.delay_s;
            accum[static_cast<size_t>(q)] +=
                path.gain * scale * omega(path.doppler_hz * t) * fp.over_data()[static_cast<size_t>(q)];
        }
    }

    // ideal band-limiting receiver back to the critical rate
    std::copy(accum.begin(), accum.end(), fp.over_data());
    fftw_execute(fp.fwd_over);
    std::vector<cplx> band(static_cast<size_t>(MN));
    for (int f = -MN / 2; f < MN / 2; ++f)
        band[static_cast<size_t>((f + MN) % MN)] = fp.over_data()[static_cast<size_t>((f + L) % L)];
    std::copy(band.begin(), band.end(), fp.crit_data());
    fftw_execute(fp.inv_crit);

    TDFrame out(p);
    const double scale = 1.0 / L;
    for (int j = 0; j < MN; ++j) out.samples[static_cast<size_t>(j)] = scale * fp.crit_data()[j];
    return out;
}

DDSignal McChannelSimulator::transmit_receive(const ChannelRealization& ch, const DDSignal& x) const {
    return sfft(mc_demodulate(apply(ch, mc_modulate(isfft(x)))));
}

std::vector<cplx> mc_estimate_kernel(const DDSignal& received_pilot, const PilotConfig& cfg,
                                     double n0) {
    const LatticeParams& p = received_pilot.params();
    cfg.check(p);
    const int M = p.delay_bins, N = p.doppler_bins;
    const double amp = std::sqrt(cfg.energy);
    const double threshold = n0 > 0.0 ? cfg.threshold_sigmas * std::sqrt(n0 / cfg.energy) : 0.0;
    std::vector<cplx> kernel(static_cast<size_t>(p.bins()), cplx{0.0, 0.0});
    for (int dl = -cfg.region_doppler; dl <= cfg.region_doppler; ++dl)
        for (int dk = -cfg.region_delay; dk <= cfg.region_delay; ++dk) {
            const int k = (cfg.pilot_delay_bin + dk % M + M) % M;
            const int l = (cfg.pilot_doppler_bin + dl % N + N) % N;
            const cplx g = received_pilot.at(k, l) / amp;
            if (std::abs(g) > threshold)
                kernel[static_cast<size_t>((dl % N + N) % N) * M + ((dk % M + M) % M)] = g;
        }
    return kernel;
}

ChannelMatrix mc_build_H(const std::vector<cplx>& kernel, const LatticeParams& p) {
    const int M = p.delay_bins, N = p.doppler_bins;
    if (kernel.size() != static_cast<size_t>(p.bins()))
        throw std::invalid_argument("mc_build_H: kernel size must be M*N");
    ChannelMatrix cm{p, Eigen::MatrixXcd(p.bins(), p.bins())};
    for (int l = 0; l < N; ++l)
        for (int k = 0; k < M; ++k)
            for (int lp = 0; lp < N; ++lp)
                for (int kp = 0; kp < M; ++kp)
                    cm.H(l * M + k, lp * M + kp) =
                        kernel[static_cast<size_t>((l - lp + N) % N) * M + ((k - kp + M) % M)];
    return cm;
}

}  // namespace otfs
