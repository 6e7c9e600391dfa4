#include "otfs/zak.hpp"

#include <cmath>
#include <stdexcept>

namespace otfs {

namespace {

// Twiddle row exp(sign * j*2*pi*l*m/N) for fixed l, m = 0..N-1.
std::vector<cplx> twiddles(int N, int l, double sign) {
    std::vector<cplx> w(N);
    for (int m = 0; m < N; ++m) {
        const double ph = sign * 2.0 * M_PI * static_cast<double>(l) * m / N;
        w[m] = {std::cos(ph), std::sin(ph)};
    }
    return w;
}

}  // namespace

TDFrame inverse_zak(const DDSignal& sig) {
    const LatticeParams& p = sig.params();
    const int M = p.delay_bins, N = p.doppler_bins;
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    TDFrame frame(p);
    for (int l = 0; l < N; ++l) {
        const auto w = twiddles(N, l, +1.0);
        for (int k = 0; k < M; ++k) {
            const cplx x = sig.at(k, l);
            if (x == cplx{0.0, 0.0}) continue;
            for (int m = 0; m < N; ++m) frame.samples[k + m * M] += x * w[m];
        }
    }
    for (auto& v : frame.samples) v *= scale;
    return frame;
}

DDSignal forward_zak(const TDFrame& frame) {
    const LatticeParams& p = frame.params;
    if (frame.samples.size() != static_cast<size_t>(p.bins()))
        throw std::invalid_argument("forward_zak: core frame length must be M*N");
    const int M = p.delay_bins, N = p.doppler_bins;
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    DDSignal x(p);
    for (int l = 0; l < N; ++l) {
        const auto w = twiddles(N, l, -1.0);
        for (int k = 0; k < M; ++k) {
            cplx acc{0.0, 0.0};
            for (int m = 0; m < N; ++m) acc += frame.samples[k + m * M] * w[m];
            x.at(k, l) = acc * scale;
        }
    }
    return x;
}

}  // namespace otfs
