#include "otfs/dd_signal.hpp"

#include <stdexcept>

namespace otfs {

DDSignal::DDSignal(const LatticeParams& params, std::vector<cplx> samples)
    : params_(params), samples_(std::move(samples)) {
    if (samples_.size() != static_cast<size_t>(params.bins()))
        throw std::invalid_argument("DDSignal: sample count must be M*N");
}

cplx DDSignal::extend(int k, int l) const {
    const int M = params_.delay_bins, N = params_.doppler_bins;
    const int n = floor_div(k, M);
    const int k0 = k - n * M;
    const int l0 = l - floor_div(l, N) * N;
    const cplx v = samples_[flat(k0, l0)];
    if (n == 0 || l0 == 0) return v;
    const double phase = 2.0 * M_PI * static_cast<double>(n) * l0 / N;
    return v * cplx{std::cos(phase), std::sin(phase)};
}

double DDSignal::energy() const {
    double e = 0.0;
    for (const auto& v : samples_) e += std::norm(v);
    return e;
}

DDSignal DDSignal::devectorize(const LatticeParams& params, const std::vector<cplx>& v) {
    if (v.size() != static_cast<size_t>(params.bins()))
        throw std::invalid_argument("devectorize: vector length must be M*N");
    return DDSignal(params, v);
}

}  // namespace otfs
