#include "otfs/taps.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace otfs {

void DDTapSet::add(int k, int l, cplx gain) {
    auto [it, inserted] = taps_.try_emplace({k, l}, gain);
    if (!inserted) it->second += gain;
    update_bounds(k, l);
}

void DDTapSet::set(int k, int l, cplx gain) {
    taps_[{k, l}] = gain;
    update_bounds(k, l);
}

cplx DDTapSet::gain_at(int k, int l) const {
    auto it = taps_.find({k, l});
    return it == taps_.end() ? cplx{0.0, 0.0} : it->second;
}

void DDTapSet::prune(double floor_rel) {
    double peak = 0.0;
    for (const auto& [kl, g] : taps_) peak = std::max(peak, std::abs(g));
    const double floor = peak * floor_rel;
    for (auto it = taps_.begin(); it != taps_.end();) {
        if (std::abs(it->second) < floor)
            it = taps_.erase(it);
        else
            ++it;
    }
    recompute_bounds();
}

double DDTapSet::energy() const {
    double e = 0.0;
    for (const auto& [kl, g] : taps_) e += std::norm(g);
    return e;
}

void DDTapSet::update_bounds(int k, int l) {
    if (taps_.size() == 1) {
        k_min_ = k_max_ = k;
        l_min_ = l_max_ = l;
        return;
    }
    k_min_ = std::min(k_min_, k);
    k_max_ = std::max(k_max_, k);
    l_min_ = std::min(l_min_, l);
    l_max_ = std::max(l_max_, l);
}

void DDTapSet::recompute_bounds() {
    k_min_ = l_min_ = std::numeric_limits<int>::max();
    k_max_ = l_max_ = std::numeric_limits<int>::min();
    for (const auto& [kl, g] : taps_) {
        k_min_ = std::min(k_min_, kl.first);
        k_max_ = std::max(k_max_, kl.first);
        l_min_ = std::min(l_min_, kl.second);
        l_max_ = std::max(l_max_, kl.second);
    }
    if (taps_.empty()) k_min_ = k_max_ = l_min_ = l_max_ = 0;
}

DDSignal twisted_convolve(const DDTapSet& h, const DDSignal& x) {
    if (!h.params().same_grid(x.params()))
        throw std::invalid_argument("twisted_convolve: mismatched lattice parameters");
    const LatticeParams& p = x.params();
    const int M = p.delay_bins, N = p.doppler_bins;
    const double MN = static_cast<double>(M) * N;

    // Halo of quasi-periodic extensions covering every x[k-a, l-b] lookup.
    const int ke0 = 0 - h.k_max(), ke1 = (M - 1) - h.k_min();
    const int le0 = 0 - h.l_max(), le1 = (N - 1) - h.l_min();
    const int kw = ke1 - ke0 + 1, lw = le1 - le0 + 1;
    std::vector<cplx> ext(static_cast<size_t>(kw) * lw);
    for (int l = le0; l <= le1; ++l)
        for (int k = ke0; k <= ke1; ++k)
            ext[static_cast<size_t>(l - le0) * kw + (k - ke0)] = x.extend(k, l);

    DDSignal y(p);
    for (const auto& [kl, g] : h.taps()) {
        const int a = kl.first, b = kl.second;
        const double step = 2.0 * M_PI * b / MN;
        const cplx rot{std::cos(step), std::sin(step)};
        for (int l = 0; l < N; ++l) {
            const cplx* row = &ext[static_cast<size_t>(l - b - le0) * kw - ke0];
            // phase exp(j*2*pi*b*(k-a)/(M*N)) advanced multiplicatively in k
            cplx ph = g * cplx{std::cos(step * (0 - a)), std::sin(step * (0 - a))};
            cplx* out = &y.at(0, l);
            for (int k = 0; k < M; ++k) {
                out[k] += ph * row[k - a];
                ph *= rot;
            }
        }
    }
    return y;
}

DDTapSet twisted_convolve(const DDTapSet& a, const DDTapSet& b) {
    if (!a.params().same_grid(b.params()))
        throw std::invalid_argument("twisted_convolve: mismatched lattice parameters");
    const double MN = static_cast<double>(a.params().delay_bins) * a.params().doppler_bins;
    DDTapSet out(a.params());
    for (const auto& [ka, ga] : a.taps()) {
        for (const auto& [kb, gb] : b.taps()) {
            const int k = ka.first + kb.first;
            const int l = ka.second + kb.second;
            // phase pairs a's Doppler index with b's delay index
            const double phase = 2.0 * M_PI * ka.second * kb.first / MN;
            out.add(k, l, ga * gb * cplx{std::cos(phase), std::sin(phase)});
        }
    }
    return out;
}

void accumulate_pulse_response(const DDTapSet& h, int k, int l, cplx amplitude, DDSignal& out) {
    const LatticeParams& p = out.params();
    const int M = p.delay_bins, N = p.doppler_bins;
    const double MN = static_cast<double>(M) * N;
    for (const auto& [ab, g] : h.taps()) {
        const int a = ab.first, b = ab.second;
        const int n = floor_div(k + a, M);
        const int m = floor_div(l + b, N);
        const int kk = k + a - n * M;
        const int ll = l + b - m * N;
        // x_dd[k - n*M, l] = exp(-j*2*pi*n*l/N); twisted phase uses delay k - n*M
        const double phase = -2.0 * M_PI * n * static_cast<double>(l) / N +
                             2.0 * M_PI * b * (k - static_cast<double>(n) * M) / MN;
        out.at(kk, ll) += amplitude * g * cplx{std::cos(phase), std::sin(phase)};
    }
}

}  // namespace otfs
