#include "otfs/filters.hpp"

#include <cmath>
#include <stdexcept>

namespace otfs {

void FilterSpec::check() const {
    if (beta_tau < 0.0 || beta_tau > 1.0 || beta_nu < 0.0 || beta_nu > 1.0)
        throw std::invalid_argument("FilterSpec: rolloffs must lie in [0, 1]");
    if (half_width_tau < 1 || half_width_nu < 1)
        throw std::invalid_argument("FilterSpec: truncation half-widths must be >= 1");
}

namespace {

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = M_PI * x;
    return std::sin(px) / px;
}

// Smooth truncation: a raised-cosine taper over the outer quarter of the
// window. A hard cut at K bins leaves Gibbs ripples of order 1/(pi*K) in the
// composed effective channel; the taper pushes the truncation residual well
// below the tap floor while keeping the support bound at K.
double edge_taper(double x, int half_width) {
    const double ax = std::abs(x);
    const double w = std::max(1.0, half_width / 4.0);
    const double start = half_width - w;
    if (ax <= start) return 1.0;
    if (ax >= half_width) return 0.0;
    const double c = std::cos(0.5 * M_PI * (ax - start) / w);
    return c * c;
}

}  // namespace

double rrc_pulse(double x, double beta) {
    if (beta == 0.0) return sinc(x);
    // removable singularities handled by their analytic limits
    if (x == 0.0) return 1.0 - beta + 4.0 * beta / M_PI;
    const double q = 4.0 * beta * x;
    if (std::abs(std::abs(q) - 1.0) < 1e-9) {
        const double a = M_PI / (4.0 * beta);
        return (beta / std::sqrt(2.0)) *
               ((1.0 + 2.0 / M_PI) * std::sin(a) + (1.0 - 2.0 / M_PI) * std::cos(a));
    }
    const double num = std::sin(M_PI * x * (1.0 - beta)) + q * std::cos(M_PI * x * (1.0 + beta));
    const double den = M_PI * x * (1.0 - q * q);
    return num / den;
}

double filter_delay_profile(const FilterSpec& spec, const LatticeParams& p, double tau_s) {
    const double x = p.bandwidth_hz * tau_s;
    if (std::abs(x) >= spec.half_width_tau) return 0.0;
    const double r = spec.kind == FilterKind::Sinc ? sinc(x) : rrc_pulse(x, spec.beta_tau);
    return std::sqrt(p.bandwidth_hz) * r * edge_taper(x, spec.half_width_tau);
}

double filter_doppler_profile(const FilterSpec& spec, const LatticeParams& p, double nu_hz) {
    const double x = p.duration_s * nu_hz;
    if (std::abs(x) >= spec.half_width_nu) return 0.0;
    const double r = spec.kind == FilterKind::Sinc ? sinc(x) : rrc_pulse(x, spec.beta_nu);
    return std::sqrt(p.duration_s) * r * edge_taper(x, spec.half_width_nu);
}

double filter_evaluate(const FilterSpec& spec, const LatticeParams& p, double tau_s, double nu_hz) {
    return filter_delay_profile(spec, p, tau_s) * filter_doppler_profile(spec, p, nu_hz);
}

FilterTable sample_grid(const FilterSpec& spec, const LatticeParams& p, int oversampling) {
    spec.check();
    if (oversampling < 1) throw std::invalid_argument("sample_grid: oversampling must be >= 1");
    FilterTable t;
    t.oversampling = oversampling;
    t.half_tau = oversampling * spec.half_width_tau;
    t.half_nu = oversampling * spec.half_width_nu;
    t.delay_samples.resize(static_cast<size_t>(2 * t.half_tau + 1));
    t.doppler_samples.resize(static_cast<size_t>(2 * t.half_nu + 1));
    for (int i = -t.half_tau; i <= t.half_tau; ++i)
        t.delay_samples[static_cast<size_t>(i + t.half_tau)] =
            filter_delay_profile(spec, p, i / (oversampling * p.bandwidth_hz));
    for (int j = -t.half_nu; j <= t.half_nu; ++j)
        t.doppler_samples[static_cast<size_t>(j + t.half_nu)] =
            filter_doppler_profile(spec, p, j / (oversampling * p.duration_s));
    return t;
}

}  // namespace otfs
