#pragma once

#include <complex>
#include <vector>

#include "otfs/lattice.hpp"

namespace otfs {

using cplx = std::complex<double>;

/**
 * One fundamental period of a discrete quasi-periodic delay-Doppler signal.
 *
 * Only the M*N samples x[k, l] with 0 <= k < M, 0 <= l < N are stored; the
 * value at any other integer lattice point follows from the quasi-periodic
 * extension rule
 *
 *   x[k + n*M, l + m*N] = x[k, l] * exp(j*2*pi*n*l/N)
 *
 * which extend() evaluates on demand. Storage is delay-major: sample (k, l)
 * lives at flat index l*M + k, the same ordering vectorize() uses.
 */
class DDSignal {
  public:
    DDSignal() = default;
    explicit DDSignal(const LatticeParams& params)
        : params_(params), samples_(static_cast<size_t>(params.bins()), cplx{0.0, 0.0}) {}
    DDSignal(const LatticeParams& params, std::vector<cplx> samples);

    const LatticeParams& params() const { return params_; }

    cplx& at(int k, int l) { return samples_[flat(k, l)]; }
    const cplx& at(int k, int l) const { return samples_[flat(k, l)]; }

    /// Quasi-periodic evaluation at any integer (k, l).
    cplx extend(int k, int l) const;

    const std::vector<cplx>& samples() const { return samples_; }
    std::vector<cplx>& samples() { return samples_; }

    double energy() const;

    /// Flat vector with element l*M + k equal to sample (k, l).
    std::vector<cplx> vectorize() const { return samples_; }
    static DDSignal devectorize(const LatticeParams& params, const std::vector<cplx>& v);

  private:
    size_t flat(int k, int l) const {
        return static_cast<size_t>(l) * params_.delay_bins + static_cast<size_t>(k);
    }

    LatticeParams params_;
    std::vector<cplx> samples_;
};

/// floor division, the index-folding primitive behind the extension rule
inline int floor_div(int a, int b) {
    int q = a / b, r = a % b;
    return (r != 0 && (r < 0) != (b < 0)) ? q - 1 : q;
}

}  // namespace otfs
