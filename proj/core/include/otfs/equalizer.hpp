#pragma once

#include <stdexcept>

#include "otfs/acquisition.hpp"
#include "otfs/allocation.hpp"

namespace otfs {

/// Zero-noise equalization of a rank-deficient system has no unique answer.
struct SingularSystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/**
 * Per-bin MMSE outputs. `symbols` holds x_hat (zeros on inactive bins),
 * `bias` the conditional-mean scale mu_r with E[x_hat_r | x_r] = mu_r x_r,
 * and `sinr` the post-equalization SINR gamma_r = mu_r / (1 - mu_r)
 * (infinity in the noiseless limit).
 */
struct EqualizerOutput {
    Eigen::VectorXcd symbols;
    Eigen::VectorXd bias;
    Eigen::VectorXd sinr;
};

/**
 * Linear MMSE estimate x_hat = E_T H^H (E_T H H^H + N0 I)^{-1} y, computed
 * through the equivalent Gram-form solve (H^H H + (N0/E_T) I) x_hat = H^H y.
 * When only a subset of bins carries symbols (null bins), pass their flat
 * indices as `active`; inactive bins come back zero.
 */
EqualizerOutput mmse_equalize(const ChannelMatrix& H, const Eigen::VectorXcd& y,
                              double symbol_energy, double n0);
EqualizerOutput mmse_equalize(const ChannelMatrix& H, const Eigen::VectorXcd& y,
                              double symbol_energy, double n0, const std::vector<int>& active);

/**
 * Gray 4-QAM soft demapper under the per-symbol Gaussian approximation:
 * treating x_hat_r / mu_r as x_r plus complex Gaussian interference of
 * variance E_T / gamma_r,
 *
 *   LLR(b0) = 2*sqrt(2) * gamma_r * Re(x_hat_r / mu_r) / sqrt(E_T)
 *
 * and Im for b1. Positive LLR means bit 0 is more likely. Returned in
 * codeword bit order via the allocation map.
 */
std::vector<double> qam4_llrs(const EqualizerOutput& eq, const AllocationMap& map,
                              double symbol_energy);

}  // namespace otfs
