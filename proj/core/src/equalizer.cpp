#include "otfs/equalizer.hpp"

#include <cmath>
#include <limits>

namespace otfs {

EqualizerOutput mmse_equalize(const ChannelMatrix& H, const Eigen::VectorXcd& y,
                              double symbol_energy, double n0) {
    std::vector<int> active(static_cast<size_t>(H.H.cols()));
    for (size_t i = 0; i < active.size(); ++i) active[i] = static_cast<int>(i);
    return mmse_equalize(H, y, symbol_energy, n0, active);
}

EqualizerOutput mmse_equalize(const ChannelMatrix& H, const Eigen::VectorXcd& y,
                              double symbol_energy, double n0, const std::vector<int>& active) {
    const Eigen::Index rows = H.H.rows();
    if (y.size() != rows) throw std::invalid_argument("mmse_equalize: y length mismatch");
    if (symbol_energy <= 0.0) throw std::invalid_argument("mmse_equalize: symbol energy must be positive");
    if (n0 < 0.0) throw std::invalid_argument("mmse_equalize: n0 must be >= 0");
    const Eigen::Index na = static_cast<Eigen::Index>(active.size());

    Eigen::MatrixXcd Ha(rows, na);
    for (Eigen::Index c = 0; c < na; ++c) Ha.col(c) = H.H.col(active[static_cast<size_t>(c)]);

    EqualizerOutput out;
    out.symbols = Eigen::VectorXcd::Zero(rows);
    out.bias = Eigen::VectorXd::Zero(rows);
    out.sinr = Eigen::VectorXd::Zero(rows);

    Eigen::VectorXcd xa(na);
    Eigen::VectorXd mu(na);
    if (n0 == 0.0) {
        // noiseless limit: zero forcing; singular systems have no unique inverse
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(Ha);
        if (qr.rank() < na)
            throw SingularSystemError("mmse_equalize: rank-deficient channel at N0 = 0");
        xa = qr.solve(y);
        mu.setOnes();
        for (Eigen::Index c = 0; c < na; ++c) {
            const int bin = active[static_cast<size_t>(c)];
            out.symbols(bin) = xa(c);
            out.bias(bin) = 1.0;
            out.sinr(bin) = std::numeric_limits<double>::infinity();
        }
        return out;
    }

    const double lambda = n0 / symbol_energy;
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(na, na);
    A.selfadjointView<Eigen::Lower>().rankUpdate(Ha.adjoint());
    A.diagonal().array() += lambda;
    Eigen::LLT<Eigen::MatrixXcd, Eigen::Lower> llt(A);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("mmse_equalize: Cholesky factorization failed");
    xa = llt.solve(Ha.adjoint() * y);

    // mu_r = [W H]_rr = 1 - lambda * [A^{-1}]_rr, with [A^{-1}]_rr the squared
    // column norms of inv(L).
    Eigen::MatrixXcd Linv =
        llt.matrixL().solve(Eigen::MatrixXcd::Identity(na, na));
    Eigen::VectorXd diag_inv = Linv.colwise().squaredNorm();

    for (Eigen::Index c = 0; c < na; ++c) {
        const int bin = active[static_cast<size_t>(c)];
        double m = 1.0 - lambda * diag_inv(c);
        m = std::min(std::max(m, 1e-300), 1.0 - 1e-15);
        out.symbols(bin) = xa(c);
        out.bias(bin) = m;
        out.sinr(bin) = m / (1.0 - m);
    }
    return out;
}

std::vector<double> qam4_llrs(const EqualizerOutput& eq, const AllocationMap& map,
                              double symbol_energy) {
    const double scale = 2.0 * std::sqrt(2.0) / std::sqrt(symbol_energy);
    std::vector<double> llrs(static_cast<size_t>(2 * map.total_symbols()));
    for (int s = 0; s < map.total_symbols(); ++s) {
        const int bin = map.bin_of_symbol[s];
        const double mu = eq.bias(bin);
        const double gamma = eq.sinr(bin);
        if (mu <= 0.0) throw std::invalid_argument("qam4_llrs: bin not equalized (not in active set?)");
        const cplx z = eq.symbols(bin) / mu;
        if (std::isinf(gamma)) {
            constexpr double kHard = 1e9;
            llrs[2 * s] = z.real() >= 0 ? kHard : -kHard;
            llrs[2 * s + 1] = z.imag() >= 0 ? kHard : -kHard;
        } else {
            llrs[2 * s] = scale * gamma * z.real();
            llrs[2 * s + 1] = scale * gamma * z.imag();
        }
    }
    return llrs;
}

}  // namespace otfs
