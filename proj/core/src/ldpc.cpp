#include "otfs/ldpc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "otfs/rng.hpp"

namespace otfs {

namespace {

constexpr int kBaseRows = 3;
constexpr int kBaseCols = 6;
constexpr int kLift1 = 2;
constexpr int kLift2 = 251;
constexpr int kCirculant = kLift1 * kLift2;  // 502

// Bit-matrix row over n columns.
using BitRow = std::vector<uint64_t>;

int get_bit(const BitRow& row, int c) { return (row[c >> 6] >> (c & 63)) & 1u; }
void flip_bit(BitRow& row, int c) { row[c >> 6] ^= uint64_t{1} << (c & 63); }

void xor_rows(BitRow& dst, const BitRow& src) {
    for (size_t w = 0; w < dst.size(); ++w) dst[w] ^= src[w];
}

/// CRT combination of a mod-2 shift and a mod-251 shift into one mod-502 shift.
int crt_shift(int b, int e) {
    int s = e + kLift2 * (((b - e) % kLift1 + kLift1) % kLift1);
    return s % kCirculant;
}

}  // namespace

LdpcCode LdpcCode::construct(uint64_t seed) {
    for (uint64_t attempt = 0;; ++attempt) {
        Rng rng(derive_seed(seed, 0xC0DE, attempt));
        int shift[kBaseRows][kBaseCols];

        // Reject exponent sets that close a 4-cycle: for every 2x2 base
        // submatrix the alternating shift sum must be nonzero mod 502.
        bool ok = true;
        for (int trial = 0; trial < 200 && ok; ++trial) {
            for (auto& row : shift)
                for (int& s : row)
                    s = crt_shift(static_cast<int>(rng.next_u64() % kLift1),
                                  static_cast<int>(rng.next_u64() % kLift2));
            bool cycle_free = true;
            for (int i1 = 0; i1 < kBaseRows && cycle_free; ++i1)
                for (int i2 = i1 + 1; i2 < kBaseRows && cycle_free; ++i2)
                    for (int j1 = 0; j1 < kBaseCols && cycle_free; ++j1)
                        for (int j2 = j1 + 1; j2 < kBaseCols; ++j2) {
                            const int d = shift[i1][j1] - shift[i1][j2] + shift[i2][j2] - shift[i2][j1];
                            if ((d % kCirculant + kCirculant) % kCirculant == 0) {
                                cycle_free = false;
                                break;
                            }
                        }
            if (cycle_free) break;
            if (trial == 199) ok = false;
        }
        if (!ok) continue;

        LdpcCode code;
        code.n_ = kBaseCols * kCirculant;
        code.k_ = code.n_ - kBaseRows * kCirculant;
        code.check_cols_.assign(static_cast<size_t>(kBaseRows * kCirculant), {});
        for (int bi = 0; bi < kBaseRows; ++bi)
            for (int r = 0; r < kCirculant; ++r) {
                auto& cols = code.check_cols_[static_cast<size_t>(bi * kCirculant + r)];
                cols.reserve(kBaseCols);
                for (int bj = 0; bj < kBaseCols; ++bj)
                    cols.push_back(bj * kCirculant + (r + shift[bi][bj]) % kCirculant);
                std::sort(cols.begin(), cols.end());
            }

        // Lifted rows of one base row form a layer (they touch disjoint columns).
        code.layers_.assign(kBaseRows, {});
        for (int bi = 0; bi < kBaseRows; ++bi) {
            code.layers_[static_cast<size_t>(bi)].resize(kCirculant);
            std::iota(code.layers_[static_cast<size_t>(bi)].begin(),
                      code.layers_[static_cast<size_t>(bi)].end(), bi * kCirculant);
        }

        code.build_encoder();
        return code;
    }
}

void LdpcCode::build_encoder() {
    const int m = num_checks();
    const int words = (n_ + 63) / 64;
    std::vector<BitRow> rows(static_cast<size_t>(m), BitRow(static_cast<size_t>(words), 0));
    for (int r = 0; r < m; ++r)
        for (int c : check_cols_[static_cast<size_t>(r)]) flip_bit(rows[static_cast<size_t>(r)], c);

    // Gauss-Jordan over GF(2) with column pivoting. Columns are scanned from
    // the right so that re-running the elimination on an already-permuted
    // matrix (alist round trip) reproduces the same pivot set.
    std::vector<int> pivot_col(static_cast<size_t>(m), -1);
    std::vector<char> is_pivot(static_cast<size_t>(n_), 0);
    int rank = 0;
    for (int c = n_ - 1; c >= 0 && rank < m; --c) {
        int p = -1;
        for (int r = rank; r < m; ++r)
            if (get_bit(rows[static_cast<size_t>(r)], c)) {
                p = r;
                break;
            }
        if (p < 0) continue;
        std::swap(rows[static_cast<size_t>(p)], rows[static_cast<size_t>(rank)]);
        for (int r = 0; r < m; ++r)
            if (r != rank && get_bit(rows[static_cast<size_t>(r)], c))
                xor_rows(rows[static_cast<size_t>(r)], rows[static_cast<size_t>(rank)]);
        pivot_col[static_cast<size_t>(rank)] = c;
        is_pivot[static_cast<size_t>(c)] = 1;
        ++rank;
    }
    // Circulant-permutation liftings of an all-ones base are always rank
    // deficient (every block-row sums to the all-ones vector), so rank is
    // typically m - 2 here. The code is shortened back to the design rate:
    // the surplus free columns are frozen to zero in every codeword, which
    // keeps k = n - m exactly.
    rank_deficiency_ = m - rank;
    k_ = n_ - m;
    const int free_cols = n_ - rank;
    if (free_cols < k_) throw std::runtime_error("LdpcCode: rank above design rank");

    // Column permutation: [message (k) | frozen (free - k) | pivots (rank)].
    std::vector<int> old_of_new;
    old_of_new.reserve(static_cast<size_t>(n_));
    for (int c = 0; c < n_; ++c)
        if (!is_pivot[static_cast<size_t>(c)]) old_of_new.push_back(c);
    for (int c = 0; c < n_; ++c)
        if (is_pivot[static_cast<size_t>(c)]) old_of_new.push_back(c);
    std::vector<int> new_of_old(static_cast<size_t>(n_));
    for (int c = 0; c < n_; ++c) new_of_old[static_cast<size_t>(old_of_new[static_cast<size_t>(c)])] = c;

    for (auto& cols : check_cols_) {
        for (int& c : cols) c = new_of_old[static_cast<size_t>(c)];
        std::sort(cols.begin(), cols.end());
    }

    // Pivot bit at new column (free_cols + t) = XOR of the message bits in
    // RREF row t; frozen free columns contribute nothing since they are zero.
    const int kwords = (k_ + 63) / 64;
    parity_masks_.assign(static_cast<size_t>(rank), BitRow(static_cast<size_t>(kwords), 0));
    frozen_bits_ = free_cols - k_;
    for (int r = 0; r < rank; ++r) {
        const int t = new_of_old[static_cast<size_t>(pivot_col[static_cast<size_t>(r)])] - free_cols;
        auto& mask = parity_masks_[static_cast<size_t>(t)];
        for (int c = 0; c < n_; ++c) {
            if (is_pivot[static_cast<size_t>(c)] || !get_bit(rows[static_cast<size_t>(r)], c)) continue;
            const int nc = new_of_old[static_cast<size_t>(c)];
            if (nc >= k_) continue;  // frozen column, always zero
            mask[static_cast<size_t>(nc) >> 6] ^= uint64_t{1} << (nc & 63);
        }
    }
}

std::vector<uint8_t> LdpcCode::encode(const std::vector<uint8_t>& message) const {
    if (message.size() != static_cast<size_t>(k_))
        throw std::invalid_argument("LdpcCode::encode: message length must be k");
    const int kwords = (k_ + 63) / 64;
    BitRow msg(static_cast<size_t>(kwords), 0);
    for (int i = 0; i < k_; ++i)
        if (message[static_cast<size_t>(i)]) msg[i >> 6] |= uint64_t{1} << (i & 63);

    std::vector<uint8_t> out(static_cast<size_t>(n_));
    std::copy(message.begin(), message.end(), out.begin());
    const int base = k_ + frozen_bits_;  // frozen columns stay zero
    for (size_t t = 0; t < parity_masks_.size(); ++t) {
        uint64_t acc = 0;
        const auto& mask = parity_masks_[t];
        for (int w = 0; w < kwords; ++w) acc ^= mask[static_cast<size_t>(w)] & msg[static_cast<size_t>(w)];
        out[static_cast<size_t>(base) + t] = static_cast<uint8_t>(std::popcount(acc) & 1);
    }
    return out;
}

bool LdpcCode::is_codeword(const std::vector<uint8_t>& bits) const {
    if (bits.size() != static_cast<size_t>(n_)) return false;
    for (const auto& cols : check_cols_) {
        int acc = 0;
        for (int c : cols) acc ^= bits[static_cast<size_t>(c)];
        if (acc) return false;
    }
    return true;
}

LdpcCode::DecodeResult LdpcCode::decode(const std::vector<double>& llrs, int max_iterations) const {
    if (llrs.size() != static_cast<size_t>(n_))
        throw std::invalid_argument("LdpcCode::decode: LLR length must be n");
    constexpr double kClip = 30.0;

    std::vector<double> posterior(llrs.size());
    for (size_t i = 0; i < llrs.size(); ++i)
        posterior[i] = std::clamp(llrs[i], -kClip, kClip);

    // flat edge storage: check r owns edges [r*d, (r+1)*d)
    const int m = num_checks();
    const size_t max_deg = 0 == m ? 0 : check_cols_[0].size();
    size_t deg_cap = max_deg;
    for (const auto& cols : check_cols_) deg_cap = std::max(deg_cap, cols.size());
    std::vector<double> msg;  // check-to-variable messages, persistent across iterations
    std::vector<size_t> edge_base(static_cast<size_t>(m) + 1, 0);
    for (int r = 0; r < m; ++r)
        edge_base[static_cast<size_t>(r) + 1] =
            edge_base[static_cast<size_t>(r)] + check_cols_[static_cast<size_t>(r)].size();
    msg.assign(edge_base.back(), 0.0);

    DecodeResult res;
    res.bits.assign(static_cast<size_t>(n_), 0);
    std::vector<double> q(deg_cap), fwd(deg_cap + 1), bwd(deg_cap + 1);

    auto harden = [&] {
        for (int i = 0; i < n_; ++i) res.bits[static_cast<size_t>(i)] = posterior[static_cast<size_t>(i)] < 0.0;
    };

    for (int iter = 1; iter <= max_iterations; ++iter) {
        for (const auto& layer : layers_) {
            for (int r : layer) {
                const auto& cols = check_cols_[static_cast<size_t>(r)];
                const size_t d = cols.size();
                double* rmsg = &msg[edge_base[static_cast<size_t>(r)]];
                // extrinsic inputs stay unclipped: squashing a confident
                // posterior here lets one disagreeing check flip its sign and
                // start an avalanche; the state is bounded by the input clip
                // plus the per-check message bound, so no overflow can occur
                for (size_t e = 0; e < d; ++e) {
                    q[e] = posterior[static_cast<size_t>(cols[e])] - rmsg[e];
                }
                // exact sum-product via forward/backward tanh half-products
                fwd[0] = 1.0;
                bwd[d] = 1.0;
                for (size_t e = 0; e < d; ++e) fwd[e + 1] = fwd[e] * std::tanh(0.5 * q[e]);
                for (size_t e = d; e-- > 0;) bwd[e] = bwd[e + 1] * std::tanh(0.5 * q[e]);
                for (size_t e = 0; e < d; ++e) {
                    double prod = fwd[e] * bwd[e + 1];
                    prod = std::clamp(prod, -(1.0 - 1e-15), 1.0 - 1e-15);
                    const double r2v = 2.0 * std::atanh(prod);
                    rmsg[e] = r2v;
                    posterior[static_cast<size_t>(cols[e])] = q[e] + r2v;
                }
            }
        }
        harden();
        if (is_codeword(res.bits)) {
            res.converged = true;
            res.iterations = iter;
            return res;
        }
    }
    harden();
    res.converged = is_codeword(res.bits);
    res.iterations = max_iterations;
    return res;
}

void LdpcCode::write_alist(std::ostream& out) const {
    const int m = num_checks();
    std::vector<std::vector<int>> col_rows(static_cast<size_t>(n_));
    size_t max_col = 0, max_row = 0;
    for (int r = 0; r < m; ++r) {
        max_row = std::max(max_row, check_cols_[static_cast<size_t>(r)].size());
        for (int c : check_cols_[static_cast<size_t>(r)]) col_rows[static_cast<size_t>(c)].push_back(r);
    }
    for (const auto& rows : col_rows) max_col = std::max(max_col, rows.size());

    out << n_ << ' ' << m << '\n' << max_col << ' ' << max_row << '\n';
    for (int c = 0; c < n_; ++c) out << col_rows[static_cast<size_t>(c)].size() << (c + 1 < n_ ? ' ' : '\n');
    for (int r = 0; r < m; ++r) out << check_cols_[static_cast<size_t>(r)].size() << (r + 1 < m ? ' ' : '\n');
    for (int c = 0; c < n_; ++c) {
        const auto& rows = col_rows[static_cast<size_t>(c)];
        for (size_t i = 0; i < max_col; ++i)
            out << (i < rows.size() ? rows[i] + 1 : 0) << (i + 1 < max_col ? ' ' : '\n');
    }
    for (int r = 0; r < m; ++r) {
        const auto& cols = check_cols_[static_cast<size_t>(r)];
        for (size_t i = 0; i < max_row; ++i)
            out << (i < cols.size() ? cols[i] + 1 : 0) << (i + 1 < max_row ? ' ' : '\n');
    }
}

LdpcCode LdpcCode::from_alist(std::istream& in) {
    int n = 0, m = 0, max_col = 0, max_row = 0;
    if (!(in >> n >> m >> max_col >> max_row) || n <= 0 || m <= 0)
        throw std::invalid_argument("from_alist: malformed header");
    std::vector<int> col_deg(static_cast<size_t>(n)), row_deg(static_cast<size_t>(m));
    for (auto& d : col_deg) in >> d;
    for (auto& d : row_deg) in >> d;
    for (int c = 0; c < n; ++c)
        for (int i = 0; i < max_col; ++i) {
            int v;
            in >> v;  // column lists are redundant with the row lists below
        }
    LdpcCode code;
    code.n_ = n;
    code.check_cols_.assign(static_cast<size_t>(m), {});
    for (int r = 0; r < m; ++r) {
        for (int i = 0; i < max_row; ++i) {
            int v;
            if (!(in >> v)) throw std::invalid_argument("from_alist: truncated file");
            if (v > 0) code.check_cols_[static_cast<size_t>(r)].push_back(v - 1);
        }
        std::sort(code.check_cols_[static_cast<size_t>(r)].begin(),
                  code.check_cols_[static_cast<size_t>(r)].end());
        if (static_cast<int>(code.check_cols_[static_cast<size_t>(r)].size()) != row_deg[static_cast<size_t>(r)])
            throw std::invalid_argument("from_alist: row degree mismatch");
    }
    code.build_layers_greedy();
    code.build_encoder();
    return code;
}

void LdpcCode::build_layers_greedy() {
    // first-fit partition of checks into layers with disjoint variable sets
    layers_.clear();
    std::vector<std::vector<char>> used;
    for (int r = 0; r < num_checks(); ++r) {
        bool placed = false;
        for (size_t g = 0; g < layers_.size() && !placed; ++g) {
            bool clash = false;
            for (int c : check_cols_[static_cast<size_t>(r)])
                if (used[g][static_cast<size_t>(c)]) {
                    clash = true;
                    break;
                }
            if (!clash) {
                layers_[g].push_back(r);
                for (int c : check_cols_[static_cast<size_t>(r)]) used[g][static_cast<size_t>(c)] = 1;
                placed = true;
            }
        }
        if (!placed) {
            layers_.push_back({r});
            used.emplace_back(static_cast<size_t>(n_), 0);
            for (int c : check_cols_[static_cast<size_t>(r)]) used.back()[static_cast<size_t>(c)] = 1;
        }
    }
}

}  // namespace otfs
