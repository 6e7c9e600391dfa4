#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace otfs {

/**
 * Rate-1/2 (3,6)-regular quasi-cyclic LDPC code of block length 3012.
 *
 * Construction starts from the all-ones 3x6 protograph and lifts it twice,
 * first by circulant size 2 and then by 251 (total circulant 502, combined
 * via the CRT into a single shift per base edge). Shift exponents are drawn
 * pseudo-randomly, rejecting any choice that closes a 4-cycle, so the girth
 * is at least 6. Columns are permuted so codewords read
 * [message bits | parity bits]; encoding is systematic.
 *
 * Decoding is layered belief propagation with the exact sum-product (tanh)
 * check rule: layers are the lifted rows of one base row, which touch
 * disjoint variables, and posteriors refresh between layers within one
 * iteration.
 */
class LdpcCode {
  public:
    /// Deterministic construction; internally retries derived seeds until the
    /// parity-check matrix reaches full rank.
    static LdpcCode construct(uint64_t seed);

    /// Generic code from an alist file (layers re-derived greedily).
    static LdpcCode from_alist(std::istream& in);
    void write_alist(std::ostream& out) const;

    int block_length() const { return n_; }     // n
    int message_length() const { return k_; }   // k
    int num_checks() const { return static_cast<int>(check_cols_.size()); }
    int num_layers() const { return static_cast<int>(layers_.size()); }
    /// Rank shortfall of H; that many free columns are frozen to zero so the
    /// code still carries exactly n - m message bits.
    int rank_deficiency() const { return rank_deficiency_; }

    const std::vector<std::vector<int>>& check_columns() const { return check_cols_; }
    const std::vector<std::vector<int>>& layers() const { return layers_; }

    /// Systematic encode: output holds the message verbatim in the first k bits.
    std::vector<uint8_t> encode(const std::vector<uint8_t>& message) const;

    bool is_codeword(const std::vector<uint8_t>& bits) const;

    struct DecodeResult {
        std::vector<uint8_t> bits;
        bool converged = false;
        int iterations = 0;
    };

    /// Layered sum-product decoding; stops early on a zero syndrome.
    DecodeResult decode(const std::vector<double>& llrs, int max_iterations = 50) const;

  private:
    void build_layers_greedy();
    void build_encoder();  // RREF over GF(2) with shortening of surplus columns

    int n_ = 0;
    int k_ = 0;
    int frozen_bits_ = 0;
    int rank_deficiency_ = 0;
    std::vector<std::vector<int>> check_cols_;  // column indices per check, ascending
    std::vector<std::vector<int>> layers_;      // check indices per layer
    // encoder: parity bit t = parity of (mask_t AND message)
    std::vector<std::vector<uint64_t>> parity_masks_;
};

}  // namespace otfs
