#pragma once

#include <cstdint>
#include <vector>

#include "otfs/dd_signal.hpp"

namespace otfs {

enum class Role : uint8_t { Info, Parity, Null };
enum class AllocationStrategy { Standard, Strip, Rpe };

/**
 * Bijection between codeword symbols and DD bins. Symbol s carries codeword
 * bits (2s, 2s+1) of a Gray-mapped 4-QAM constellation; symbols below
 * info_symbols are message symbols (the codeword is laid out message-first),
 * the rest parity. Bins not carrying a symbol are nulled and transmit no
 * energy.
 */
struct AllocationMap {
    AllocationStrategy strategy = AllocationStrategy::Standard;
    LatticeParams params;
    int info_symbols = 0;
    int parity_symbols = 0;
    std::vector<int> bin_of_symbol;   // symbol -> flat bin l*M+k
    std::vector<int> symbol_of_bin;   // flat bin -> symbol, -1 for null
    std::vector<Role> role_of_bin;    // flat bin -> role

    int total_symbols() const { return info_symbols + parity_symbols; }
    int null_bins() const { return params.bins() - total_symbols(); }
    Role role_of_symbol(int s) const { return s < info_symbols ? Role::Info : Role::Parity; }

    /// Flat indices of the occupied bins, ascending (the equalizer's active columns).
    std::vector<int> active_bins() const;

    void check() const;
};

/// Codeword symbols fill bins in raster order (k fastest); nulls take the final bins.
AllocationMap make_standard(const LatticeParams& p, int info_symbols, int parity_symbols);

/**
 * Strip placement: message symbols occupy a rectangle of rows centered on the
 * pilot's Doppler row and spanning the whole delay axis; parity symbols fill
 * the remaining rows nearest the rectangle first. Null bins are pushed to the
 * slots farthest from the pilot row on each side of the partition.
 */
AllocationMap make_strip(const LatticeParams& p, int info_symbols, int parity_symbols,
                         int pilot_row);

/**
 * Reliability-ordered placement: bins sorted by ascending RPE (ties by flat
 * bin index); message symbols take the most reliable bins, then parity, and
 * the least reliable bins are nulled.
 */
AllocationMap make_rpe(const LatticeParams& p, int info_symbols, int parity_symbols,
                       const std::vector<double>& rpe_map);

/// Gray 4-QAM: bits (b0, b1) -> sqrt(E_T) * ((1-2*b0) + j*(1-2*b1)) / sqrt(2).
cplx qam4_point(int b0, int b1, double symbol_energy);

/// Mount a codeword on the DD grid (null bins zero).
DDSignal map_symbols(const std::vector<uint8_t>& codeword, const AllocationMap& map,
                     double symbol_energy);

/**
 * Reorder per-bin LLR pairs (flat-bin-major, 2 per bin, b0 then b1) into
 * codeword bit order, discarding null bins.
 */
std::vector<double> unmap_llrs(const std::vector<double>& llrs_per_bin, const AllocationMap& map);

}  // namespace otfs
