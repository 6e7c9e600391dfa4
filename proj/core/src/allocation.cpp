#include "otfs/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace otfs {

std::vector<int> AllocationMap::active_bins() const {
    std::vector<int> active;
    active.reserve(total_symbols());
    for (int b = 0; b < params.bins(); ++b)
        if (role_of_bin[b] != Role::Null) active.push_back(b);
    return active;
}

void AllocationMap::check() const {
    if (static_cast<int>(bin_of_symbol.size()) != total_symbols() ||
        static_cast<int>(symbol_of_bin.size()) != params.bins() ||
        static_cast<int>(role_of_bin.size()) != params.bins())
        throw std::logic_error("AllocationMap: inconsistent sizes");
    std::vector<char> seen(params.bins(), 0);
    for (int s = 0; s < total_symbols(); ++s) {
        const int b = bin_of_symbol[s];
        if (b < 0 || b >= params.bins() || seen[b]++ || symbol_of_bin[b] != s)
            throw std::logic_error("AllocationMap: symbol/bin maps are not a bijection");
    }
}

namespace {

AllocationMap init_map(const LatticeParams& p, AllocationStrategy strategy, int info, int parity) {
    if (info < 0 || parity < 0 || info + parity > p.bins())
        throw std::invalid_argument("allocation: symbol count exceeds grid size");
    AllocationMap m;
    m.strategy = strategy;
    m.params = p;
    m.info_symbols = info;
    m.parity_symbols = parity;
    m.bin_of_symbol.assign(static_cast<size_t>(info + parity), -1);
    m.symbol_of_bin.assign(static_cast<size_t>(p.bins()), -1);
    m.role_of_bin.assign(static_cast<size_t>(p.bins()), Role::Null);
    return m;
}

void place(AllocationMap& m, int symbol, int bin) {
    m.bin_of_symbol[symbol] = bin;
    m.symbol_of_bin[bin] = symbol;
    m.role_of_bin[bin] = m.role_of_symbol(symbol);
}

}  // namespace

AllocationMap make_standard(const LatticeParams& p, int info_symbols, int parity_symbols) {
    AllocationMap m = init_map(p, AllocationStrategy::Standard, info_symbols, parity_symbols);
    for (int s = 0; s < m.total_symbols(); ++s) place(m, s, s);
    m.check();
    return m;
}

AllocationMap make_strip(const LatticeParams& p, int info_symbols, int parity_symbols,
                         int pilot_row) {
    const int M = p.delay_bins, N = p.doppler_bins;
    const int rows = (info_symbols + M - 1) / M;
    const int row_lo = pilot_row - rows / 2;
    const int row_hi = row_lo + rows - 1;  // asymmetric by one for even heights
    if (row_lo < 0 || row_hi >= N)
        throw std::invalid_argument("make_strip: information rectangle exceeds the Doppler axis");

    AllocationMap m = init_map(p, AllocationStrategy::Strip, info_symbols, parity_symbols);

    // Slots ordered by distance from the pilot row; the farthest slots of each
    // partition stay null.
    auto ordered_slots = [&](bool inside) {
        std::vector<int> slots;
        for (int l = 0; l < N; ++l) {
            const bool in_rect = l >= row_lo && l <= row_hi;
            if (in_rect != inside) continue;
            for (int k = 0; k < M; ++k) slots.push_back(l * M + k);
        }
        std::stable_sort(slots.begin(), slots.end(), [&](int a, int b) {
            const int la = a / M, lb = b / M;
            const int da = std::abs(la - pilot_row), db = std::abs(lb - pilot_row);
            if (da != db) return da < db;
            return a < b;
        });
        return slots;
    };

    const auto rect = ordered_slots(true);
    for (int s = 0; s < info_symbols; ++s) place(m, s, rect[s]);
    const auto outside = ordered_slots(false);
    if (parity_symbols > static_cast<int>(outside.size()))
        throw std::invalid_argument("make_strip: parity symbols do not fit outside the rectangle");
    for (int s = 0; s < parity_symbols; ++s) place(m, info_symbols + s, outside[s]);
    m.check();
    return m;
}

AllocationMap make_rpe(const LatticeParams& p, int info_symbols, int parity_symbols,
                       const std::vector<double>& rpe_map) {
    if (rpe_map.size() != static_cast<size_t>(p.bins()))
        throw std::invalid_argument("make_rpe: map size must be M*N");
    for (double v : rpe_map)
        if (!std::isfinite(v)) throw std::invalid_argument("make_rpe: RPE values must be finite");
    std::vector<int> order(rpe_map.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (rpe_map[a] != rpe_map[b]) return rpe_map[a] < rpe_map[b];
        return a < b;
    });
    AllocationMap m = init_map(p, AllocationStrategy::Rpe, info_symbols, parity_symbols);
    for (int s = 0; s < m.total_symbols(); ++s) place(m, s, order[s]);
    m.check();
    return m;
}

cplx qam4_point(int b0, int b1, double symbol_energy) {
    const double a = std::sqrt(symbol_energy / 2.0);
    return {a * (1 - 2 * b0), a * (1 - 2 * b1)};
}

DDSignal map_symbols(const std::vector<uint8_t>& codeword, const AllocationMap& map,
                     double symbol_energy) {
    if (codeword.size() != static_cast<size_t>(2 * map.total_symbols()))
        throw std::invalid_argument("map_symbols: codeword length must be 2 * symbol count");
    DDSignal x(map.params);
    const int M = map.params.delay_bins;
    for (int s = 0; s < map.total_symbols(); ++s) {
        const int bin = map.bin_of_symbol[s];
        x.at(bin % M, bin / M) = qam4_point(codeword[2 * s], codeword[2 * s + 1], symbol_energy);
    }
    return x;
}

std::vector<double> unmap_llrs(const std::vector<double>& llrs_per_bin, const AllocationMap& map) {
    if (llrs_per_bin.size() != static_cast<size_t>(2 * map.params.bins()))
        throw std::invalid_argument("unmap_llrs: expected 2 LLRs per DD bin");
    std::vector<double> out(static_cast<size_t>(2 * map.total_symbols()));
    for (int s = 0; s < map.total_symbols(); ++s) {
        const int bin = map.bin_of_symbol[s];
        out[2 * s] = llrs_per_bin[2 * bin];
        out[2 * s + 1] = llrs_per_bin[2 * bin + 1];
    }
    return out;
}

}  // namespace otfs
