#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "otfs/acquisition.hpp"
#include "otfs/allocation.hpp"
#include "otfs/channel.hpp"

namespace otfs {

enum class Modem { Zak, Mc };
enum class Coding { Uncoded, Ldpc };

const char* to_string(Modem m);
const char* to_string(Coding c);
const char* to_string(AllocationStrategy s);

/**
 * One experiment = one config. Defaults reproduce the standard operating
 * point: B = 0.96 MHz, T = 1.6 ms, nu_p = 30 kHz (M = 32, N = 48), sinc
 * filters, Veh-A channel, 4-QAM, rate-1/2 LDPC of length 3012, SNR 13 dB,
 * center pilot with whole-frame energy.
 *
 * File format: INI-style sections of `key = value` lines; `#` starts a
 * comment; lists are comma-separated. See docs in README.
 */
struct ExperimentConfig {
    // [lattice]
    double bandwidth_hz = 0.96e6;
    double duration_s = 1.6e-3;
    double doppler_period_hz = 30e3;

    // [filter]
    FilterKind filter_kind = FilterKind::Sinc;
    double beta_tau = 0.1;
    double beta_nu = 0.2;
    int half_width_tau = 0;  // 0 -> default for the kind (sinc 20, rrc 8)
    int half_width_nu = 0;
    int oversampling = 16;

    // [channel]
    std::string channel = "veh-a";  // veh-a | awgn | custom
    std::vector<double> delays_us;   // custom profile
    std::vector<double> powers_db;
    std::vector<double> doppler_max_hz = {12000.0};

    // [pilot]
    int pilot_delay_bin = -1;    // -1 -> M/2
    int pilot_doppler_bin = -1;  // -1 -> N/2
    double pilot_energy_factor = -1.0;  // E_p = factor * E_T; -1 -> 16*M*N
    bool pilot_noise_free = false;
    double threshold_sigmas = 3.0;

    // [code]
    Coding coding = Coding::Ldpc;
    uint64_t code_seed = 9001;
    int max_iterations = 50;

    // [run]
    Modem modem = Modem::Zak;
    std::vector<AllocationStrategy> allocations = {AllocationStrategy::Strip};
    std::vector<double> snr_db = {13.0};
    double symbol_energy = 1.0;
    int trials = 200;
    int min_bit_errors = 100;
    uint64_t seed = 1;
    int workers = 2;
    int periods = 3;
    int rpe_realizations = 50;       // ensemble size behind RPE allocation
    int heatmap_realizations = 100;  // ensemble size for RPE heatmaps
    bool heatmap_noise_free = true;
    bool genie_csi = false;  // equalize with the true effective channel

    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_stream(std::istream& in);

    LatticeParams lattice() const;
    FilterSpec filter() const;
    bool awgn_channel() const { return channel == "awgn"; }
    ChannelProfile profile(double nu_max) const;
    PilotConfig pilot(const LatticeParams& p) const;
    int effective_half_width_tau() const;
    int effective_half_width_nu() const;

    void validate() const;

    /// Deterministic serialization of every effective setting.
    std::string canonical() const;
    /// FNV-1a hash of canonical(), echoed in CSV headers.
    uint64_t hash() const;
};

}  // namespace otfs
