#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "otfs/config.hpp"
#include "otfs/equalizer.hpp"
#include "otfs/ldpc.hpp"
#include "otfs/mcotfs.hpp"

namespace otfs {

/// One cell of the nu_max x SNR x strategy grid.
struct BerPoint {
    double doppler_max_hz = 0.0;
    double snr_db = 13.0;
    AllocationStrategy allocation = AllocationStrategy::Strip;
    Modem modem = Modem::Zak;
    Coding coding = Coding::Ldpc;
};

struct ResultRow {
    BerPoint point;
    int frames = 0;
    long long info_bits = 0;
    long long bit_errors = 0;
    int frame_errors = 0;
    double ber = 0.0;
    double fer = 0.0;
    double mean_iterations = 0.0;
    double wall_seconds = 0.0;  // logged, never written to CSV
};

/**
 * Monte Carlo engine. Each trial draws a fresh channel, acquires the
 * effective channel from a dedicated noisy pilot frame, sends one coded (or
 * uncoded) data frame through the time-domain channel path, MMSE-equalizes
 * with the acquired channel matrix, and counts information-bit errors.
 *
 * Trials are independent and seeded as derive_seed(point_key, purpose,
 * trial); workers race through trials speculatively, but results reduce in
 * trial order and the stopping rule (min(trials, >= min_bit_errors)) is
 * evaluated sequentially, so outputs are byte-identical for any worker count.
 */
class ExperimentEngine {
  public:
    explicit ExperimentEngine(const ExperimentConfig& cfg);

    ResultRow run_ber_point(const BerPoint& pt);

    /// Full config grid: doppler list x snr list x allocation list.
    std::vector<ResultRow> run_grid();

    /// Ensemble-averaged noise-free RPE map used by RPE allocation (cached per nu_max).
    const std::vector<double>& rpe_map(double doppler_max_hz);

    /// Averaged RPE heatmap; honors heatmap_noise_free and heatmap_realizations.
    std::vector<double> heatmap(double doppler_max_hz);

    AllocationMap allocation_for(const BerPoint& pt);

    const ExperimentConfig& config() const { return cfg_; }
    const LatticeParams& lattice() const { return lattice_; }
    const LdpcCode& code();

    static void write_sweep_csv(std::ostream& os, const ExperimentConfig& cfg,
                                const std::vector<ResultRow>& rows);
    static void write_heatmap_csv(std::ostream& os, const ExperimentConfig& cfg,
                                  const LatticeParams& p, double doppler_max_hz,
                                  const std::vector<double>& rpe);

  private:
    struct TrialOutcome {
        long long bit_errors = 0;
        int iterations = 0;
        bool frame_error = false;
    };

    TrialOutcome run_trial(const BerPoint& pt, const AllocationMap& alloc, uint64_t point_key,
                           int trial, McChannelSimulator* mc_sim);
    std::vector<double> average_rpe(double doppler_max_hz, int realizations, bool noise_free,
                                    double n0, uint64_t stream);
    const TdChannelSimulator& td_sim();
    uint64_t point_key(const BerPoint& pt) const;

    ExperimentConfig cfg_;
    LatticeParams lattice_;
    FilterSpec filter_;
    PilotConfig pilot_;
    DDSignal pilot_signal_;

    std::mutex init_mutex_;
    std::unique_ptr<TdChannelSimulator> td_sim_;
    std::optional<LdpcCode> code_;
    std::map<long long, std::vector<double>> rpe_cache_;  // key: nu_max in mHz
};

}  // namespace otfs
