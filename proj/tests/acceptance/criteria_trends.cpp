#include <cmath>
#include <map>
#include <ostream>

#include "acceptance.hpp"
#include "otfs/experiment.hpp"

namespace otfs_accept {

using namespace otfs;

namespace {

ExperimentConfig base_config() {
    // 800 frames per point (the stated floor is 200): failures at these
    // operating points come in 100-500 bit bursts from rare deep fades, so
    // both the frame count and the early-stop budget are sized for a few
    // bursts rather than for independent bit errors.
    ExperimentConfig cfg;
    cfg.trials = 800;
    cfg.min_bit_errors = 400;
    cfg.workers = default_workers();
    cfg.seed = 20240;
    return cfg;
}

ResultRow run(ExperimentEngine& engine, double nu, double snr, AllocationStrategy alloc,
              Coding coding, Modem modem, std::ostream& log) {
    BerPoint pt;
    pt.doppler_max_hz = nu;
    pt.snr_db = snr;
    pt.allocation = alloc;
    pt.coding = coding;
    pt.modem = modem;
    const auto row = engine.run_ber_point(pt);
    log << "  " << to_string(modem) << '/' << to_string(coding) << '/' << to_string(alloc)
        << " nu_max=" << nu << " snr=" << snr << ": ber=" << row.ber << " (" << row.bit_errors
        << " errs / " << row.frames << " frames, " << row.wall_seconds << " s)\n";
    return row;
}

// --- criterion 7: coded-vs-uncoded resilience across Doppler spreads -------

bool doppler_resilience(std::ostream& log) {
    auto cfg = base_config();
    ExperimentEngine engine(cfg);

    const auto strip10 = run(engine, 10000.0, 13.0, AllocationStrategy::Strip, Coding::Ldpc, Modem::Zak, log);
    const auto strip12 = run(engine, 12000.0, 13.0, AllocationStrategy::Strip, Coding::Ldpc, Modem::Zak, log);
    const auto strip14 = run(engine, 14000.0, 13.0, AllocationStrategy::Strip, Coding::Ldpc, Modem::Zak, log);
    const auto rpe14 = run(engine, 14000.0, 13.0, AllocationStrategy::Rpe, Coding::Ldpc, Modem::Zak, log);
    const auto std10 = run(engine, 10000.0, 13.0, AllocationStrategy::Standard, Coding::Ldpc, Modem::Zak, log);
    const auto std12 = run(engine, 12000.0, 13.0, AllocationStrategy::Standard, Coding::Ldpc, Modem::Zak, log);
    const auto std14 = run(engine, 14000.0, 13.0, AllocationStrategy::Standard, Coding::Ldpc, Modem::Zak, log);
    const auto unc12 = run(engine, 12000.0, 13.0, AllocationStrategy::Rpe, Coding::Uncoded, Modem::Zak, log);

    const bool a = strip14.ber <= 1e-3 && rpe14.ber <= 1e-3;
    const bool b = unc12.ber > strip14.ber;
    const bool c = std10.ber >= strip10.ber && std12.ber >= strip12.ber && std14.ber >= strip14.ber;
    log << "  (a) coded strip/RPE <= 1e-3 up to 14 kHz: " << (a ? "yes" : "NO") << "\n"
        << "  (b) uncoded-RPE at 12 kHz above coded strip at 14 kHz: " << (b ? "yes" : "NO") << "\n"
        << "  (c) coded standard >= coded strip at 10/12/14 kHz: " << (c ? "yes" : "NO") << "\n";
    return a && b && c;
}

// --- criterion 8: SNR sweep at nu_max = 14.5 kHz ----------------------------

bool snr_behavior(std::ostream& log) {
    auto cfg = base_config();
    cfg.seed = 20241;
    ExperimentEngine engine(cfg);
    const double nu = 14500.0;

    const auto unc13 = run(engine, nu, 13.0, AllocationStrategy::Rpe, Coding::Uncoded, Modem::Zak, log);
    const auto unc16 = run(engine, nu, 16.0, AllocationStrategy::Rpe, Coding::Uncoded, Modem::Zak, log);
    const auto strip13 = run(engine, nu, 13.0, AllocationStrategy::Strip, Coding::Ldpc, Modem::Zak, log);
    const auto strip16 = run(engine, nu, 16.0, AllocationStrategy::Strip, Coding::Ldpc, Modem::Zak, log);
    const auto rpe13 = run(engine, nu, 13.0, AllocationStrategy::Rpe, Coding::Ldpc, Modem::Zak, log);
    const auto rpe16 = run(engine, nu, 16.0, AllocationStrategy::Rpe, Coding::Ldpc, Modem::Zak, log);
    const auto std16 = run(engine, nu, 16.0, AllocationStrategy::Standard, Coding::Ldpc, Modem::Zak, log);

    const bool coded_beats_uncoded = strip13.ber < unc13.ber && rpe13.ber < unc13.ber &&
                                     strip16.ber < unc16.ber && rpe16.ber < unc16.ber;
    const bool proposed_beats_standard = strip16.ber < std16.ber && rpe16.ber < std16.ber;
    log << "  coded strip/RPE beat uncoded at 13 and 16 dB: "
        << (coded_beats_uncoded ? "yes" : "NO") << "\n"
        << "  proposed allocations beat standard at 16 dB: "
        << (proposed_beats_standard ? "yes" : "NO") << "\n";
    return coded_beats_uncoded && proposed_beats_standard;
}

// --- criterion 9: multicarrier comparison -----------------------------------

bool mc_comparison(std::ostream& log) {
    auto cfg = base_config();
    cfg.seed = 20242;
    ExperimentEngine engine(cfg);

    const auto zak1k = run(engine, 1000.0, 13.0, AllocationStrategy::Strip, Coding::Ldpc, Modem::Zak, log);
    const auto mc1k = run(engine, 1000.0, 13.0, AllocationStrategy::Strip, Coding::Ldpc, Modem::Mc, log);
    const auto zak12k = run(engine, 12000.0, 13.0, AllocationStrategy::Strip, Coding::Ldpc, Modem::Zak, log);
    const auto mc12k = run(engine, 12000.0, 13.0, AllocationStrategy::Strip, Coding::Ldpc, Modem::Mc, log);

    // sparse low-Doppler errors: "comparable" operationalized as both modems
    // delivering the paper's reliable operating point
    const bool low_ok = zak1k.ber <= 1e-3 && mc1k.ber <= 1e-3;
    const double zak_ref = std::max(zak12k.ber, 1.0 / static_cast<double>(zak12k.info_bits));
    const bool high_gap = mc12k.ber >= 10.0 * zak_ref;
    log << "  both reliable at 1 kHz: " << (low_ok ? "yes" : "NO")
        << "; multicarrier/zak BER ratio at 12 kHz: " << mc12k.ber / zak_ref << " (need >= 10)\n";
    return low_ok && high_gap;
}

// --- criterion 10: sinc vs RRC filters --------------------------------------

bool filter_insensitivity(std::ostream& log) {
    auto sinc_cfg = base_config();
    sinc_cfg.seed = 20243;
    auto rrc_cfg = sinc_cfg;
    rrc_cfg.filter_kind = FilterKind::Rrc;
    rrc_cfg.beta_tau = 0.1;
    rrc_cfg.beta_nu = 0.2;
    ExperimentEngine sinc_engine(sinc_cfg);
    ExperimentEngine rrc_engine(rrc_cfg);

    bool ok = true;
    for (double nu : {14000.0, 14500.0}) {
        const auto s = run(sinc_engine, nu, 13.0, AllocationStrategy::Strip, Coding::Ldpc, Modem::Zak, log);
        const auto r = run(rrc_engine, nu, 13.0, AllocationStrategy::Strip, Coding::Ldpc, Modem::Zak, log);
        const double lo = std::min(s.ber, r.ber), hi = std::max(s.ber, r.ber);
        const double ratio = lo > 0 ? hi / lo : (hi > 0 ? 1e9 : 1.0);
        log << "  nu_max " << nu << ": sinc " << s.ber << " vs rrc " << r.ber << " (ratio " << ratio
            << ", limit 2)\n";
        ok &= ratio < 2.0;
    }
    return ok;
}

}  // namespace

void register_trends(std::vector<Criterion>& out) {
    out.push_back({7, "coding extends the usable Doppler range (SNR 13 dB sweep)", doppler_resilience});
    out.push_back({8, "allocation ordering vs SNR at nu_max = 14.5 kHz", snr_behavior});
    out.push_back({9, "zak vs multicarrier modem at low/high Doppler", mc_comparison});
    out.push_back({10, "sinc vs RRC filters change coded BER by < 2x", filter_insensitivity});
}

}  // namespace otfs_accept
