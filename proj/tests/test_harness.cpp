#include <doctest.h>

#include <sstream>

#include "otfs/experiment.hpp"

using namespace otfs;

namespace {

ExperimentConfig parse(const std::string& text) {
    std::istringstream in(text);
    return ExperimentConfig::from_stream(in);
}

}  // namespace

TEST_CASE("config: defaults reproduce the standard operating point") {
    const ExperimentConfig cfg;
    const auto p = cfg.lattice();
    CHECK(p.delay_bins == 32);
    CHECK(p.doppler_bins == 48);
    CHECK(cfg.filter().kind == FilterKind::Sinc);
    CHECK(cfg.filter().half_width_tau == 20);
    CHECK(cfg.snr_db == std::vector<double>{13.0});
    const auto pilot = cfg.pilot(p);
    CHECK(pilot.pilot_delay_bin == 16);
    CHECK(pilot.pilot_doppler_bin == 24);
    CHECK(pilot.energy == doctest::Approx(16.0 * 1536.0));
}

TEST_CASE("config: parsing sections, lists, comments, overrides") {
    const auto cfg = parse(R"(
# experiment file
[filter]
kind = rrc
beta_tau = 0.1
beta_nu = 0.2

[channel]
profile = veh-a
doppler_max_hz = 500, 4500, 12000

[run]
modem = mc
allocations = standard, strip, rpe
snr_db = 11, 13
trials = 7
seed = 99
)");
    CHECK(cfg.filter_kind == FilterKind::Rrc);
    CHECK(cfg.filter().half_width_tau == 8);
    CHECK(cfg.doppler_max_hz == std::vector<double>{500.0, 4500.0, 12000.0});
    CHECK(cfg.modem == Modem::Mc);
    CHECK(cfg.allocations.size() == 3);
    CHECK(cfg.snr_db == std::vector<double>{11.0, 13.0});
    CHECK(cfg.trials == 7);
    CHECK(cfg.seed == 99);

    CHECK_THROWS_AS(parse("[run]\nbogus_key = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("[run]\ntrials = 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("[filter]\nkind = boxcar\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("[channel]\nprofile = custom\n"), std::invalid_argument);
}

TEST_CASE("config: canonical hash tracks effective settings") {
    ExperimentConfig a, b;
    CHECK(a.hash() == b.hash());
    b.snr_db = {14.0};
    CHECK(a.hash() != b.hash());
    ExperimentConfig c;
    c.workers = 7;  // worker count must not affect outputs
    CHECK(a.hash() == c.hash());
}

TEST_CASE("awgn mode: error-free at high SNR, analytic at low") {
    ExperimentConfig cfg;
    cfg.channel = "awgn";
    cfg.coding = Coding::Uncoded;
    cfg.trials = 3;
    cfg.min_bit_errors = 1000000;
    cfg.workers = 2;
    ExperimentEngine engine(cfg);
    BerPoint pt;
    pt.doppler_max_hz = 0.0;
    pt.snr_db = 30.0;
    pt.allocation = AllocationStrategy::Standard;
    pt.modem = Modem::Zak;
    pt.coding = Coding::Uncoded;
    const auto row = engine.run_ber_point(pt);
    CHECK(row.frames == 3);
    CHECK(row.bit_errors == 0);
    CHECK(row.info_bits == 3 * 1506);
}

TEST_CASE("stopping rule: halts once the error budget is met") {
    ExperimentConfig cfg;
    cfg.channel = "awgn";
    cfg.coding = Coding::Uncoded;
    cfg.trials = 50;
    cfg.min_bit_errors = 10;
    cfg.workers = 2;
    ExperimentEngine engine(cfg);
    BerPoint pt;
    pt.snr_db = 0.0;  // very noisy: hundreds of errors per frame
    pt.coding = Coding::Uncoded;
    const auto row = engine.run_ber_point(pt);
    CHECK(row.frames == 1);
    CHECK(row.bit_errors >= 10);
}

TEST_CASE("determinism: identical CSV for any worker count") {
    auto run = [&](int workers) {
        ExperimentConfig cfg;
        cfg.channel = "awgn";
        cfg.coding = Coding::Uncoded;
        cfg.trials = 6;
        cfg.min_bit_errors = 100000;
        cfg.workers = workers;
        cfg.snr_db = {6.0, 9.0};
        ExperimentEngine engine(cfg);
        const auto rows = engine.run_grid();
        std::ostringstream os;
        ExperimentEngine::write_sweep_csv(os, cfg, rows);
        return os.str();
    };
    const auto a = run(1);
    const auto b = run(2);
    const auto c = run(3);
    CHECK(a == b);
    CHECK(b == c);
    CHECK(a.find("# config=") == 0);
    CHECK(a.find("nu_max_hz,snr_db,modem,coding,allocation,") != std::string::npos);
}

TEST_CASE("veh-a trial pipeline runs end to end at paper scale") {
    ExperimentConfig cfg;
    cfg.trials = 2;
    cfg.min_bit_errors = 1 << 30;
    cfg.workers = 2;
    cfg.coding = Coding::Ldpc;
    ExperimentEngine engine(cfg);
    BerPoint pt;
    pt.doppler_max_hz = 2000.0;
    pt.snr_db = 13.0;
    pt.allocation = AllocationStrategy::Strip;
    pt.modem = Modem::Zak;
    pt.coding = Coding::Ldpc;
    const auto row = engine.run_ber_point(pt);
    CHECK(row.frames == 2);
    CHECK(row.info_bits == 2 * 1506);
    // benign Doppler at 13 dB: the decoder should clean both frames
    CHECK(row.bit_errors == 0);
    CHECK(row.mean_iterations > 0.0);
    CHECK(row.mean_iterations <= 50.0);
}

TEST_CASE("heatmap output has one finite value per bin") {
    ExperimentConfig cfg;
    cfg.heatmap_realizations = 2;
    cfg.rpe_realizations = 2;
    cfg.workers = 2;
    ExperimentEngine engine(cfg);
    const auto map = engine.heatmap(500.0);
    REQUIRE(map.size() == static_cast<size_t>(engine.lattice().bins()));
    for (double v : map) {
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
    }
    std::ostringstream os;
    ExperimentEngine::write_heatmap_csv(os, cfg, engine.lattice(), 500.0, map);
    CHECK(os.str().find("k,l,rpe") != std::string::npos);
}

TEST_CASE("uncoded standard allocation coincides with strip") {
    ExperimentConfig cfg;
    ExperimentEngine engine(cfg);
    BerPoint std_pt, strip_pt;
    std_pt.coding = strip_pt.coding = Coding::Uncoded;
    std_pt.allocation = AllocationStrategy::Standard;
    strip_pt.allocation = AllocationStrategy::Strip;
    const auto a = engine.allocation_for(std_pt);
    const auto b = engine.allocation_for(strip_pt);
    CHECK(a.parity_symbols == 0);
    CHECK(a.bin_of_symbol == b.bin_of_symbol);
}

TEST_CASE("noise-free acquisition tracks genie CSI under crystallization") {
    // same trials decoded with the pilot-estimated channel (no pilot noise)
    // and with the exact effective channel: both must be clean here
    auto run = [&](bool genie) {
        ExperimentConfig cfg;
        cfg.trials = 2;
        cfg.min_bit_errors = 1 << 30;
        cfg.workers = 2;
        cfg.seed = 555;
        cfg.pilot_noise_free = true;
        cfg.genie_csi = genie;
        ExperimentEngine engine(cfg);
        BerPoint pt;
        pt.doppler_max_hz = 4500.0;
        pt.snr_db = 13.0;
        pt.allocation = AllocationStrategy::Strip;
        pt.coding = Coding::Ldpc;
        return engine.run_ber_point(pt);
    };
    const auto est = run(false);
    const auto gen = run(true);
    CHECK(est.bit_errors == 0);
    CHECK(gen.bit_errors == 0);
}

TEST_CASE("custom channel profiles run through the pipeline") {
    ExperimentConfig cfg;
    cfg.channel = "custom";
    cfg.delays_us = {0.0, 1.0};
    cfg.powers_db = {0.0, -3.0};
    cfg.trials = 1;
    cfg.min_bit_errors = 1 << 30;
    cfg.workers = 1;
    cfg.coding = Coding::Uncoded;
    ExperimentEngine engine(cfg);
    BerPoint pt;
    pt.doppler_max_hz = 1000.0;
    pt.snr_db = 20.0;
    pt.allocation = AllocationStrategy::Strip;
    pt.coding = Coding::Uncoded;
    const auto row = engine.run_ber_point(pt);
    CHECK(row.frames == 1);
    CHECK(row.ber < 0.01);
}
