// otfssim: delay-Doppler link simulator CLI.
//
// Subcommands:
//   sweep-doppler   BER over the configured nu_max grid -> ber_doppler.csv
//   sweep-snr       BER over the configured SNR grid    -> ber_snr.csv
//   heatmap         averaged RPE per DD bin, one CSV per nu_max
//   pulsone-dump    time-domain realization of one DD pulse as CSV
//   code-export     LDPC parity-check matrix in alist format

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "otfs/experiment.hpp"
#include "otfs/zak.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;
};

otfs::ExperimentConfig load_config(const CommonOpts& opts) {
    otfs::ExperimentConfig cfg;
    if (!opts.config_path.empty()) cfg = otfs::ExperimentConfig::from_file(opts.config_path);
    if (opts.seed_set) cfg.seed = opts.seed;
    if (opts.workers > 0) cfg.workers = opts.workers;
    cfg.validate();
    return cfg;
}

std::ofstream open_out(const CommonOpts& opts, const std::string& name) {
    fs::create_directories(opts.out_dir);
    const fs::path path = fs::path(opts.out_dir) / name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    std::cout << "writing " << path.string() << '\n';
    return out;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "experiment config file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "master seed override")
        ->each([&](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--workers", opts.workers, "worker threads");
}

void run_sweep(const CommonOpts& opts, const std::string& filename) {
    const auto cfg = load_config(opts);
    otfs::ExperimentEngine engine(cfg);
    const auto rows = engine.run_grid();
    for (const auto& r : rows)
        std::cout << "nu_max=" << r.point.doppler_max_hz << " snr=" << r.point.snr_db << " "
                  << otfs::to_string(r.point.allocation) << " frames=" << r.frames
                  << " ber=" << r.ber << " fer=" << r.fer << " (" << r.wall_seconds << " s)\n";
    auto out = open_out(opts, filename);
    otfs::ExperimentEngine::write_sweep_csv(out, cfg, rows);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zak-OTDD delay-Doppler link-level simulator"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* sweep_doppler = app.add_subcommand("sweep-doppler", "BER vs maximum Doppler shift");
    add_common(sweep_doppler, opts);
    auto* sweep_snr = app.add_subcommand("sweep-snr", "BER vs SNR");
    add_common(sweep_snr, opts);
    auto* heatmap = app.add_subcommand("heatmap", "averaged RPE heatmaps per nu_max");
    add_common(heatmap, opts);

    auto* pulsone = app.add_subcommand("pulsone-dump", "time-domain pulsone of one DD pulse");
    add_common(pulsone, opts);
    int pk = -1, pl = -1;
    pulsone->add_option("--delay-bin", pk, "pulse delay bin (default M/2)");
    pulsone->add_option("--doppler-bin", pl, "pulse Doppler bin (default N/2)");

    auto* code_export = app.add_subcommand("code-export", "LDPC parity-check matrix (alist)");
    add_common(code_export, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep_doppler->parsed()) {
            run_sweep(opts, "ber_doppler.csv");
        } else if (sweep_snr->parsed()) {
            run_sweep(opts, "ber_snr.csv");
        } else if (heatmap->parsed()) {
            const auto cfg = load_config(opts);
            otfs::ExperimentEngine engine(cfg);
            for (double nu : cfg.doppler_max_hz) {
                const auto rpe = engine.heatmap(nu);
                auto out = open_out(opts, "rpe_nu" + std::to_string(std::llround(nu)) + ".csv");
                otfs::ExperimentEngine::write_heatmap_csv(out, cfg, engine.lattice(), nu, rpe);
            }
        } else if (pulsone->parsed()) {
            const auto cfg = load_config(opts);
            const auto p = cfg.lattice();
            otfs::DDSignal x(p);
            const int k = pk >= 0 ? pk : p.delay_bins / 2;
            const int l = pl >= 0 ? pl : p.doppler_bins / 2;
            if (k < 0 || k >= p.delay_bins || l < 0 || l >= p.doppler_bins)
                throw std::invalid_argument("pulsone-dump: bin outside the fundamental domain");
            x.at(k, l) = 1.0;
            const auto frame = otfs::inverse_zak(x);
            auto out = open_out(opts, "pulsone_k" + std::to_string(k) + "_l" + std::to_string(l) + ".csv");
            out << "# config=" << std::hex << cfg.hash() << std::dec << '\n';
            out << "q,t_s,abs,real\n";
            out.precision(10);
            for (size_t q = 0; q < frame.samples.size(); ++q)
                out << q << ',' << q / p.bandwidth_hz << ',' << std::abs(frame.samples[q]) << ','
                    << frame.samples[q].real() << '\n';
        } else if (code_export->parsed()) {
            const auto cfg = load_config(opts);
            const auto code = otfs::LdpcCode::construct(cfg.code_seed);
            auto out = open_out(opts, "ldpc_3012.alist");
            code.write_alist(out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
