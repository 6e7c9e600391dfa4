#include "otfs/experiment.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "otfs/rng.hpp"
#include "otfs/zak.hpp"

namespace otfs {

namespace {

uint64_t double_bits(double v) { return std::bit_cast<uint64_t>(v); }

std::vector<uint8_t> random_bits(int count, uint64_t seed) {
    Rng rng(seed);
    std::vector<uint8_t> bits(static_cast<size_t>(count));
    for (auto& b : bits) b = static_cast<uint8_t>(rng.bit());
    return bits;
}

}  // namespace

ExperimentEngine::ExperimentEngine(const ExperimentConfig& cfg)
    : cfg_(cfg), lattice_(cfg.lattice()), filter_(cfg.filter()), pilot_(cfg.pilot(lattice_)),
      pilot_signal_(make_pilot_signal(lattice_, pilot_)) {
    cfg_.validate();
}

const TdChannelSimulator& ExperimentEngine::td_sim() {
    std::lock_guard<std::mutex> lock(init_mutex_);
    if (!td_sim_)
        td_sim_ = std::make_unique<TdChannelSimulator>(lattice_, filter_, filter_,
                                                       cfg_.oversampling, cfg_.periods);
    return *td_sim_;
}

const LdpcCode& ExperimentEngine::code() {
    std::lock_guard<std::mutex> lock(init_mutex_);
    if (!code_) code_ = LdpcCode::construct(cfg_.code_seed);
    return *code_;
}

uint64_t ExperimentEngine::point_key(const BerPoint& pt) const {
    // Seeds depend only on (nu_max, SNR): every strategy, coding mode, and
    // modem at one operating point faces identical channel draws, bits, and
    // noise. Comparisons across them are paired, which pins down orderings
    // that rare deep-fade frames would otherwise randomize.
    uint64_t key = derive_seed(cfg_.seed, 0xBE12, double_bits(pt.doppler_max_hz));
    key = derive_seed(key, 0xBE13, double_bits(pt.snr_db));
    return key;
}

AllocationMap ExperimentEngine::allocation_for(const BerPoint& pt) {
    // Uncoded runs are the same-rate baseline: they carry the code's message
    // bits and leave the parity bins empty.
    const LdpcCode& c = code();
    const int info_syms = c.message_length() / 2;
    const int parity_syms =
        pt.coding == Coding::Ldpc ? (c.block_length() - c.message_length()) / 2 : 0;

    AllocationStrategy strategy = pt.allocation;
    if (pt.coding == Coding::Uncoded && strategy == AllocationStrategy::Standard)
        strategy = AllocationStrategy::Strip;  // with nothing but message symbols the two coincide

    switch (strategy) {
        case AllocationStrategy::Standard:
            return make_standard(lattice_, info_syms, parity_syms);
        case AllocationStrategy::Strip:
            return make_strip(lattice_, info_syms, parity_syms, pilot_.pilot_doppler_bin);
        case AllocationStrategy::Rpe:
            return make_rpe(lattice_, info_syms, parity_syms, rpe_map(pt.doppler_max_hz));
    }
    throw std::logic_error("allocation_for: bad strategy");
}

ExperimentEngine::TrialOutcome ExperimentEngine::run_trial(const BerPoint& pt,
                                                           const AllocationMap& alloc,
                                                           uint64_t point_key, int trial,
                                                           McChannelSimulator* mc_sim) {
    const double e_t = cfg_.symbol_energy;
    const double n0 = e_t / std::pow(10.0, pt.snr_db / 10.0);
    const uint64_t ch_seed = derive_seed(point_key, 1, static_cast<uint64_t>(trial));
    const uint64_t pn_seed = derive_seed(point_key, 2, static_cast<uint64_t>(trial));
    const uint64_t bits_seed = derive_seed(point_key, 3, static_cast<uint64_t>(trial));
    const uint64_t dn_seed = derive_seed(point_key, 4, static_cast<uint64_t>(trial));

    const bool coded = pt.coding == Coding::Ldpc;
    const int info_bits = coded ? code().message_length() : 2 * alloc.info_symbols;
    const auto message = random_bits(info_bits, bits_seed);
    const auto codeword = coded ? code().encode(message) : message;
    const DDSignal x = map_symbols(codeword, alloc, e_t);

    EqualizerOutput eq;
    if (cfg_.awgn_channel()) {
        // identity channel: diagonal MMSE, no acquisition
        DDSignal y = add_noise(x, n0, dn_seed);
        const auto active = alloc.active_bins();
        const double mu = n0 > 0 ? e_t / (e_t + n0) : 1.0;
        eq.symbols = Eigen::VectorXcd::Zero(lattice_.bins());
        eq.bias = Eigen::VectorXd::Zero(lattice_.bins());
        eq.sinr = Eigen::VectorXd::Zero(lattice_.bins());
        for (int bin : active) {
            eq.symbols(bin) = mu * y.samples()[static_cast<size_t>(bin)];
            eq.bias(bin) = mu;
            eq.sinr(bin) = n0 > 0 ? e_t / n0 : std::numeric_limits<double>::infinity();
        }
    } else {
        const ChannelRealization ch = draw_channel(cfg_.profile(pt.doppler_max_hz), ch_seed);

        ChannelMatrix H{lattice_, {}};
        DDSignal y(lattice_);
        if (pt.modem == Modem::Zak) {
            const TdChannelSimulator& sim = td_sim();
            if (cfg_.genie_csi) {
                H = build_H(compute_h_eff(ch, filter_, filter_, lattice_, cfg_.oversampling),
                            lattice_);
            } else {
                DDSignal yp = sim.apply(ch, inverse_zak(pilot_signal_));
                if (!cfg_.pilot_noise_free) yp = add_noise(yp, n0, pn_seed);
                const DDTapSet est =
                    estimate_h_eff(yp, pilot_, cfg_.pilot_noise_free ? 0.0 : n0);
                H = build_H(est, lattice_);
            }
            y = add_noise(sim.apply(ch, inverse_zak(x)), n0, dn_seed);
        } else {
            DDSignal yp = mc_sim->transmit_receive(ch, pilot_signal_);
            if (!cfg_.pilot_noise_free) yp = add_noise(yp, n0, pn_seed);
            const auto kernel = mc_estimate_kernel(yp, pilot_, cfg_.pilot_noise_free ? 0.0 : n0);
            H = mc_build_H(kernel, lattice_);
            y = add_noise(mc_sim->transmit_receive(ch, x), n0, dn_seed);
        }
        eq = mmse_equalize(H, Eigen::Map<const Eigen::VectorXcd>(y.samples().data(), lattice_.bins()),
                           e_t, n0, alloc.active_bins());
    }

    const auto llrs = qam4_llrs(eq, alloc, e_t);
    TrialOutcome out;
    if (coded) {
        const auto dec = code().decode(llrs, cfg_.max_iterations);
        out.iterations = dec.iterations;
        for (int i = 0; i < info_bits; ++i)
            out.bit_errors += dec.bits[static_cast<size_t>(i)] != message[static_cast<size_t>(i)];
    } else {
        out.iterations = 0;
        for (int i = 0; i < info_bits; ++i)
            out.bit_errors += (llrs[static_cast<size_t>(i)] < 0.0) != (message[static_cast<size_t>(i)] != 0);
    }
    out.frame_error = out.bit_errors > 0;
    return out;
}

ResultRow ExperimentEngine::run_ber_point(const BerPoint& pt) {
    const auto t0 = std::chrono::steady_clock::now();
    const AllocationMap alloc = allocation_for(pt);
    const uint64_t key = point_key(pt);
    if (pt.coding == Coding::Ldpc) code();      // construct outside the workers
    if (pt.modem == Modem::Zak && !cfg_.awgn_channel()) td_sim();

    ResultRow row;
    row.point = pt;
    const int info_bits_per_frame =
        pt.coding == Coding::Ldpc ? code().message_length() : 2 * alloc.info_symbols;

    const int workers = std::max(1, cfg_.workers);
    int next_trial = 0;
    bool stopped = false;
    while (!stopped && next_trial < cfg_.trials) {
        const int batch = std::min(workers, cfg_.trials - next_trial);
        std::vector<TrialOutcome> outcomes(static_cast<size_t>(batch));
        std::vector<std::thread> threads;
        std::exception_ptr error;
        std::mutex error_mutex;
        for (int w = 0; w < batch; ++w) {
            threads.emplace_back([&, w] {
                try {
                    // MC simulators hold FFTW state, one per worker
                    std::unique_ptr<McChannelSimulator> mc;
                    if (pt.modem == Modem::Mc && !cfg_.awgn_channel())
                        mc = std::make_unique<McChannelSimulator>(lattice_, cfg_.oversampling);
                    outcomes[static_cast<size_t>(w)] =
                        run_trial(pt, alloc, key, next_trial + w, mc.get());
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            });
        }
        for (auto& t : threads) t.join();
        if (error) std::rethrow_exception(error);

        // sequential reduction: the stopping decision must not depend on
        // worker count, so later speculative results are discarded
        for (int w = 0; w < batch && !stopped; ++w) {
            const auto& oc = outcomes[static_cast<size_t>(w)];
            row.frames += 1;
            row.bit_errors += oc.bit_errors;
            row.frame_errors += oc.frame_error;
            row.mean_iterations += oc.iterations;
            if (row.bit_errors >= cfg_.min_bit_errors) stopped = true;
        }
        next_trial += batch;
    }

    row.info_bits = static_cast<long long>(row.frames) * info_bits_per_frame;
    row.ber = row.info_bits > 0 ? static_cast<double>(row.bit_errors) / row.info_bits : 0.0;
    row.fer = row.frames > 0 ? static_cast<double>(row.frame_errors) / row.frames : 0.0;
    row.mean_iterations = row.frames > 0 ? row.mean_iterations / row.frames : 0.0;
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

std::vector<ResultRow> ExperimentEngine::run_grid() {
    std::vector<ResultRow> rows;
    for (double nu : cfg_.doppler_max_hz)
        for (double snr : cfg_.snr_db)
            for (AllocationStrategy a : cfg_.allocations) {
                BerPoint pt;
                pt.doppler_max_hz = nu;
                pt.snr_db = snr;
                pt.allocation = a;
                pt.modem = cfg_.modem;
                pt.coding = cfg_.coding;
                rows.push_back(run_ber_point(pt));
            }
    return rows;
}

std::vector<double> ExperimentEngine::average_rpe(double doppler_max_hz, int realizations,
                                                  bool noise_free, double n0, uint64_t stream) {
    const ChannelProfile profile = cfg_.profile(doppler_max_hz);
    const TdChannelSimulator& sim = td_sim();
    const int bins = lattice_.bins();
    std::vector<std::vector<double>> maps(static_cast<size_t>(realizations));

    const int workers = std::max(1, cfg_.workers);
    std::atomic<int> next{0};
    std::vector<std::thread> threads;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&] {
            try {
                for (int r = next.fetch_add(1); r < realizations; r = next.fetch_add(1)) {
                    const uint64_t seed = derive_seed(stream, 0xA11C, static_cast<uint64_t>(r));
                    const ChannelRealization ch = draw_channel(profile, seed);
                    const DDTapSet truth =
                        compute_h_eff(ch, filter_, filter_, lattice_, cfg_.oversampling);
                    DDSignal yp = sim.apply(ch, inverse_zak(pilot_signal_));
                    if (!noise_free)
                        yp = add_noise(yp, n0, derive_seed(stream, 0xA11D, static_cast<uint64_t>(r)));
                    const DDTapSet est = estimate_h_eff(yp, pilot_, noise_free ? 0.0 : n0);
                    maps[static_cast<size_t>(r)] = compute_rpe(truth, est, lattice_);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);

    std::vector<double> mean(static_cast<size_t>(bins), 0.0);
    for (const auto& m : maps)
        for (int i = 0; i < bins; ++i) mean[static_cast<size_t>(i)] += m[static_cast<size_t>(i)];
    for (auto& v : mean) v /= realizations;
    return mean;
}

const std::vector<double>& ExperimentEngine::rpe_map(double doppler_max_hz) {
    const long long cache_key = std::llround(doppler_max_hz * 1000.0);
    {
        std::lock_guard<std::mutex> lock(init_mutex_);
        auto it = rpe_cache_.find(cache_key);
        if (it != rpe_cache_.end()) return it->second;
    }
    // offline genie-style map: noise-free acquisition, ensemble averaged
    auto map = average_rpe(doppler_max_hz, cfg_.rpe_realizations, true, 0.0,
                           derive_seed(cfg_.seed, 0x99E, double_bits(doppler_max_hz)));
    std::lock_guard<std::mutex> lock(init_mutex_);
    return rpe_cache_.emplace(cache_key, std::move(map)).first->second;
}

std::vector<double> ExperimentEngine::heatmap(double doppler_max_hz) {
    const double n0 = cfg_.symbol_energy / std::pow(10.0, cfg_.snr_db.front() / 10.0);
    return average_rpe(doppler_max_hz, cfg_.heatmap_realizations, cfg_.heatmap_noise_free, n0,
                       derive_seed(cfg_.seed, 0x6EA7, double_bits(doppler_max_hz)));
}

void ExperimentEngine::write_sweep_csv(std::ostream& os, const ExperimentConfig& cfg,
                                       const std::vector<ResultRow>& rows) {
    os << "# config=" << std::hex << std::setw(16) << std::setfill('0') << cfg.hash() << std::dec
       << std::setfill(' ') << '\n';
    os << "nu_max_hz,snr_db,modem,coding,allocation,frames,info_bits,bit_errors,ber,"
          "frame_errors,fer,mean_iterations\n";
    for (const auto& r : rows) {
        std::ostringstream line;
        line.precision(10);
        line << r.point.doppler_max_hz << ',' << r.point.snr_db << ',' << to_string(r.point.modem)
             << ',' << to_string(r.point.coding) << ',' << to_string(r.point.allocation) << ','
             << r.frames << ',' << r.info_bits << ',' << r.bit_errors << ',' << r.ber << ','
             << r.frame_errors << ',' << r.fer << ',' << r.mean_iterations;
        os << line.str() << '\n';
    }
}

void ExperimentEngine::write_heatmap_csv(std::ostream& os, const ExperimentConfig& cfg,
                                         const LatticeParams& p, double doppler_max_hz,
                                         const std::vector<double>& rpe) {
    os << "# config=" << std::hex << std::setw(16) << std::setfill('0') << cfg.hash() << std::dec
       << std::setfill(' ') << '\n';
    os << "# nu_max_hz=" << doppler_max_hz << '\n';
    os << "k,l,rpe\n";
    std::ostringstream body;
    body.precision(10);
    for (int l = 0; l < p.doppler_bins; ++l)
        for (int k = 0; k < p.delay_bins; ++k)
            body << k << ',' << l << ',' << rpe[static_cast<size_t>(l) * p.delay_bins + k] << '\n';
    os << body.str();
}

}  // namespace otfs
