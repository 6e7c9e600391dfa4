#include "otfs/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace otfs {

const char* to_string(Modem m) { return m == Modem::Zak ? "zak" : "mc"; }
const char* to_string(Coding c) { return c == Coding::Ldpc ? "ldpc" : "uncoded"; }
const char* to_string(AllocationStrategy s) {
    switch (s) {
        case AllocationStrategy::Standard: return "standard";
        case AllocationStrategy::Strip: return "strip";
        case AllocationStrategy::Rpe: return "rpe";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::vector<double> parse_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

AllocationStrategy parse_strategy(const std::string& s) {
    const std::string v = lower(trim(s));
    if (v == "standard") return AllocationStrategy::Standard;
    if (v == "strip") return AllocationStrategy::Strip;
    if (v == "rpe") return AllocationStrategy::Rpe;
    throw std::invalid_argument("config: unknown allocation strategy '" + s + "'");
}

bool parse_bool(const std::string& s) {
    const std::string v = lower(trim(s));
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config: expected boolean, got '" + s + "'");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    return from_stream(in);
}

ExperimentConfig ExperimentConfig::from_stream(std::istream& in) {
    ExperimentConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line.erase(hash_pos);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config: bad section at line " + std::to_string(lineno));
            section = lower(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key=value at line " + std::to_string(lineno));
        const std::string key = section + "." + lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "lattice.bandwidth_hz") cfg.bandwidth_hz = std::stod(value);
        else if (key == "lattice.duration_s") cfg.duration_s = std::stod(value);
        else if (key == "lattice.doppler_period_hz") cfg.doppler_period_hz = std::stod(value);
        else if (key == "filter.kind") {
            const std::string v = lower(value);
            if (v == "sinc") cfg.filter_kind = FilterKind::Sinc;
            else if (v == "rrc") cfg.filter_kind = FilterKind::Rrc;
            else throw std::invalid_argument("config: unknown filter kind '" + value + "'");
        } else if (key == "filter.beta_tau") cfg.beta_tau = std::stod(value);
        else if (key == "filter.beta_nu") cfg.beta_nu = std::stod(value);
        else if (key == "filter.half_width_tau") cfg.half_width_tau = std::stoi(value);
        else if (key == "filter.half_width_nu") cfg.half_width_nu = std::stoi(value);
        else if (key == "filter.oversampling") cfg.oversampling = std::stoi(value);
        else if (key == "channel.profile") cfg.channel = lower(value);
        else if (key == "channel.delays_us") cfg.delays_us = parse_list(value);
        else if (key == "channel.powers_db") cfg.powers_db = parse_list(value);
        else if (key == "channel.doppler_max_hz") cfg.doppler_max_hz = parse_list(value);
        else if (key == "pilot.delay_bin") cfg.pilot_delay_bin = std::stoi(value);
        else if (key == "pilot.doppler_bin") cfg.pilot_doppler_bin = std::stoi(value);
        else if (key == "pilot.energy_factor") cfg.pilot_energy_factor = std::stod(value);
        else if (key == "pilot.noise_free") cfg.pilot_noise_free = parse_bool(value);
        else if (key == "pilot.threshold_sigmas") cfg.threshold_sigmas = std::stod(value);
        else if (key == "code.coding") {
            const std::string v = lower(value);
            if (v == "ldpc") cfg.coding = Coding::Ldpc;
            else if (v == "uncoded") cfg.coding = Coding::Uncoded;
            else throw std::invalid_argument("config: unknown coding '" + value + "'");
        } else if (key == "code.seed") cfg.code_seed = std::stoull(value);
        else if (key == "code.max_iterations") cfg.max_iterations = std::stoi(value);
        else if (key == "run.modem") {
            const std::string v = lower(value);
            if (v == "zak") cfg.modem = Modem::Zak;
            else if (v == "mc") cfg.modem = Modem::Mc;
            else throw std::invalid_argument("config: unknown modem '" + value + "'");
        } else if (key == "run.allocations") {
            cfg.allocations.clear();
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) cfg.allocations.push_back(parse_strategy(item));
        } else if (key == "run.snr_db") cfg.snr_db = parse_list(value);
        else if (key == "run.symbol_energy") cfg.symbol_energy = std::stod(value);
        else if (key == "run.trials") cfg.trials = std::stoi(value);
        else if (key == "run.min_bit_errors") cfg.min_bit_errors = std::stoi(value);
        else if (key == "run.seed") cfg.seed = std::stoull(value);
        else if (key == "run.workers") cfg.workers = std::stoi(value);
        else if (key == "run.periods") cfg.periods = std::stoi(value);
        else if (key == "run.rpe_realizations") cfg.rpe_realizations = std::stoi(value);
        else if (key == "run.heatmap_realizations") cfg.heatmap_realizations = std::stoi(value);
        else if (key == "run.heatmap_noise_free") cfg.heatmap_noise_free = parse_bool(value);
        else if (key == "run.genie_csi") cfg.genie_csi = parse_bool(value);
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

LatticeParams ExperimentConfig::lattice() const {
    return LatticeParams::make(bandwidth_hz, duration_s, doppler_period_hz);
}

int ExperimentConfig::effective_half_width_tau() const {
    if (half_width_tau > 0) return half_width_tau;
    return filter_kind == FilterKind::Sinc ? 20 : 8;
}

int ExperimentConfig::effective_half_width_nu() const {
    if (half_width_nu > 0) return half_width_nu;
    return filter_kind == FilterKind::Sinc ? 20 : 8;
}

FilterSpec ExperimentConfig::filter() const {
    FilterSpec f;
    f.kind = filter_kind;
    if (filter_kind == FilterKind::Rrc) {
        f.beta_tau = beta_tau;
        f.beta_nu = beta_nu;
    }
    f.half_width_tau = effective_half_width_tau();
    f.half_width_nu = effective_half_width_nu();
    f.check();
    return f;
}

ChannelProfile ExperimentConfig::profile(double nu_max) const {
    if (channel == "veh-a") return ChannelProfile::veh_a(nu_max);
    if (channel == "custom") {
        ChannelProfile p;
        p.delays_us = delays_us;
        p.powers_db = powers_db;
        p.doppler_max_hz = nu_max;
        p.check();
        return p;
    }
    throw std::invalid_argument("config: channel '" + channel + "' has no path profile");
}

PilotConfig ExperimentConfig::pilot(const LatticeParams& p) const {
    // Default pilot energy: 16x the whole-frame symbol energy. The paper
    // leaves pilot power open; a dedicated MN*E_T pilot leaves the acquired
    // channel noisy enough to tip marginal frames near the Doppler edge,
    // visibly ahead of the knee the reference curves show.
    const double factor = pilot_energy_factor > 0 ? pilot_energy_factor : 16.0 * p.bins();
    PilotConfig cfg = PilotConfig::centered(p, factor * symbol_energy);
    if (pilot_delay_bin >= 0) cfg.pilot_delay_bin = pilot_delay_bin;
    if (pilot_doppler_bin >= 0) cfg.pilot_doppler_bin = pilot_doppler_bin;
    cfg.threshold_sigmas = threshold_sigmas;
    cfg.check(p);
    return cfg;
}

void ExperimentConfig::validate() const {
    lattice();  // throws on bad geometry
    filter();
    if (channel != "veh-a" && channel != "awgn" && channel != "custom")
        throw std::invalid_argument("config: unknown channel profile '" + channel + "'");
    if (channel == "custom" && (delays_us.empty() || delays_us.size() != powers_db.size()))
        throw std::invalid_argument("config: custom channel needs matching delays/powers lists");
    if (doppler_max_hz.empty()) throw std::invalid_argument("config: empty doppler_max_hz list");
    for (double v : doppler_max_hz)
        if (v < 0) throw std::invalid_argument("config: doppler_max_hz must be >= 0");
    if (snr_db.empty()) throw std::invalid_argument("config: empty snr_db list");
    if (allocations.empty()) throw std::invalid_argument("config: empty allocations list");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
    if (oversampling < 1) throw std::invalid_argument("config: oversampling must be >= 1");
    if (periods < 1) throw std::invalid_argument("config: periods must be >= 1");
    if (symbol_energy <= 0) throw std::invalid_argument("config: symbol_energy must be positive");
    if (max_iterations < 1) throw std::invalid_argument("config: max_iterations must be >= 1");
    if (rpe_realizations < 1 || heatmap_realizations < 1)
        throw std::invalid_argument("config: realization counts must be >= 1");
}

std::string ExperimentConfig::canonical() const {
    std::ostringstream os;
    os.precision(17);
    os << "lattice.bandwidth_hz=" << bandwidth_hz << '\n'
       << "lattice.duration_s=" << duration_s << '\n'
       << "lattice.doppler_period_hz=" << doppler_period_hz << '\n'
       << "filter.kind=" << (filter_kind == FilterKind::Sinc ? "sinc" : "rrc") << '\n'
       << "filter.beta_tau=" << beta_tau << '\n'
       << "filter.beta_nu=" << beta_nu << '\n'
       << "filter.half_width_tau=" << effective_half_width_tau() << '\n'
       << "filter.half_width_nu=" << effective_half_width_nu() << '\n'
       << "filter.oversampling=" << oversampling << '\n'
       << "channel.profile=" << channel << '\n';
    os << "channel.delays_us=";
    for (double v : delays_us) os << v << ',';
    os << "\nchannel.powers_db=";
    for (double v : powers_db) os << v << ',';
    os << "\nchannel.doppler_max_hz=";
    for (double v : doppler_max_hz) os << v << ',';
    os << "\npilot.delay_bin=" << pilot_delay_bin << '\n'
       << "pilot.doppler_bin=" << pilot_doppler_bin << '\n'
       << "pilot.energy_factor=" << pilot_energy_factor << '\n'
       << "pilot.noise_free=" << pilot_noise_free << '\n'
       << "pilot.threshold_sigmas=" << threshold_sigmas << '\n'
       << "code.coding=" << to_string(coding) << '\n'
       << "code.seed=" << code_seed << '\n'
       << "code.max_iterations=" << max_iterations << '\n'
       << "run.modem=" << to_string(modem) << '\n';
    os << "run.allocations=";
    for (auto a : allocations) os << to_string(a) << ',';
    os << "\nrun.snr_db=";
    for (double v : snr_db) os << v << ',';
    os << "\nrun.symbol_energy=" << symbol_energy << '\n'
       << "run.trials=" << trials << '\n'
       << "run.min_bit_errors=" << min_bit_errors << '\n'
       << "run.seed=" << seed << '\n'
       << "run.periods=" << periods << '\n'
       << "run.rpe_realizations=" << rpe_realizations << '\n'
       << "run.heatmap_realizations=" << heatmap_realizations << '\n'
       << "run.heatmap_noise_free=" << heatmap_noise_free << '\n'
       << "run.genie_csi=" << genie_csi << '\n';
    // worker count intentionally excluded: results must not depend on it
    return os.str();
}

uint64_t ExperimentConfig::hash() const {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace otfs
