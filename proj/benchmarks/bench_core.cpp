#include <benchmark/benchmark.h>

#include "otfs/acquisition.hpp"
#include "otfs/channel.hpp"
#include "otfs/equalizer.hpp"
#include "otfs/ldpc.hpp"
#include "otfs/mcotfs.hpp"
#include "otfs/rng.hpp"
#include "otfs/zak.hpp"

using namespace otfs;

namespace {

const LatticeParams kPaper = LatticeParams::make(0.96e6, 1.6e-3, 30e3);

DDSignal random_signal(const LatticeParams& p, uint64_t seed) {
    Rng rng(seed);
    DDSignal x(p);
    for (auto& v : x.samples()) v = rng.complex_normal();
    return x;
}

DDTapSet paper_taps() {
    static DDTapSet taps =
        compute_h_eff(draw_veh_a(12000.0, 7), FilterSpec::sinc(20), FilterSpec::sinc(20), kPaper, 16);
    return taps;
}

void BM_TwistedConvolve(benchmark::State& state) {
    const auto h = paper_taps();
    const auto x = random_signal(kPaper, 1);
    for (auto _ : state) {
        auto y = twisted_convolve(h, x);
        benchmark::DoNotOptimize(y.samples().data());
    }
}
BENCHMARK(BM_TwistedConvolve)->Unit(benchmark::kMillisecond);

void BM_ZakRoundTrip(benchmark::State& state) {
    const auto x = random_signal(kPaper, 2);
    for (auto _ : state) {
        auto back = forward_zak(inverse_zak(x));
        benchmark::DoNotOptimize(back.samples().data());
    }
}
BENCHMARK(BM_ZakRoundTrip)->Unit(benchmark::kMillisecond);

void BM_ComputeHeff(benchmark::State& state) {
    const auto ch = draw_veh_a(12000.0, 3);
    const auto spec = FilterSpec::sinc(20);
    for (auto _ : state) {
        auto h = compute_h_eff(ch, spec, spec, kPaper, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(h.size());
    }
}
BENCHMARK(BM_ComputeHeff)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_TdChannelApply(benchmark::State& state) {
    const auto spec = FilterSpec::sinc(20);
    TdChannelSimulator sim(kPaper, spec, spec, 16, static_cast<int>(state.range(0)));
    const auto ch = draw_veh_a(12000.0, 4);
    const auto frame = inverse_zak(random_signal(kPaper, 5));
    for (auto _ : state) {
        auto y = sim.apply(ch, frame);
        benchmark::DoNotOptimize(y.samples().data());
    }
}
BENCHMARK(BM_TdChannelApply)->Arg(3)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_BuildH(benchmark::State& state) {
    const auto h = paper_taps();
    for (auto _ : state) {
        auto cm = build_H(h, kPaper);
        benchmark::DoNotOptimize(cm.H.data());
    }
}
BENCHMARK(BM_BuildH)->Unit(benchmark::kMillisecond);

void BM_MmseEqualize(benchmark::State& state) {
    const auto cm = build_H(paper_taps(), kPaper);
    Rng rng(9);
    Eigen::VectorXcd y(kPaper.bins());
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = rng.complex_normal();
    std::vector<int> active(1506);
    for (int i = 0; i < 1506; ++i) active[static_cast<size_t>(i)] = i;
    for (auto _ : state) {
        auto out = mmse_equalize(cm, y, 1.0, 0.05, active);
        benchmark::DoNotOptimize(out.symbols.data());
    }
}
BENCHMARK(BM_MmseEqualize)->Unit(benchmark::kMillisecond);

void BM_McTransceive(benchmark::State& state) {
    McChannelSimulator sim(kPaper, 16);
    const auto ch = draw_veh_a(12000.0, 11);
    const auto x = random_signal(kPaper, 12);
    for (auto _ : state) {
        auto y = sim.transmit_receive(ch, x);
        benchmark::DoNotOptimize(y.samples().data());
    }
}
BENCHMARK(BM_McTransceive)->Unit(benchmark::kMillisecond);

void BM_LdpcEncode(benchmark::State& state) {
    const auto code = LdpcCode::construct(9001);
    Rng rng(13);
    std::vector<uint8_t> msg(static_cast<size_t>(code.message_length()));
    for (auto& b : msg) b = static_cast<uint8_t>(rng.bit());
    for (auto _ : state) {
        auto cw = code.encode(msg);
        benchmark::DoNotOptimize(cw.data());
    }
}
BENCHMARK(BM_LdpcEncode);

void BM_LdpcDecode(benchmark::State& state) {
    const auto code = LdpcCode::construct(9001);
    Rng rng(14);
    std::vector<uint8_t> msg(static_cast<size_t>(code.message_length()));
    for (auto& b : msg) b = static_cast<uint8_t>(rng.bit());
    const auto cw = code.encode(msg);
    // 2.5 dB BPSK LLRs: a realistic mix of early and late convergence
    const double sigma2 = 1.0 / std::pow(10.0, 0.25);
    std::vector<double> llrs(cw.size());
    for (size_t i = 0; i < cw.size(); ++i)
        llrs[i] = 2.0 * ((cw[i] ? -1.0 : 1.0) + std::sqrt(sigma2) * rng.normal()) / sigma2;
    for (auto _ : state) {
        auto res = code.decode(llrs, 50);
        benchmark::DoNotOptimize(res.bits.data());
    }
}
BENCHMARK(BM_LdpcDecode)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
