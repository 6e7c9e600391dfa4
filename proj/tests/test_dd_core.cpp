#include <doctest.h>

#include "otfs/rng.hpp"
#include "otfs/taps.hpp"
#include "support/oracles.hpp"

using namespace otfs;

namespace {

LatticeParams tiny(int M, int N) {
    // B = M kHz, T = N ms scaled so tau_p * nu_p = 1 with integer bins
    return LatticeParams::make(M * 1000.0, N * 1e-3, 1000.0);
}

DDSignal random_signal(const LatticeParams& p, uint64_t seed) {
    Rng rng(seed);
    DDSignal x(p);
    for (auto& v : x.samples()) v = rng.complex_normal();
    return x;
}

DDTapSet random_taps(const LatticeParams& p, int count, int spread_k, int spread_l, uint64_t seed) {
    Rng rng(seed);
    DDTapSet h(p);
    for (int i = 0; i < count; ++i) {
        const int k = static_cast<int>(rng.next_u64() % (2 * spread_k + 1)) - spread_k;
        const int l = static_cast<int>(rng.next_u64() % (2 * spread_l + 1)) - spread_l;
        h.add(k, l, rng.complex_normal());
    }
    return h;
}

}  // namespace

TEST_CASE("lattice invariants") {
    const auto p = LatticeParams::make(0.96e6, 1.6e-3, 30e3);
    CHECK(p.delay_bins == 32);
    CHECK(p.doppler_bins == 48);
    CHECK(p.delay_period_s * p.doppler_period_hz == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.delay_resolution_s() == doctest::Approx(p.delay_period_s / 32));
    CHECK(p.doppler_resolution_hz() == doctest::Approx(p.doppler_period_hz / 48));
    CHECK_THROWS_AS(LatticeParams::make(0.9601e6, 1.6e-3, 30e3), std::invalid_argument);
    CHECK_THROWS_AS(LatticeParams::make(-1.0, 1.6e-3, 30e3), std::invalid_argument);
}

TEST_CASE("extend: fundamental domain is the identity") {
    const auto p = tiny(4, 4);
    const auto x = random_signal(p, 7);
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) CHECK(x.extend(k, l) == x.at(k, l));
}

TEST_CASE("extend: zero-Doppler row wraps without phase") {
    const auto p = tiny(4, 4);
    DDSignal x(p);
    x.at(0, 0) = 1.0;
    CHECK(x.extend(4, 0) == cplx{1.0, 0.0});
}

TEST_CASE("extend: delay wrap picks up the Doppler phase") {
    const auto p = LatticeParams::make(32e3, 48e-3, 1000.0);  // M=32, N=48
    DDSignal x(p);
    x.at(0, 1) = 1.0;
    const cplx expected = std::polar(1.0, 2.0 * M_PI / 48.0);
    CHECK(std::abs(x.extend(32, 1) - expected) < 1e-14);
}

TEST_CASE("extend matches the direct rule on random signals") {
    const auto p = tiny(3, 4);
    const auto x = random_signal(p, 11);
    Rng rng(12);
    for (int i = 0; i < 500; ++i) {
        const int k = static_cast<int>(rng.next_u64() % 41) - 20;
        const int l = static_cast<int>(rng.next_u64() % 41) - 20;
        CHECK(std::abs(x.extend(k, l) - oracle::extend(x, k, l)) < 1e-13);
    }
}

TEST_CASE("twisted_convolve: identity tap") {
    const auto p = tiny(4, 3);
    const auto x = random_signal(p, 3);
    DDTapSet h(p);
    h.set(0, 0, 1.0);
    const auto y = twisted_convolve(h, x);
    for (size_t i = 0; i < x.samples().size(); ++i)
        CHECK(std::abs(y.samples()[i] - x.samples()[i]) < 1e-14);
}

TEST_CASE("twisted_convolve: single shifted tap on a unit pulse") {
    const auto p = tiny(8, 8);
    const int k0 = 2, l0 = 3, k1 = 1, l1 = 2;
    DDTapSet h(p);
    h.set(k0, l0, 1.0);
    DDSignal x(p);
    x.at(k1, l1) = 1.0;
    const auto y = twisted_convolve(h, x);
    const cplx expected = std::polar(1.0, 2.0 * M_PI * l0 * k1 / 64.0);
    for (int k = 0; k < 8; ++k)
        for (int l = 0; l < 8; ++l) {
            if (k == k0 + k1 && l == l0 + l1)
                CHECK(std::abs(y.at(k, l) - expected) < 1e-14);
            else
                CHECK(std::abs(y.at(k, l)) < 1e-14);
        }
}

TEST_CASE("twisted_convolve: two-tap example") {
    const auto p = tiny(4, 4);
    DDTapSet h(p);
    const cplx a{0.7, -0.1}, b{-0.2, 0.5};
    h.set(0, 0, a);
    h.set(1, 0, b);
    DDSignal x(p);
    x.at(0, 0) = 1.0;
    const auto y = twisted_convolve(h, x);
    CHECK(std::abs(y.at(0, 0) - a) < 1e-14);
    CHECK(std::abs(y.at(1, 0) - b) < 1e-14);
    CHECK(std::abs(y.at(2, 2)) < 1e-14);
}

TEST_CASE("twisted_convolve mismatched lattices throw") {
    DDTapSet h(tiny(4, 4));
    h.set(0, 0, 1.0);
    CHECK_THROWS_AS(twisted_convolve(h, DDSignal(tiny(4, 8))), std::invalid_argument);
}

TEST_CASE("brute-force equivalence on small grids") {
    Rng rng(99);
    for (int rep = 0; rep < 200; ++rep) {
        const int M = 2 + static_cast<int>(rng.next_u64() % 3);
        const int N = 2 + static_cast<int>(rng.next_u64() % 3);
        const auto p = tiny(M, N);
        const auto x = random_signal(p, 1000 + rep);
        const auto h = random_taps(p, 1 + static_cast<int>(rng.next_u64() % 4), M + 2, N + 2, 2000 + rep);
        const auto fast = twisted_convolve(h, x);
        const auto slow = oracle::twisted(h, x);
        CHECK(oracle::rel_error(fast, slow) < 1e-12);
    }
}

TEST_CASE("twisted output is quasi-periodic (direct-sum check)") {
    const auto p = tiny(4, 4);
    Rng rng(5);
    for (int rep = 0; rep < 50; ++rep) {
        const auto x = random_signal(p, 300 + rep);
        const auto h = random_taps(p, 3, 5, 5, 400 + rep);
        const auto y = twisted_convolve(h, x);
        for (int trial = 0; trial < 10; ++trial) {
            const int k = static_cast<int>(rng.next_u64() % 4);
            const int l = static_cast<int>(rng.next_u64() % 4);
            const int n = static_cast<int>(rng.next_u64() % 5) - 2;
            const int m = static_cast<int>(rng.next_u64() % 5) - 2;
            const cplx direct = oracle::twisted_at(h, x, k + n * 4, l + m * 4);
            const cplx rule = y.at(k, l) * std::polar(1.0, 2.0 * M_PI * n * l / 4.0);
            CHECK(std::abs(direct - rule) < 1e-10);
        }
    }
}

TEST_CASE("twisted_convolve is linear") {
    const auto p = tiny(4, 3);
    const auto h = random_taps(p, 4, 4, 4, 55);
    const auto x = random_signal(p, 56);
    const auto z = random_signal(p, 57);
    const cplx alpha{0.3, -1.1}, beta{-0.8, 0.2};
    DDSignal mix(p);
    for (size_t i = 0; i < mix.samples().size(); ++i)
        mix.samples()[i] = alpha * x.samples()[i] + beta * z.samples()[i];
    const auto lhs = twisted_convolve(h, mix);
    const auto yx = twisted_convolve(h, x);
    const auto yz = twisted_convolve(h, z);
    for (size_t i = 0; i < lhs.samples().size(); ++i)
        CHECK(std::abs(lhs.samples()[i] - (alpha * yx.samples()[i] + beta * yz.samples()[i])) < 1e-12);
}

TEST_CASE("tap-set twisted convolution is associative") {
    const auto p = tiny(4, 4);
    for (int rep = 0; rep < 20; ++rep) {
        const auto a = random_taps(p, 3, 3, 3, 600 + rep);
        const auto b = random_taps(p, 3, 3, 3, 700 + rep);
        const auto x = random_signal(p, 800 + rep);
        const auto ab = twisted_convolve(a, b);
        const auto lhs = twisted_convolve(ab, x);
        const auto rhs = twisted_convolve(a, twisted_convolve(b, x));
        CHECK(oracle::rel_error(lhs, rhs) < 1e-10);
    }
}

TEST_CASE("vectorize ordering and round trip") {
    const auto p = tiny(2, 2);
    DDSignal x(p);
    x.at(0, 0) = 1.0;
    x.at(0, 1) = 2.0;
    x.at(1, 0) = 3.0;
    x.at(1, 1) = 4.0;
    const auto v = x.vectorize();
    CHECK(v[0] == cplx{1.0, 0.0});
    CHECK(v[1] == cplx{3.0, 0.0});
    CHECK(v[2] == cplx{2.0, 0.0});
    CHECK(v[3] == cplx{4.0, 0.0});

    const auto p2 = tiny(5, 3);
    const auto r = random_signal(p2, 21);
    const auto back = DDSignal::devectorize(p2, r.vectorize());
    CHECK(back.samples() == r.samples());
    CHECK_THROWS_AS(DDSignal::devectorize(p2, std::vector<cplx>(7)), std::invalid_argument);
}

TEST_CASE("tap pruning keeps the support bounds tight") {
    const auto p = tiny(4, 4);
    DDTapSet h(p);
    h.set(-3, 2, 1.0);
    h.set(5, -1, 1e-8);
    CHECK(h.k_min() == -3);
    CHECK(h.k_max() == 5);
    h.prune(1e-5);
    CHECK(h.size() == 1);
    CHECK(h.k_min() == -3);
    CHECK(h.k_max() == -3);
    CHECK(h.l_min() == 2);
    CHECK(h.l_max() == 2);
}
