#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "homomorph/error.hpp"
#include "homomorph/rng.hpp"
#include "homomorph/synth.hpp"
#include "oracles.hpp"

using namespace homomorph;
using namespace homomorph::synth;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs_diff(const Trace& a, const Trace& b)
{
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

Trace random_trace(std::size_t n, std::uint64_t seed, double dt = 1e-3)
{
    Rng rng(seed);
    std::vector<double> x(n);
    for (auto& v : x) v = rng.normal();
    return Trace(x, dt);
}

// Ricker centred mid-record with its DC and Nyquist content negligible.
Trace test_ricker() { return ricker(30.0, 1e-3, 1024, 0.512); }

}  // namespace

TEST_SUITE("synthkit") {

TEST_CASE("trace invariants")
{
    CHECK_THROWS_AS(Trace({}, 1.0), InvalidConfig);
    CHECK_THROWS_AS(Trace({1.0}, 0.0), InvalidConfig);
    CHECK_THROWS_AS(Trace({1.0}, -1.0), InvalidConfig);
    CHECK_THROWS_AS(Trace({1.0, std::nan("")}, 1.0), InvalidConfig);
    CHECK_THROWS_AS(Trace({1.0, INFINITY}, 1.0), InvalidConfig);
    Trace t({1.0, 2.0, 3.0}, 0.5, 1.0);
    CHECK(t.duration() == doctest::Approx(1.0));
    CHECK(t.time(2) == doctest::Approx(2.0));
    CHECK(t.energy() == doctest::Approx(14.0));
}

TEST_CASE("synth config validation")
{
    SynthConfig c;
    CHECK_NOTHROW(c.validate());
    c.n_samples = 15;
    CHECK_THROWS_AS(c.validate(), InvalidConfig);
    c = SynthConfig{};
    c.n_samples = 64;  // Nyquist 31.25 Hz
    CHECK_NOTHROW(c.validate());
    c.n_samples = 60;  // Nyquist 29.3 Hz < 30 Hz
    CHECK_THROWS_AS(c.validate(), InvalidConfig);
    c = SynthConfig{};
    c.shift_s = 2.0;
    CHECK_THROWS_AS(c.validate(), InvalidConfig);
}

TEST_CASE("ricker closed form")
{
    const Trace w = ricker(30.0, 1e-3, 101, 0.05);
    CHECK(w[50] == 1.0);
    CHECK(*std::max_element(w.vector().begin(), w.vector().end()) == 1.0);

    // zero crossing at t - t0 = 1 / (sqrt(2) pi f0), placed on the grid
    const double dt = 1e-3;
    const double f0 = 1.0 / (std::sqrt(2.0) * kPi * 10.0 * dt);
    const Trace z = ricker(f0, dt, 101, 0.05);
    CHECK(std::abs(z[60]) < 1e-12);
    CHECK(std::abs(z[40]) < 1e-12);

    CHECK_THROWS_AS(ricker(500.0, 1e-3, 64, 0.0), InvalidConfig);
    CHECK_THROWS_AS(ricker(600.0, 1e-3, 64, 0.0), InvalidConfig);
}

TEST_CASE("ricker amplitude spectrum peaks at the bin nearest f0")
{
    const Trace w = ricker(30.0, 1e-3, 1024, 0.512);
    const auto spec = oracle::naive_dft(w.vector(), 1024);
    std::size_t best = 0;
    for (std::size_t k = 1; k < spec.size(); ++k) {
        if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
    }
    const double df = 1.0 / 1.024;
    CHECK(best == static_cast<std::size_t>(std::lround(30.0 / df)));
}

TEST_CASE("rotate_phase examples")
{
    const Trace w = test_ricker();
    CHECK(max_abs_diff(rotate_phase(w, 0.0), w) < 1e-12);

    const Trace flipped = rotate_phase(w, 180.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) worst = std::max(worst, std::abs(flipped[i] + w[i]));
    CHECK(worst < 1e-10);

    // frequency-domain oracle: positive bins times exp(-j pi/2)
    auto spec = oracle::naive_dft(w.vector(), w.size());
    for (std::size_t k = 1; k + 1 < spec.size(); ++k) spec[k] *= std::polar(1.0, -kPi / 2.0);
    spec.front() *= std::cos(kPi / 2.0);
    spec.back() *= std::cos(kPi / 2.0);
    const auto expect = oracle::naive_idft(spec, w.size());
    const Trace r90 = rotate_phase(w, 90.0);
    worst = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) worst = std::max(worst, std::abs(r90[i] - expect[i]));
    CHECK(worst < 1e-9);
}

TEST_CASE("rotate_phase keeps the amplitude spectrum")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Trace x = random_trace(257 + seed, seed);
        const Trace y = rotate_phase(x, 37.0 * static_cast<double>(seed));
        const auto a = oracle::naive_dft(x.vector(), x.size());
        const auto b = oracle::naive_dft(y.vector(), y.size());
        for (std::size_t k = 1; k + 1 < a.size(); ++k) {
            CHECK(std::abs(std::abs(b[k]) - std::abs(a[k])) <= 1e-10 * std::abs(a[k]) + 1e-12);
        }
        CHECK(y.dt() == x.dt());
        CHECK(y.size() == x.size());
    }
}

TEST_CASE("rotation composes and commutes with shifting")
{
    const Trace w = test_ricker();
    for (double a : {10.0, 45.0, 90.0, 200.0}) {
        for (double b : {-30.0, 60.0, 135.0}) {
            CHECK(max_abs_diff(rotate_phase(rotate_phase(w, a), b), rotate_phase(w, a + b)) < 1e-9);
        }
    }
    for (double tau : {0.0123, 0.03, -0.09, 0.2004}) {
        for (double phi : {30.0, 90.0, -75.0}) {
            CHECK(max_abs_diff(rotate_phase(time_shift(w, tau), phi), time_shift(rotate_phase(w, phi), tau)) < 1e-9);
        }
        CHECK(max_abs_diff(time_shift(time_shift(w, tau), -tau), w) < 1e-9);
    }
}

TEST_CASE("time shift round trip holds for generic traces")
{
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const Trace x = random_trace(100 + 3 * seed, seed);  // mix of odd and even lengths
        const double tau = 0.0137 * static_cast<double>(seed);
        CHECK(max_abs_diff(time_shift(time_shift(x, tau), -tau), x) < 1e-9);
        const Trace y = time_shift(x, tau);
        CHECK(std::abs(y.energy() - x.energy()) <= 1e-10 * x.energy());
    }
}

TEST_CASE("time_shift examples")
{
    const Trace w = test_ricker();
    CHECK(max_abs_diff(time_shift(w, 0.0), w) < 1e-12);

    for (long k : {1L, 7L, 90L, -33L}) {
        const Trace y = time_shift(w, static_cast<double>(k) * w.dt());
        const auto n = static_cast<long>(w.size());
        double worst = 0.0;
        for (long i = 0; i < n; ++i) {
            worst = std::max(worst, std::abs(y[static_cast<std::size_t>(((i + k) % n + n) % n)] - w[static_cast<std::size_t>(i)]));
        }
        CHECK(worst < 1e-10);
    }

    const Trace x = random_trace(1024, 99);
    const Trace y = time_shift(x, 0.090);
    std::vector<double> rolled(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) rolled[(i + 90) % x.size()] = x[i];
    CHECK(max_abs_diff(y, Trace(rolled, x.dt())) < 1e-10);
    CHECK(std::abs(y.energy() - x.energy()) <= 1e-10 * x.energy());
}

TEST_CASE("gen_reflectivity")
{
    CHECK_THROWS_AS(gen_reflectivity(10, 0.0, 1), InvalidConfig);
    CHECK_THROWS_AS(gen_reflectivity(10, 1.5, 1), InvalidConfig);
    CHECK_THROWS_AS(gen_reflectivity(0, 0.5, 1), InvalidConfig);

    const Trace full = gen_reflectivity(500, 1.0, 3);
    CHECK(std::all_of(full.vector().begin(), full.vector().end(), [](double v) { return v != 0.0; }));

    const Trace a = gen_reflectivity(300, 0.2, 11);
    const Trace b = gen_reflectivity(300, 0.2, 11);
    CHECK(a.vector() == b.vector());
    CHECK(gen_reflectivity(300, 0.2, 12).vector() != a.vector());

    const Trace big = gen_reflectivity(100000, 0.1, 5);
    const auto nz = std::count_if(big.vector().begin(), big.vector().end(), [](double v) { return v != 0.0; });
    const double frac = static_cast<double>(nz) / 1e5;
    CHECK(frac >= 0.09);
    CHECK(frac <= 0.11);

    CHECK(gen_reflectivity(10, 0.5, 1, 0.004).dt() == 0.004);
}

TEST_CASE("convolve")
{
    const Trace w = ricker(30.0, 1e-3, 41, 0.02);
    std::vector<double> spike(10, 0.0);
    spike[0] = 1.0;
    const Trace id = convolve(w, Trace(spike, 1e-3));
    CHECK(id.size() == w.size() + 9);
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(id[i] == w[i]);

    std::vector<double> delayed(10, 0.0);
    delayed[4] = 1.0;
    const Trace d = convolve(w, Trace(delayed, 1e-3));
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double expect = (i >= 4 && i - 4 < w.size()) ? w[i - 4] : 0.0;
        CHECK(d[i] == expect);
    }

    const Trace a = random_trace(64, 1);
    const Trace b = random_trace(64, 2);
    const auto expect = oracle::naive_convolve(a.vector(), b.vector());
    const Trace ab = convolve(a, b);
    const Trace ba = convolve(b, a);
    REQUIRE(ab.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK(std::abs(ab[i] - expect[i]) < 1e-10);
        CHECK(std::abs(ab[i] - ba[i]) < 1e-10);
    }

    CHECK_THROWS_AS(convolve(a, Trace(b.vector(), 2e-3)), ShapeMismatch);
}

TEST_CASE("add_noise")
{
    const Trace w = ricker(30.0, 1e-3, 4096, 2.0);
    CHECK(add_noise(w, kNoNoise, 1).vector() == w.vector());
    CHECK(add_noise(w, 10.0, 4).vector() == add_noise(w, 10.0, 4).vector());
    CHECK(add_noise(w, 10.0, 4).vector() != add_noise(w, 10.0, 5).vector());

    const Trace x = random_trace(4096, 17);
    const double snr = measured_snr_db(x, add_noise(x, 20.0, 23));
    CHECK(snr >= 19.5);
    CHECK(snr <= 20.5);

    CHECK_THROWS_AS(add_noise(Trace(std::vector<double>(64, 0.0), 1.0), 10.0, 1), InvalidConfig);
}

TEST_CASE("add_noise hits the requested SNR for n >= 1024")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const double target = -5.0 + 3.0 * static_cast<double>(seed);
        const Trace x = random_trace(1024 + 37 * seed, 1000 + seed);
        const double got = measured_snr_db(x, add_noise(x, target, seed));
        CHECK(std::abs(got - target) <= 0.5);
    }
}

TEST_CASE("scenario trace places the shifted wavelet inside the record")
{
    SynthConfig c;
    for (std::size_t n : {256, 512, 1024}) {
        c.n_samples = n;
        const Trace x = scenario_trace(c);
        CHECK(x.size() == n);
        CHECK(x.dt() == doctest::Approx(1.024 / static_cast<double>(n)));
        // envelope peak near t0 + shift
        const Trace env = scenario_trace([&] {
            SynthConfig z = c;
            z.rotation_deg = 0.0;
            return z;
        }());
        std::size_t peak = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (env[i] > env[peak]) peak = i;
        }
        CHECK(std::abs(static_cast<double>(peak) * x.dt() - (c.t0() + c.shift_s)) <= x.dt());
    }
    c.snr_db = 20.0;
    c.n_samples = 1024;
    SynthConfig clean = c;
    clean.snr_db.reset();
    const double got = measured_snr_db(scenario_trace(clean), scenario_trace(c));
    CHECK(std::abs(got - 20.0) <= 0.5);
}

}  // TEST_SUITE
