#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "homomorph/cepstrum.hpp"
#include "homomorph/error.hpp"
#include "homomorph/rng.hpp"
#include "homomorph/synth.hpp"

using namespace homomorph;
using namespace homomorph::spectral;
using unwrap::Method;

namespace {

double max_abs(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

Trace spike(std::size_t n, std::size_t at, double dt = 1e-3)
{
    std::vector<double> x(n, 0.0);
    x[at] = 1.0;
    return Trace(x, dt);
}

// wavelet, 3-spike reflectivity and their convolution for one seed
struct Pair {
    Trace w;
    Trace r;
};

Pair make_pair(std::uint64_t seed)
{
    Rng rng(seed);
    Trace w = synth::rotate_phase(synth::ricker(30.0, 0.002, 31, 0.03), 360.0 * rng.uniform() - 180.0);
    std::vector<double> r(60, 0.0);
    for (int i = 0; i < 3; ++i) r[static_cast<std::size_t>(rng.uniform() * 60.0)] += rng.normal();
    return {w, Trace(r, 0.002)};
}

}  // namespace

TEST_SUITE("cepstrum") {

TEST_CASE("unit spike has an all-zero cepstrum")
{
    for (auto m : unwrap::kAllMethods) {
        if (m == Method::stoffa) continue;
        const Cepstrum c = cepstrum(spike(64, 0), m);
        CHECK(max_abs(c.values) == 0.0);
        CHECK(c.delay_samples == 0);
        CHECK(c.dq == 1e-3);
    }
}

TEST_CASE("delay spike cepstrum vanishes once the delay is removed")
{
    for (std::size_t k : {1, 5, 17, 30}) {
        for (auto m : {Method::jump, Method::wplane, Method::factor}) {
            const Cepstrum c = cepstrum(spike(64, k), m);
            CHECK(max_abs(c.values) < 1e-8);
            CHECK(c.delay_samples == static_cast<long>(k));
            CHECK(c.linear_phase_removed);
            CHECK(c.slope_rad_per_hz == doctest::Approx(-2.0 * std::numbers::pi * static_cast<double>(k) * 1e-3));
        }
    }
    // negative spike: the DC sign is removed as -pi
    std::vector<double> x(64, 0.0);
    x[3] = -2.0;
    const Cepstrum c = cepstrum(Trace(x, 1e-3));
    CHECK(c.intercept_rad == doctest::Approx(-std::numbers::pi));
    CHECK(c.values[0] == doctest::Approx(std::log(2.0)));
    CHECK(std::abs(c.values[1]) < 1e-12);
}

TEST_CASE("cepstral additivity for a wavelet and a 3-spike reflectivity")
{
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto [w, r] = make_pair(seed);
        const Trace s = synth::convolve(w, r);
        const auto cw = cepstrum(w, Method::factor, 256);
        const auto cr = cepstrum(r, Method::factor, 256);
        const auto cs = cepstrum(s, Method::factor, 256);
        CHECK(cs.delay_samples == cw.delay_samples + cr.delay_samples);
        for (std::size_t i = 0; i < cs.size(); ++i) {
            worst = std::max(worst, std::abs(cs.values[i] - cw.values[i] - cr.values[i]));
        }
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("cepstral additivity with PU-K where unwrapping is well sampled")
{
    // a smooth minimum-phase-like reflectivity keeps every curve sampled finely enough
    const Trace w = synth::rotate_phase(synth::ricker(30.0, 0.002, 31, 0.03), 25.0);
    const Trace r({1.0, 0.0, 0.4, 0.0, 0.0, -0.2}, 0.002);
    const Trace s = synth::convolve(w, r);
    const auto cw = cepstrum(w, Method::wplane, 256);
    const auto cr = cepstrum(r, Method::wplane, 256);
    const auto cs = cepstrum(s, Method::wplane, 256);
    double worst = 0.0;
    for (std::size_t i = 0; i < cs.size(); ++i) worst = std::max(worst, std::abs(cs.values[i] - cw.values[i] - cr.values[i]));
    CHECK(worst < 1e-6);
}

TEST_CASE("inverse cepstrum")
{
    Cepstrum zero;
    zero.values.assign(32, 0.0);
    zero.dq = 0.004;
    zero.n_time = 32;
    const Trace x = inverse_cepstrum(zero);
    CHECK(x.size() == 32);
    CHECK(x[0] == doctest::Approx(1.0));
    for (std::size_t i = 1; i < 32; ++i) CHECK(std::abs(x[i]) < 1e-15);
    CHECK(x.dt() == 0.004);

    Cepstrum bad = zero;
    bad.values[3] = std::nan("");
    CHECK_THROWS_AS(inverse_cepstrum(bad), InvalidConfig);
}

TEST_CASE("round trip on a Ricker")
{
    const Trace w = synth::ricker(30.0, 0.002, 64, 0.064);
    for (auto m : {Method::factor, Method::wplane}) {
        const Trace back = inverse_cepstrum(cepstrum(w, m, 256));
        double worst = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) worst = std::max(worst, std::abs(back[i] - w[i]));
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("round trip keeps a shift")
{
    const Trace w = synth::ricker(30.0, 0.002, 128, 0.064);
    const Trace shifted = synth::time_shift(w, 0.090);
    const Cepstrum c = cepstrum(shifted, Method::factor);
    const Trace back = inverse_cepstrum(c);
    auto argmax = [](const Trace& t) {
        return static_cast<std::size_t>(std::max_element(t.vector().begin(), t.vector().end()) - t.vector().begin());
    };
    CHECK(argmax(back) == argmax(shifted));
    CHECK(argmax(back) == 32 + 45);
    double worst = 0.0;
    for (std::size_t i = 0; i < shifted.size(); ++i) worst = std::max(worst, std::abs(back[i] - shifted[i]));
    CHECK(worst < 1e-6);
}

TEST_CASE("PU-F rejects a trace whose samples span hundreds of decades")
{
    // tails of an unrotated Ricker underflow to subnormals; the roots are
    // then too inaccurate to reproduce the phase
    const Trace w = synth::ricker(30.0, 1e-3, 1024, 0.512);
    CHECK_THROWS_AS(cepstrum(w, Method::factor), ConvergenceError);
    const Trace back = inverse_cepstrum(cepstrum(w, Method::wplane));
    double worst = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) worst = std::max(worst, std::abs(back[i] - w[i]));
    CHECK(worst < 1e-6);
}

TEST_CASE("round trip on a generic short trace")
{
    Rng rng(3);
    std::vector<double> x(40);
    for (auto& v : x) v = rng.normal();
    const Trace t(x, 1e-3);
    const Trace back = inverse_cepstrum(cepstrum(t, Method::factor, 64));
    for (std::size_t i = 0; i < 40; ++i) CHECK(std::abs(back[i] - x[i]) < 1e-6 * 3.0);
    for (std::size_t i = 40; i < 64; ++i) CHECK(std::abs(back[i]) < 1e-6);
}

TEST_CASE("echo cepstrum follows the log series")
{
    // log(1 + a z^-m) = sum_k (-1)^(k+1) a^k / k z^(-k m), minimum phase for |a| < 1
    const double a = 0.5;
    const std::size_t m = 40;
    std::vector<double> r(m + 1, 0.0);
    r[0] = 1.0;
    r[m] = a;
    const auto c = cepstrum(Trace(r, 0.002), Method::factor, 1024);
    CHECK(c.delay_samples == 0);
    CHECK(c.intercept_rad == 0.0);
    std::vector<double> expect(1024, 0.0);
    for (std::size_t k = 1; k * m < 1024; ++k) {
        expect[k * m] = (k % 2 == 1 ? 1.0 : -1.0) * std::pow(a, static_cast<double>(k)) / static_cast<double>(k);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < 1024; ++i) worst = std::max(worst, std::abs(c.values[i] - expect[i]));
    CHECK(worst < 1e-6);
}

TEST_CASE("wavelet cepstrum concentrates at low quefrency")
{
    const Trace w = synth::ricker(30.0, 0.002, 31, 0.03);
    const auto c = cepstrum(w, Method::factor, 512);
    double near = 0.0;
    double total = 0.0;
    const auto n = static_cast<long>(c.size());
    for (long i = 0; i < n; ++i) {
        const double e = c.values[static_cast<std::size_t>(i)] * c.values[static_cast<std::size_t>(i)];
        total += e;
        if (std::min(i, n - i) <= 16) near += e;
    }
    CHECK(near / total >= 0.8);
}

TEST_CASE("cepstrum rejects an all-zero trace")
{
    CHECK_THROWS_AS(cepstrum(Trace(std::vector<double>(16, 0.0), 1.0)), InvalidConfig);
}

}  // TEST_SUITE
