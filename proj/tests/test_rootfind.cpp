#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "homomorph/error.hpp"
#include "homomorph/rng.hpp"
#include "homomorph/rootfind.hpp"
#include "homomorph/synth.hpp"
#include "homomorph/unwrap.hpp"
#include "oracles.hpp"

using namespace homomorph;
using namespace homomorph::rootfind;

namespace {

constexpr double kPi = std::numbers::pi;

// Real polynomial with conjugate-closed random roots in the annulus [rmin, rmax].
std::vector<cplx> annulus_roots(std::size_t degree, std::uint64_t seed, double rmin = 0.5, double rmax = 2.0)
{
    Rng rng(seed);
    std::vector<cplx> roots;
    if (degree % 2 == 1) {
        const double r = rmin + (rmax - rmin) * rng.uniform();
        roots.emplace_back(rng.uniform() < 0.5 ? -r : r, 0.0);
    }
    while (roots.size() < degree) {
        // uniform in area
        const double r = std::sqrt(rmin * rmin + (rmax * rmax - rmin * rmin) * rng.uniform());
        const double t = kPi * rng.uniform();
        roots.push_back(std::polar(r, t));
        roots.push_back(std::polar(r, -t));
    }
    return roots;
}

std::vector<double> real_coeffs(const std::vector<cplx>& roots)
{
    return oracle::monic_real_coeffs(roots);
}

}  // namespace

TEST_SUITE("rootfind") {

TEST_CASE("linear polynomial")
{
    const std::vector<double> c{-1.0, 1.0};
    const RootSet r = factor_polynomial(c);
    REQUIRE(r.roots.size() == 1);
    CHECK(r.roots[0] == cplx(1.0, 0.0));
    CHECK(r.degree == 1);
    CHECK(r.max_residual == 0.0);
}

TEST_CASE("quadratic by hand")
{
    // (u - 0.5)(u + 2) = u^2 + 1.5 u - 1
    const std::vector<double> c{-1.0, 1.5, 1.0};
    const RootSet r = factor_polynomial(c);
    REQUIRE(r.roots.size() == 2);
    std::vector<double> re{r.roots[0].real(), r.roots[1].real()};
    std::sort(re.begin(), re.end());
    CHECK(std::abs(re[0] + 2.0) < 1e-10);
    CHECK(std::abs(re[1] - 0.5) < 1e-10);
    CHECK(r.roots[0].imag() == 0.0);
    CHECK(r.leading_coeff == cplx(1.0, 0.0));
}

TEST_CASE("invalid input")
{
    CHECK_THROWS_AS(factor_polynomial(std::vector<double>{3.0}), InvalidConfig);
    CHECK_THROWS_AS(factor_polynomial(std::vector<double>{0.0, 1.0}), InvalidConfig);
    CHECK_THROWS_AS(factor_polynomial(std::vector<double>{1.0, 0.0}), InvalidConfig);
    CHECK_THROWS_AS(factor_polynomial(std::vector<double>{1.0, NAN, 1.0}), InvalidConfig);
}

TEST_CASE("exact roots of a quadratic have zero residual")
{
    const std::vector<double> c{2.0, -3.0, 1.0};  // roots 1, 2
    const std::vector<cplx> roots{1.0, 2.0};
    for (double r : eval_residuals(c, roots)) CHECK(r < 1e-14);
}

TEST_CASE("a perturbed root shows in its residual only")
{
    const auto roots = annulus_roots(12, 4);
    const auto c = real_coeffs(roots);
    auto bad = roots;
    bad[3] += 1e-3;
    const auto res = eval_residuals(c, bad);
    double others = 0.0;
    for (std::size_t i = 0; i < res.size(); ++i) {
        if (i != 3) others = std::max(others, res[i]);
    }
    CHECK(others < 1e-14);
    CHECK(res[3] > 1e4 * others);
}

TEST_CASE("annulus roots, moderate degree")
{
    // Rounding the coefficients to double moves each root by about the
    // first-order sensitivity; the finder must land within that.
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const std::size_t degree = 5 + 7 * seed;
        const auto roots = annulus_roots(degree, seed);
        const auto c = real_coeffs(roots);
        const RootSet r = factor_polynomial(c);
        CHECK(r.roots.size() == degree);
        CHECK(r.degree == degree);
        CHECK(r.max_residual <= 1e-8);
        const double sens = oracle::rounding_sensitivity(roots);
        CHECK(oracle::matched_max_error(r.roots, roots) <= 10.0 * sens + 1e-12);
    }
}

TEST_CASE("well-separated roots are recovered at degree 255")
{
    // one root per angular sector, radii in [0.5, 2]
    Rng rng(77);
    std::vector<cplx> roots{cplx(-1.3, 0.0)};
    const std::size_t pairs = 127;
    for (std::size_t i = 0; i < pairs; ++i) {
        const double t = kPi * (static_cast<double>(i) + 0.25 + 0.5 * rng.uniform()) / static_cast<double>(pairs);
        const double r = 0.5 + 1.5 * rng.uniform();
        roots.push_back(std::polar(r, t));
        roots.push_back(std::polar(r, -t));
    }
    const auto c = real_coeffs(roots);
    const RootSet r = factor_polynomial(c);
    CHECK(r.max_residual <= 1e-8);
    const double sens = oracle::rounding_sensitivity(roots);
    MESSAGE("rounding sensitivity " << sens);
    CHECK(oracle::matched_max_error(r.roots, roots) <= 10.0 * sens + 1e-12);
}

TEST_CASE("degree-255 annulus polynomial")
{
    const auto roots = annulus_roots(255, 2024);
    const auto c = real_coeffs(roots);
    const RootSet r = factor_polynomial(c);
    CHECK(r.roots.size() == 255);
    CHECK(r.max_residual <= 1e-8);

    const auto res = eval_residuals(c, r);
    CHECK(*std::max_element(res.begin(), res.end()) <= 1e-8);
    CHECK(oracle::matched_max_error(r.roots, roots) <= 10.0 * oracle::rounding_sensitivity(roots) + 1e-12);
}

TEST_CASE("conjugate symmetry and determinism")
{
    Rng rng(19);
    std::vector<double> c(60);
    for (auto& v : c) v = rng.normal();
    const RootSet a = factor_polynomial(c);
    const RootSet b = factor_polynomial(c);
    REQUIRE(a.roots.size() == 59);
    for (std::size_t i = 0; i < a.roots.size(); ++i) CHECK(a.roots[i] == b.roots[i]);
    for (const cplx& z : a.roots) {
        if (z.imag() == 0.0) continue;
        double best = INFINITY;
        for (const cplx& w : a.roots) best = std::min(best, std::abs(w - std::conj(z)));
        CHECK(best <= 1e-8 * std::max(1.0, std::abs(z)));
    }
}

TEST_CASE("residual scaling")
{
    const std::vector<double> c{-8.0, 0.0, 0.0, 1.0};  // u^3 - 8
    const std::vector<cplx> roots{2.0};
    CHECK(eval_residuals(c, roots)[0] == 0.0);
    const std::vector<cplx> off{3.0};
    CHECK(eval_residuals(c, off)[0] == doctest::Approx(19.0 / (8.0 * 27.0)));
}

TEST_CASE("Table 1 Ricker trace factors below tolerance")
{
    synth::SynthConfig cfg;
    cfg.n_samples = 256;
    const auto z = unwrap::z_polynomial(synth::scenario_trace(cfg));
    const RootSet r = factor_polynomial(z.coeffs);
    CHECK(r.roots.size() == z.coeffs.size() - 1);
    CHECK(r.max_residual <= 1e-8);
    double worst = 0.0;
    for (double v : eval_residuals(z.coeffs, r)) worst = std::max(worst, v);
    CHECK(worst == doctest::Approx(r.max_residual).epsilon(1e-6));
}

TEST_CASE("non-convergence reports the best residual")
{
    FactorOptions tight;
    tight.tol = 1e-30;
    tight.max_iterations = 3;
    tight.companion_max_degree = 0;
    const auto c = real_coeffs(annulus_roots(40, 3));
    try {
        (void)factor_polynomial(c, tight);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.best_residual() > 0.0);
        CHECK(std::isfinite(e.best_residual()));
    }
}

TEST_CASE("high degree smoke test")
{
    Rng rng(1);
    std::vector<double> c(1024);
    for (auto& v : c) v = rng.normal();
    const RootSet r = factor_polynomial(c);
    CHECK(r.roots.size() == 1023);
    CHECK(r.max_residual <= 1e-8);
}

}  // TEST_SUITE
