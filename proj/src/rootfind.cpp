#include "homomorph/rootfind.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "homomorph/error.hpp"

namespace homomorph::rootfind {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;

struct Evaluation {
    cplx newton;       // p(z) / p'(z)
    double residual;   // |p(z)| / max(1, |z|)^n, coefficients as given
    double bound;      // rounding-error bound of the same quantity
};

// Horner evaluation of p, p' and the running absolute sum; switches to the
// reversed polynomial outside the unit disk so |z|^n never overflows.
Evaluation evaluate(std::span<const double> a, cplx z)
{
    const std::size_t n = a.size() - 1;
    if (std::abs(z) <= 1.0) {
        cplx p = a[n];
        cplx dp = 0.0;
        double abs_sum = std::abs(a[n]);
        const double rz = std::abs(z);
        for (std::size_t i = n; i-- > 0;) {
            dp = dp * z + p;
            p = p * z + a[i];
            abs_sum = abs_sum * rz + std::abs(a[i]);
        }
        return {p / dp, std::abs(p), 4.0 * kEps * static_cast<double>(n + 1) * abs_sum};
    }
    // p(z) = z^n q(w), w = 1/z, q(w) = sum a[n-i] w^i.
    const cplx w = 1.0 / z;
    cplx q = a[0];
    cplx dq = 0.0;
    double abs_sum = std::abs(a[0]);
    const double rw = std::abs(w);
    for (std::size_t i = 1; i <= n; ++i) {
        dq = dq * w + q;
        q = q * w + a[i];
        abs_sum = abs_sum * rw + std::abs(a[i]);
    }
    // p'(z) = n z^(n-1) q(w) - z^(n-2) q'(w)  =>  p/p' = z q / (n q - w q').
    const cplx denom = static_cast<double>(n) * q - w * dq;
    return {z * q / denom, std::abs(q), 4.0 * kEps * static_cast<double>(n + 1) * abs_sum};
}

// Double-double numbers (unevaluated sum hi + lo) for compensated Horner.
struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

DD two_sum(double a, double b)
{
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

DD add(DD x, DD y)
{
    DD s = two_sum(x.hi, y.hi);
    s.lo += x.lo + y.lo;
    return two_sum(s.hi, s.lo);
}

DD mul(DD x, double d)
{
    const double p = x.hi * d;
    const double e = std::fma(x.hi, d, -p) + x.lo * d;
    return two_sum(p, e);
}

DD neg(DD x) { return {-x.hi, -x.lo}; }

// p(z) in double-double, p'(z) in double; same reversal rule as evaluate().
// The Newton ratio is then accurate wherever |p| is above about eps^2 times
// the absolute sum, which double Horner cannot resolve near clustered roots.
cplx refined_newton(std::span<const double> a, cplx z, double& residual)
{
    const std::size_t n = a.size() - 1;
    const bool inside = std::abs(z) <= 1.0;
    const cplx v = inside ? z : 1.0 / z;
    const double x = v.real();
    const double y = v.imag();
    DD re{inside ? a[n] : a[0], 0.0};
    DD im{};
    cplx dp = 0.0;
    for (std::size_t step = 1; step <= n; ++step) {
        const double c = inside ? a[n - step] : a[step];
        dp = dp * v + cplx(re.hi, im.hi);
        const DD r2 = add(add(mul(re, x), neg(mul(im, y))), DD{c, 0.0});
        const DD i2 = add(mul(re, y), mul(im, x));
        re = r2;
        im = i2;
    }
    const cplx q(re.hi + re.lo, im.hi + im.lo);
    residual = std::abs(q);
    if (inside) {
        return q / dp;
    }
    return z * q / (static_cast<double>(n) * q - v * dp);
}

// Initial approximations on circles whose radii come from the upper convex
// hull of (i, log|a_i|).
std::vector<cplx> newton_polygon_start(std::span<const double> a)
{
    const std::size_t n = a.size() - 1;
    std::vector<double> loga(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        loga[i] = a[i] != 0.0 ? std::log(std::abs(a[i])) : -std::numeric_limits<double>::infinity();
    }
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i <= n; ++i) {
        if (!std::isfinite(loga[i])) {
            continue;
        }
        while (hull.size() >= 2) {
            const std::size_t i1 = hull[hull.size() - 2];
            const std::size_t i2 = hull.back();
            const double cross = (static_cast<double>(i2 - i1)) * (loga[i] - loga[i1]) -
                                 (static_cast<double>(i - i1)) * (loga[i2] - loga[i1]);
            if (cross >= 0.0) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(i);
    }
    std::vector<cplx> z;
    z.reserve(n);
    const double sigma = 0.7;
    for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
        const std::size_t lo = hull[h];
        const std::size_t hi = hull[h + 1];
        const std::size_t m = hi - lo;
        const double radius = std::exp((loga[lo] - loga[hi]) / static_cast<double>(m));
        for (std::size_t k = 0; k < m; ++k) {
            const double angle = 2.0 * kPi * (static_cast<double>(k) / static_cast<double>(m) +
                                              static_cast<double>(lo) / static_cast<double>(n)) + sigma;
            z.push_back(std::polar(radius, angle));
        }
    }
    return z;
}

double inf_norm(std::span<const double> a)
{
    double m = 0.0;
    for (double v : a) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

// Pairs each upper-half-plane root with its nearest lower-half partner and
// makes the pair exactly conjugate; leftovers are projected to the real axis.
void symmetrize(std::vector<cplx>& roots)
{
    std::vector<std::size_t> upper;
    std::vector<std::size_t> lower;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (roots[i].imag() > 0.0) {
            upper.push_back(i);
        } else if (roots[i].imag() < 0.0) {
            lower.push_back(i);
        }
    }
    std::vector<std::uint8_t> lower_used(lower.size(), 0);
    std::vector<std::uint8_t> paired(roots.size(), 0);
    // Most-separated-from-the-axis roots first: they are the unambiguous pairs.
    std::sort(upper.begin(), upper.end(),
              [&](std::size_t x, std::size_t y) { return roots[x].imag() > roots[y].imag(); });
    for (std::size_t ui : upper) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = lower.size();
        for (std::size_t j = 0; j < lower.size(); ++j) {
            if (lower_used[j]) {
                continue;
            }
            const double d = std::abs(roots[ui] - std::conj(roots[lower[j]]));
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        if (best_j == lower.size() || best > 1e-6 * std::max(1.0, std::abs(roots[ui]))) {
            continue;
        }
        lower_used[best_j] = 1;
        const std::size_t li = lower[best_j];
        const cplx mean = 0.5 * (roots[ui] + std::conj(roots[li]));
        roots[ui] = mean;
        roots[li] = std::conj(mean);
        paired[ui] = paired[li] = 1;
    }
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (!paired[i] && roots[i].imag() != 0.0 &&
            std::abs(roots[i].imag()) <= 1e-6 * std::max(1.0, std::abs(roots[i]))) {
            roots[i] = cplx(roots[i].real(), 0.0);
        }
    }
}

double max_scaled_residual(std::span<const double> a, std::span<const cplx> roots)
{
    const auto r = eval_residuals(a, roots);
    return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
}

std::vector<cplx> companion_roots(std::span<const double> a)
{
    const std::size_t n = a.size() - 1;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        companion(0, static_cast<Eigen::Index>(i)) = -a[n - 1 - i] / a[n];
        if (i + 1 < n) {
            companion(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = 1.0;
        }
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("companion eigenvalue solver failed", std::numeric_limits<double>::infinity());
    }
    std::vector<cplx> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = solver.eigenvalues()[static_cast<Eigen::Index>(i)];
        for (int it = 0; it < 3; ++it) {
            const Evaluation e = evaluate(a, z[i]);
            if (!std::isfinite(std::abs(e.newton)) || e.residual <= e.bound) {
                break;
            }
            z[i] -= e.newton;
        }
    }
    return z;
}

}  // namespace

RootSet factor_polynomial(std::span<const double> coeffs, const FactorOptions& options)
{
    if (coeffs.size() < 2) {
        throw InvalidConfig("factor_polynomial: degree must be at least 1");
    }
    if (coeffs.back() == 0.0 || coeffs.front() == 0.0) {
        throw InvalidConfig("factor_polynomial: strip leading and trailing zero coefficients first");
    }
    for (double c : coeffs) {
        if (!std::isfinite(c)) {
            throw InvalidConfig("factor_polynomial: coefficients must be finite");
        }
    }
    const std::size_t n = coeffs.size() - 1;
    const double scale = inf_norm(coeffs);
    std::vector<double> a(coeffs.begin(), coeffs.end());
    for (double& v : a) {
        v /= scale;
    }

    RootSet out;
    out.degree = n;
    out.leading_coeff = coeffs.back();

    if (n == 1) {
        out.roots = {cplx(-coeffs[0] / coeffs[1], 0.0)};
        out.max_residual = max_scaled_residual(coeffs, out.roots);
        return out;
    }

    std::vector<cplx> z = newton_polygon_start(a);
    std::vector<std::uint8_t> done(n, 0);
    std::size_t remaining = n;
    int iter = 0;
    for (; iter < options.max_iterations && remaining > 0; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) {
                continue;
            }
            const Evaluation e = evaluate(a, z[i]);
            if (e.residual <= e.bound) {
                done[i] = 1;
                --remaining;
                continue;
            }
            cplx sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) {
                    sum += 1.0 / (z[i] - z[j]);
                }
            }
            const cplx correction = e.newton / (1.0 - e.newton * sum);
            if (!std::isfinite(correction.real()) || !std::isfinite(correction.imag())) {
                continue;
            }
            z[i] -= correction;
            if (std::abs(correction) <= 2.0 * kEps * std::abs(z[i])) {
                done[i] = 1;
                --remaining;
            }
        }
    }
    // Refinement: Aberth steps with the compensated value until every
    // correction is at the rounding level of the root itself.
    std::fill(done.begin(), done.end(), 0);
    remaining = n;
    for (int pass = 0; pass < options.max_iterations && remaining > 0; ++pass, ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) {
                continue;
            }
            double value = 0.0;
            const cplx ratio = refined_newton(a, z[i], value);
            if (value == 0.0) {
                done[i] = 1;
                --remaining;
                continue;
            }
            cplx sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) {
                    sum += 1.0 / (z[i] - z[j]);
                }
            }
            const cplx correction = ratio / (1.0 - ratio * sum);
            if (!std::isfinite(correction.real()) || !std::isfinite(correction.imag())) {
                done[i] = 1;
                --remaining;
                continue;
            }
            z[i] -= correction;
            if (std::abs(correction) <= 4.0 * kEps * std::abs(z[i])) {
                done[i] = 1;
                --remaining;
            }
        }
    }
    out.iterations = iter;

    symmetrize(z);
    double residual = max_scaled_residual(a, z);
    if (!(residual <= options.tol) && n <= options.companion_max_degree) {
        std::vector<cplx> alt = companion_roots(a);
        symmetrize(alt);
        const double alt_residual = max_scaled_residual(a, alt);
        if (alt_residual < residual) {
            z = std::move(alt);
            residual = alt_residual;
            out.used_companion = true;
        }
    }
    if (!(residual <= options.tol)) {
        throw ConvergenceError("factor_polynomial: degree " + std::to_string(n) + " did not reach tolerance " +
                                   std::to_string(options.tol) + " (best scaled residual " +
                                   std::to_string(residual) + ")",
                               residual);
    }
    out.roots = std::move(z);
    out.max_residual = residual;
    return out;
}

std::vector<double> eval_residuals(std::span<const double> coeffs, std::span<const cplx> roots)
{
    const double norm = inf_norm(coeffs);
    std::vector<double> out(roots.size(), 0.0);
    if (coeffs.empty() || norm == 0.0) {
        return out;
    }
    for (std::size_t k = 0; k < roots.size(); ++k) {
        out[k] = evaluate(coeffs, roots[k]).residual / norm;
    }
    return out;
}

std::vector<double> eval_residuals(std::span<const double> coeffs, const RootSet& roots)
{
    return eval_residuals(coeffs, roots.roots);
}

}  // namespace homomorph::rootfind
