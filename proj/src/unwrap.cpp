#include "homomorph/unwrap.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "homomorph/error.hpp"
#include "homomorph/fft.hpp"

namespace homomorph::unwrap {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTieTolerance = 1e-12;

bool is_valid(std::span<const std::uint8_t> mask, std::size_t k)
{
    return mask.empty() || mask[k] != 0;
}

void require_wrapped(const PhaseCurve& wrapped, std::span<const std::uint8_t> mask)
{
    if (wrapped.kind != spectral::PhaseKind::wrapped) {
        throw InvalidConfig("unwrap: input curve must hold principal values");
    }
    if (!mask.empty() && mask.size() != wrapped.size()) {
        throw ShapeMismatch("unwrap: mask length differs from curve length");
    }
}

PhaseCurve from_counts(const PhaseCurve& wrapped, std::vector<std::int64_t> counts, std::vector<std::uint8_t> flags)
{
    PhaseCurve out;
    out.kind = spectral::PhaseKind::unwrapped;
    out.values.resize(wrapped.size());
    for (std::size_t k = 0; k < wrapped.size(); ++k) {
        out.values[k] = std::fma(kTwoPi, static_cast<double>(counts[k]), wrapped.values[k]);  // one rounding
    }
    out.wrap_counts = std::move(counts);
    out.flags = std::move(flags);
    return out;
}

// Continuous phase of (exp(jw) - u), anchored by the principal branch at w = 0.
double factor_phase(cplx u, double w)
{
    const double rho = std::abs(u);
    const double theta = std::arg(u);
    if (rho <= 1.0) {
        // exp(jw) (1 - u exp(-jw)); the second factor has positive real part.
        return w + std::atan2(-rho * std::sin(theta - w), 1.0 - rho * std::cos(theta - w));
    }
    // -u (1 - exp(jw) / u)
    const double inv = 1.0 / rho;
    return spectral::principal_value(std::arg(-u)) + std::atan2(-inv * std::sin(w - theta), 1.0 - inv * std::cos(w - theta));
}

std::string describe(cplx u)
{
    std::ostringstream os;
    os.precision(17);
    os << "(" << u.real() << (u.imag() < 0 ? " - " : " + ") << std::abs(u.imag()) << "j)";
    return os.str();
}

}  // namespace

std::string_view label(Method m) noexcept
{
    switch (m) {
    case Method::jump:
        return "PU-M";
    case Method::wplane:
        return "PU-K";
    case Method::factor:
        return "PU-F";
    case Method::stoffa:
        return "PU-S";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view text)
{
    std::string t(text);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (t == "PU-M" || t == "JUMP" || t == "M") return Method::jump;
    if (t == "PU-K" || t == "WPLANE" || t == "K") return Method::wplane;
    if (t == "PU-F" || t == "FACTOR" || t == "F") return Method::factor;
    if (t == "PU-S" || t == "STOFFA" || t == "S") return Method::stoffa;
    return std::nullopt;
}

UnwrapInput UnwrapInput::from_trace(const Trace& trace, std::size_t nfft)
{
    if (nfft != 0 && nfft < trace.size()) {
        throw InvalidConfig("unwrap input: nfft shorter than the trace would truncate it");
    }
    Spectrum s = spectral::dft(trace, nfft);
    auto mask = spectral::valid_bins(s);
    return UnwrapInput{trace, std::move(s), std::move(mask)};
}

ZPolynomial z_polynomial(const Trace& trace)
{
    const auto x = trace.samples();
    std::size_t first = 0;
    while (first < x.size() && x[first] == 0.0) {
        ++first;
    }
    if (first == x.size()) {
        throw InvalidConfig("z_polynomial: all-zero trace");
    }
    std::size_t last = x.size() - 1;
    while (x[last] == 0.0) {
        --last;
    }
    ZPolynomial p;
    p.leading_zeros = first;
    p.coeffs.assign(x.rbegin() + static_cast<std::ptrdiff_t>(x.size() - 1 - last),
                    x.rend() - static_cast<std::ptrdiff_t>(first));
    return p;
}

std::vector<std::uint8_t> trusted_bins(const Spectrum& s, std::span<const std::uint8_t> mask)
{
    const std::size_t nb = s.size();
    std::vector<std::uint8_t> out(nb, 0);
    if (nb < 2) {
        return out;
    }
    const double threshold = 0.01 * s.max_amplitude();
    const std::size_t top = nb - 1;
    for (std::size_t k = 1; k < nb; ++k) {
        if (10 * k > 9 * top) {
            break;
        }
        if (is_valid(mask, k) && std::abs(s.bins[k]) >= threshold) {
            out[k] = 1;
        }
    }
    return out;
}

PhaseCurve unwrap_jump(const PhaseCurve& wrapped, std::span<const std::uint8_t> mask)
{
    require_wrapped(wrapped, mask);
    const std::size_t nb = wrapped.size();
    std::vector<std::int64_t> counts(nb, 0);
    std::vector<std::uint8_t> flags(nb, 0);
    std::int64_t n = 0;
    bool have_last = false;
    double last = 0.0;
    for (std::size_t k = 0; k < nb; ++k) {
        if (!is_valid(mask, k)) {
            counts[k] = n;
            flags[k] = 1;
            continue;
        }
        const double value = wrapped.values[k];
        if (have_last) {
            const double step = value - last;
            if (std::abs(std::abs(step) - kPi) <= kTieTolerance) {
                flags[k] = 1;
            } else if (step > kPi) {
                --n;
            } else if (step < -kPi) {
                ++n;
            }
        }
        counts[k] = n;
        last = value;
        have_last = true;
    }
    return from_counts(wrapped, std::move(counts), std::move(flags));
}

PhaseCurve unwrap_wplane(const PhaseCurve& wrapped, std::span<const std::uint8_t> mask)
{
    require_wrapped(wrapped, mask);
    const std::size_t nb = wrapped.size();
    std::vector<std::int64_t> counts(nb, 0);
    std::vector<std::uint8_t> flags(nb, 0);
    std::int64_t n = 0;
    bool have_last = false;
    double re0 = 0.0;
    double im0 = 0.0;
    for (std::size_t k = 0; k < nb; ++k) {
        if (!is_valid(mask, k)) {
            counts[k] = n;
            flags[k] = 1;
            continue;
        }
        const double re1 = std::cos(wrapped.values[k]);
        const double im1 = std::sin(wrapped.values[k]);
        if (have_last) {
            const double cross = re0 * im1 - im0 * re1;
            const double dot = re0 * re1 + im0 * im1;
            if (dot < 0.0 && std::abs(cross) <= kTieTolerance) {
                flags[k] = 1;  // half turn: direction undefined
            } else {
                const bool upper0 = im0 >= 0.0;
                const bool upper1 = im1 >= 0.0;
                if (upper0 != upper1) {
                    // Real-axis intercept of the chord from w_prev to w.
                    const double x = re0 + (re1 - re0) * (im0 / (im0 - im1));
                    if (x < 0.0) {
                        n += upper0 ? 1 : -1;
                    }
                }
            }
        }
        counts[k] = n;
        re0 = re1;
        im0 = im1;
        have_last = true;
    }
    return from_counts(wrapped, std::move(counts), std::move(flags));
}

PhaseCurve unwrap_stoffa(const UnwrapInput& input)
{
    const Spectrum& s = input.spectrum;
    const std::size_t nfft = s.n_time;
    const std::size_t nb = s.size();
    if (input.mask.size() != nb) {
        throw ShapeMismatch("unwrap_stoffa: mask length differs from spectrum");
    }
    const double dt = input.trace.dt();
    const auto x = input.trace.samples();
    std::vector<double> weighted(nfft, 0.0);
    for (std::size_t i = 0; i < x.size() && i < nfft; ++i) {
        const double idx = 2 * i < nfft ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(nfft);
        weighted[i] = idx * dt * x[i];
    }
    const auto t_spec = fft::forward_real(weighted, nfft);

    // phi'(f) = Im[S'/S] with S' = -j 2 pi T  =>  -2 pi Re(T / S), radians per Hz.
    std::vector<double> deriv(nb, 0.0);
    std::vector<std::uint8_t> flags(nb, 0);
    std::optional<double> last_valid;
    std::size_t leading = 0;
    for (std::size_t k = 0; k < nb; ++k) {
        if (input.mask[k] != 0) {
            deriv[k] = -kTwoPi * (t_spec[k] / s.bins[k]).real();
            if (!last_valid) {
                leading = k;
            }
            last_valid = deriv[k];
        } else {
            flags[k] = 1;
            if (last_valid) {
                deriv[k] = *last_valid;
            }
        }
    }
    if (!last_valid) {
        throw InsufficientBand("unwrap_stoffa: every bin is below the amplitude floor");
    }
    for (std::size_t k = 0; k < leading; ++k) {
        deriv[k] = deriv[leading];
    }

    PhaseCurve out;
    out.kind = spectral::PhaseKind::unwrapped;
    out.values.resize(nb);
    out.values[0] = s.bins[0].real() > 0.0 ? 0.0 : -kPi;
    const double half_df = 0.5 * s.df;
    for (std::size_t k = 1; k < nb; ++k) {
        out.values[k] = out.values[k - 1] + half_df * (deriv[k - 1] + deriv[k]);
    }
    out.flags = std::move(flags);
    return out;
}

PhaseCurve unwrap_factor(const UnwrapInput& input, const rootfind::RootSet& roots, const FactorConfig& config)
{
    const Spectrum& s = input.spectrum;
    const std::size_t nb = s.size();
    const ZPolynomial poly = z_polynomial(input.trace);
    const std::size_t degree = poly.coeffs.size() - 1;
    if (roots.roots.size() != degree) {
        throw ShapeMismatch("unwrap_factor: root count " + std::to_string(roots.roots.size()) +
                            " does not match polynomial degree " + std::to_string(degree));
    }
    const auto trusted = trusted_bins(s, input.mask);
    std::vector<std::uint8_t> flags(nb, 0);
    const double bin_angle = kTwoPi / static_cast<double>(s.n_time);
    for (const cplx& u : roots.roots) {
        if (std::abs(std::abs(u) - 1.0) > config.unit_circle_guard) {
            continue;
        }
        const auto k = static_cast<std::size_t>(std::lround(std::abs(std::arg(u)) / bin_angle));
        if (k < nb && trusted[k]) {
            throw SpectralZeroError("unwrap_factor: spectral zero on unit circle at root " + describe(u) +
                                        " (bin " + std::to_string(k) + ")",
                                    u);
        }
        if (k < nb) {
            flags[k] = 1;
        }
    }

    // S(w) = A exp(-j (L + degree) w) prod_k (exp(jw) - u_k)
    const double lead = poly.coeffs.back() > 0.0 ? 0.0 : -kPi;
    const double delay = static_cast<double>(poly.leading_zeros + degree);
    PhaseCurve out;
    out.kind = spectral::PhaseKind::unwrapped;
    out.values.resize(nb);
    for (std::size_t k = 0; k < nb; ++k) {
        const double w = s.omega(k);
        double phase = lead - delay * w;
        for (const cplx& u : roots.roots) {
            phase += factor_phase(u, w);
        }
        out.values[k] = phase;
    }
    // the branch sum can start a multiple of 2 pi away from [-pi, pi)
    if (nb > 0) {
        const double turns = std::floor((out.values[0] + kPi) / kTwoPi);
        if (turns != 0.0) {
            for (double& v : out.values) v -= kTwoPi * turns;
        }
    }

    double worst = 0.0;
    std::size_t worst_bin = 0;
    const bool strong_dc = nb > 0 && std::abs(s.bins[0]) >= 0.01 * s.max_amplitude();
    for (std::size_t k = 0; k < nb; ++k) {
        if (!(trusted[k] || (k == 0 && strong_dc))) {
            continue;
        }
        const double d = std::abs(std::remainder(out.values[k] - std::arg(s.bins[k]), kTwoPi));
        if (d > worst) {
            worst = d;
            worst_bin = k;
        }
    }
    if (worst > config.consistency_tol) {
        throw ConvergenceError("unwrap_factor: root set does not reproduce the spectrum phase (off by " +
                                   std::to_string(worst) + " rad at bin " + std::to_string(worst_bin) + ")",
                               roots.max_residual);
    }
    out.flags = std::move(flags);
    return out;
}

PhaseCurve unwrap_factor(const UnwrapInput& input, const FactorConfig& config)
{
    const ZPolynomial poly = z_polynomial(input.trace);
    rootfind::RootSet roots;
    if (poly.coeffs.size() > 1) {
        roots = rootfind::factor_polynomial(poly.coeffs, config.roots);
    }
    return unwrap_factor(input, roots, config);
}

PhaseCurve unwrap(const UnwrapInput& input, Method method, const FactorConfig& config)
{
    switch (method) {
    case Method::jump:
        return unwrap_jump(spectral::wrapped_phase(input.spectrum), input.mask);
    case Method::wplane:
        return unwrap_wplane(spectral::wrapped_phase(input.spectrum), input.mask);
    case Method::factor:
        return unwrap_factor(input, config);
    case Method::stoffa:
        return unwrap_stoffa(input);
    }
    throw InvalidConfig("unknown unwrap method");
}

LinearPhaseFit fit_linear_phase(const PhaseCurve& curve, const Spectrum& s, std::span<const std::uint8_t> mask)
{
    if (curve.size() != s.size()) {
        throw ShapeMismatch("fit_linear_phase: curve is not aligned with the spectrum");
    }
    const auto band = trusted_bins(s, mask);
    double sw = 0.0;
    double sf = 0.0;
    double sp = 0.0;
    std::size_t count = 0;
    LinearPhaseFit fit;
    for (std::size_t k = 0; k < band.size(); ++k) {
        if (!band[k]) {
            continue;
        }
        const double w = std::norm(s.bins[k]);
        sw += w;
        sf += w * s.frequency(k);
        sp += w * curve.values[k];
        if (count == 0) {
            fit.f_lo = s.frequency(k);
        }
        fit.f_hi = s.frequency(k);
        ++count;
    }
    if (count < 8) {
        throw InsufficientBand("fit_linear_phase: only " + std::to_string(count) + " trusted bins (need 8)");
    }
    const double f_mean = sf / sw;
    const double p_mean = sp / sw;
    double sff = 0.0;
    double sfp = 0.0;
    for (std::size_t k = 0; k < band.size(); ++k) {
        if (!band[k]) {
            continue;
        }
        const double w = std::norm(s.bins[k]);
        const double df = s.frequency(k) - f_mean;
        sff += w * df * df;
        sfp += w * df * (curve.values[k] - p_mean);
    }
    const double slope = sfp / sff;
    const double intercept = p_mean - slope * f_mean;
    double sr = 0.0;
    for (std::size_t k = 0; k < band.size(); ++k) {
        if (!band[k]) {
            continue;
        }
        const double r = curve.values[k] - (intercept + slope * s.frequency(k));
        sr += std::norm(s.bins[k]) * r * r;
    }
    fit.n_bins = count;
    fit.intercept_rad = intercept;
    fit.slope_rad_per_hz = slope;
    fit.tau_s = -slope / kTwoPi;
    const double deg = -intercept * 180.0 / kPi;
    fit.phi0_deg = deg - 360.0 * std::floor((deg + 180.0) / 360.0);
    fit.residual_rms = std::sqrt(sr / sw);
    return fit;
}

UnwrapReport run_method(const UnwrapInput& input, Method method, const FactorConfig& config)
{
    using clock = std::chrono::steady_clock;
    UnwrapReport report;
    report.method = method;
    const auto start = clock::now();
    report.curve = unwrap(input, method, config);
    report.fit = fit_linear_phase(report.curve, input.spectrum, input.mask);
    const auto stop = clock::now();
    report.wall_time_s = std::max(std::chrono::duration<double>(stop - start).count(), 1e-9);
    return report;
}

}  // namespace homomorph::unwrap
