#include "homomorph/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "homomorph/error.hpp"
#include "homomorph/fft.hpp"

namespace homomorph::spectral {

namespace {
constexpr double kPi = std::numbers::pi;
}

double Spectrum::omega(std::size_t k) const noexcept
{
    return 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n_time);
}

double Spectrum::max_amplitude() const noexcept
{
    double m = 0.0;
    for (const cplx& b : bins) {
        m = std::max(m, std::abs(b));
    }
    return m;
}

std::size_t PhaseCurve::flagged_count() const noexcept
{
    return static_cast<std::size_t>(std::count_if(flags.begin(), flags.end(), [](std::uint8_t f) { return f != 0; }));
}

Spectrum dft(const Trace& x, std::size_t nfft)
{
    const std::size_t n = nfft == 0 ? x.size() : nfft;
    Spectrum s;
    s.bins = fft::forward_real(x.samples(), n);
    s.n_time = n;
    s.df = 1.0 / (static_cast<double>(n) * x.dt());
    return s;
}

Trace idft(const Spectrum& s)
{
    if (s.n_time == 0 || s.bins.size() != s.n_time / 2 + 1) {
        throw ShapeMismatch("idft: spectrum is not a consistent half band");
    }
    return Trace(fft::inverse_real(s.bins, s.n_time), s.dt());
}

double principal_value(double angle) noexcept
{
    double v = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
    if (v >= kPi) {
        v -= 2.0 * kPi;
    }
    return v;
}

PhaseCurve wrapped_phase(const Spectrum& s)
{
    PhaseCurve curve;
    curve.kind = PhaseKind::wrapped;
    curve.values.resize(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        double p = std::atan2(s.bins[k].imag(), s.bins[k].real());
        if (p >= kPi) {
            p = -kPi;
        }
        curve.values[k] = p;
    }
    return curve;
}

std::vector<std::uint8_t> valid_bins(const Spectrum& s, double floor)
{
    const double threshold = floor * s.max_amplitude();
    std::vector<std::uint8_t> mask(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double a = std::abs(s.bins[k]);
        mask[k] = (a > 0.0 && a >= threshold) ? 1 : 0;
    }
    return mask;
}

std::vector<cplx> log_spectrum(const Spectrum& s, const PhaseCurve& phase, double floor)
{
    if (phase.size() != s.size()) {
        throw ShapeMismatch("log_spectrum: phase curve is not aligned with the spectrum");
    }
    const double peak = s.max_amplitude();
    if (peak == 0.0) {
        throw InvalidConfig("log_spectrum: all-zero spectrum");
    }
    const double lo = floor * peak;
    std::vector<cplx> out(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        out[k] = cplx(std::log(std::max(std::abs(s.bins[k]), lo)), phase.values[k]);
    }
    return out;
}

double parseval_energy(const Spectrum& s)
{
    double e = 0.0;
    const std::size_t n = s.n_time;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const bool single = k == 0 || (n % 2 == 0 && k == n / 2);
        e += (single ? 1.0 : 2.0) * std::norm(s.bins[k]);
    }
    return e / static_cast<double>(n);
}

}  // namespace homomorph::spectral
