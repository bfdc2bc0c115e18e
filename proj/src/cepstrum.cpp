#include "homomorph/cepstrum.hpp"

#include <cmath>
#include <numbers>

#include "homomorph/error.hpp"
#include "homomorph/fft.hpp"

namespace homomorph::spectral {

namespace {
constexpr double kPi = std::numbers::pi;
}

Cepstrum cepstrum(const Trace& x, unwrap::Method unwrapper, std::size_t nfft, const unwrap::FactorConfig& config)
{
    const auto input = unwrap::UnwrapInput::from_trace(x, nfft);
    const Spectrum& s = input.spectrum;
    if (s.max_amplitude() == 0.0) {
        throw InvalidConfig("cepstrum: all-zero trace");
    }
    PhaseCurve phase = unwrap::unwrap(input, unwrapper, config);
    const std::size_t nb = s.size();
    const std::size_t n = s.n_time;

    const double intercept = kPi * std::round(phase.values[0] / kPi);
    long delay = 0;
    const std::size_t last = nb - 1;
    if (n % 2 == 0 && last > 0 && input.mask[last] != 0) {
        // Nyquist phase is a multiple of pi; cancel it exactly.
        delay = std::lround(-(phase.values[last] - intercept) / kPi);
    } else if (nb > 1) {
        const auto fit = unwrap::fit_linear_phase(phase, s, input.mask);
        delay = std::lround(fit.tau_s / x.dt());
    }
    for (std::size_t k = 0; k < nb; ++k) {
        phase.values[k] += static_cast<double>(delay) * s.omega(k) - intercept;
    }
    phase.wrap_counts.clear();

    const auto logs = log_spectrum(s, phase);
    Cepstrum c;
    c.values = fft::inverse_real(logs, n);
    c.dq = x.dt();
    c.linear_phase_removed = true;
    c.delay_samples = delay;
    c.intercept_rad = intercept;
    c.slope_rad_per_hz = -2.0 * kPi * static_cast<double>(delay) * x.dt();
    c.n_time = n;
    return c;
}

Trace inverse_cepstrum(const Cepstrum& c, std::size_t n_time)
{
    const std::size_t n = n_time == 0 ? c.n_time : n_time;
    if (n == 0 || c.values.empty()) {
        throw InvalidConfig("inverse_cepstrum: empty cepstrum");
    }
    for (double v : c.values) {
        if (!std::isfinite(v)) {
            throw InvalidConfig("inverse_cepstrum: non-finite cepstrum value");
        }
    }
    auto spec = fft::forward_real(c.values, n);
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const double w = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
        const double extra = c.linear_phase_removed ? c.intercept_rad - static_cast<double>(c.delay_samples) * w : 0.0;
        spec[k] = std::exp(spec[k] + std::complex<double>(0.0, extra));
    }
    const double dq = c.dq > 0.0 ? c.dq : 1.0;
    return Trace(fft::inverse_real(spec, n), dq);
}

}  // namespace homomorph::spectral
