#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "homomorph/trace.hpp"

/// Fourier-domain kernel: half-band spectra, principal-value phase and the
/// complex log spectrum.
namespace homomorph::spectral {

using cplx = std::complex<double>;

/// Relative amplitude floor applied before logarithms; bins below it are masked.
inline constexpr double kAmplitudeFloor = 1e-12;

/// DFT of a real trace on the non-negative half band [0, Nyquist].
///
/// Forward kernel exp(-j 2 pi k m / n_time), no normalization.
struct Spectrum {
    std::vector<cplx> bins;  // n_time/2 + 1 values
    double df = 0.0;         // Hz per bin, 1 / (n_time dt)
    std::size_t n_time = 0;

    std::size_t size() const noexcept { return bins.size(); }
    double frequency(std::size_t k) const noexcept { return static_cast<double>(k) * df; }
    double dt() const noexcept { return 1.0 / (static_cast<double>(n_time) * df); }
    /// Angular frequency of bin k in radians per sample.
    double omega(std::size_t k) const noexcept;
    double max_amplitude() const noexcept;
};

enum class PhaseKind { wrapped, unwrapped };

/// Per-bin phase aligned to a Spectrum.
///
/// Wrapped curves hold principal values in [-pi, pi). Unwrapped curves from
/// the 2-pi-correcting methods also carry the integer wrap counts n(f) with
/// values[k] = principal[k] + 2 pi n[k]. `flags` marks bins whose value was
/// bridged, clamped or tie-broken rather than measured.
struct PhaseCurve {
    std::vector<double> values;
    PhaseKind kind = PhaseKind::wrapped;
    std::vector<std::int64_t> wrap_counts;  // empty when not applicable
    std::vector<std::uint8_t> flags;        // empty or one entry per bin

    std::size_t size() const noexcept { return values.size(); }
    std::size_t flagged_count() const noexcept;
};

/// Zero-padded (or truncated) transform of length nfft; nfft = 0 keeps the trace length.
Spectrum dft(const Trace& x, std::size_t nfft = 0);

/// Inverse of dft; returns n_time samples starting at t = 0.
Trace idft(const Spectrum& s);

/// Principal value of an angle in [-pi, pi).
double principal_value(double angle) noexcept;

/// Two-argument arctangent of each bin, with -pi (not +pi) on the negative real axis.
PhaseCurve wrapped_phase(const Spectrum& s);

/// One flag per bin: 1 when |S| >= floor * max|S|, 0 for floored bins.
std::vector<std::uint8_t> valid_bins(const Spectrum& s, double floor = kAmplitudeFloor);

/// Complex log spectrum: ln(max(|S|, floor max|S|)) + j phase.
/// Throws InvalidConfig for an all-zero spectrum or misaligned phase.
std::vector<cplx> log_spectrum(const Spectrum& s, const PhaseCurve& phase, double floor = kAmplitudeFloor);

/// Energy of the full two-sided spectrum divided by n_time (Parseval partner of sum x^2).
double parseval_energy(const Spectrum& s);

}  // namespace homomorph::spectral
