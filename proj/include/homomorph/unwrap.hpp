#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "homomorph/rootfind.hpp"
#include "homomorph/spectral.hpp"
#include "homomorph/trace.hpp"

/// One-dimensional phase unwrapping along the frequency axis.
namespace homomorph::unwrap {

using spectral::PhaseCurve;
using spectral::Spectrum;

enum class Method {
    jump,    // PU-M: 2 pi jump correction
    wplane,  // PU-K: negative-real-axis crossings in the w-plane
    factor,  // PU-F: sum of per-root phase contributions
    stoffa,  // PU-S: integration of the analytic phase derivative
};

inline constexpr Method kAllMethods[] = {Method::jump, Method::wplane, Method::factor, Method::stoffa};

/// Short label as used in reports: "PU-M", "PU-K", "PU-F", "PU-S".
std::string_view label(Method m) noexcept;
/// Accepts the labels above (case-insensitive) and the enum names.
std::optional<Method> parse_method(std::string_view text);

/// Spectrum, originating trace and validity mask of one unwrapping problem.
struct UnwrapInput {
    Trace trace;
    Spectrum spectrum;
    std::vector<std::uint8_t> mask;  // 1 = above the amplitude floor

    /// DFT of the trace (zero-padded to nfft when nfft > 0) and its floor mask.
    static UnwrapInput from_trace(const Trace& trace, std::size_t nfft = 0);
};

/// phi(f) ~ -phi0 - 2 pi f tau over the trusted band.
struct LinearPhaseFit {
    double phi0_deg = 0.0;      // reduced to [-180, 180)
    double tau_s = 0.0;
    double intercept_rad = 0.0; // raw fitted intercept, before reduction
    double slope_rad_per_hz = 0.0;
    double f_lo = 0.0;
    double f_hi = 0.0;
    double residual_rms = 0.0;
    std::size_t n_bins = 0;
};

struct UnwrapReport {
    Method method = Method::jump;
    PhaseCurve curve;
    LinearPhaseFit fit;
    double wall_time_s = 0.0;
};

struct FactorConfig {
    double unit_circle_guard = 1e-8;  // delta
    // largest |phase - principal value| (mod 2 pi) allowed on trusted bins and
    // a strong DC bin; beyond it the root set is rejected
    double consistency_tol = 1e-6;
    rootfind::FactorOptions roots{};
};

/// z-transform polynomial of a trace: leading and trailing zero samples
/// stripped, coefficients reversed into ascending monomial order, so that
/// S(w) = exp(-j (leading_zeros + degree) w) P(exp(j w)).
struct ZPolynomial {
    std::vector<double> coeffs;
    std::size_t leading_zeros = 0;
};
ZPolynomial z_polynomial(const Trace& trace);

/// Bins used for linear-phase fitting: unmasked, amplitude >= 1% of peak,
/// excluding bin 0 and the top 10% of the band.
std::vector<std::uint8_t> trusted_bins(const Spectrum& s, std::span<const std::uint8_t> mask);

/// PU-M. Bins are scanned in frequency order; a step between consecutive
/// unmasked principal values larger than pi (strictly) moves the running
/// wrap count by one. Masked bins inherit the count of the last unmasked bin
/// and are flagged. Steps within 1e-12 of pi are left uncorrected.
PhaseCurve unwrap_jump(const PhaseCurve& wrapped, std::span<const std::uint8_t> mask = {});

/// PU-K. Each principal value is mapped to w = exp(j phi); the chord between
/// consecutive unmasked w's crossing the negative real axis changes the wrap
/// count by the crossing direction. Antipodal pairs count as no crossing and
/// are flagged.
PhaseCurve unwrap_wplane(const PhaseCurve& wrapped, std::span<const std::uint8_t> mask = {});

/// PU-S. Trapezoidal integration of phi'(f) = Im[S'(f)/S(f)], S' the DFT of
/// -j 2 pi t s(t) with t on the circular grid centred at sample 0. Starts at
/// 0 when S(0) > 0, else -pi. The derivative at floored bins is clamped to
/// the last valid value (the first valid one for leading floored bins).
PhaseCurve unwrap_stoffa(const UnwrapInput& input);

/// PU-F with supplied roots of z_polynomial(input.trace). Each root's
/// contribution arg(exp(jw) - u) is evaluated in closed form on the branch
/// that is continuous from w = 0. Throws SpectralZeroError for a root within
/// the guard of the unit circle whose nearest bin is trusted; such roots at
/// untrusted bins are tolerated and their bin flagged. Throws
/// ConvergenceError when the result strays from the principal value by more
/// than consistency_tol on a trusted bin (a root set too inaccurate to use,
/// e.g. from samples spanning hundreds of decades).
PhaseCurve unwrap_factor(const UnwrapInput& input, const rootfind::RootSet& roots,
                         const FactorConfig& config = {});
/// PU-F, factoring the trace itself.
PhaseCurve unwrap_factor(const UnwrapInput& input, const FactorConfig& config = {});

/// Dispatches to one of the four methods.
PhaseCurve unwrap(const UnwrapInput& input, Method method, const FactorConfig& config = {});

/// Weighted least squares of phi against [1, f] on the trusted bins, weights |S|^2.
/// Throws InsufficientBand for fewer than 8 trusted bins.
LinearPhaseFit fit_linear_phase(const PhaseCurve& curve, const Spectrum& s, std::span<const std::uint8_t> mask);

/// Method run end to end on a trace (transform, unwrap, fit), with the wall
/// time of the unwrap-and-fit stage.
UnwrapReport run_method(const UnwrapInput& input, Method method, const FactorConfig& config = {});

}  // namespace homomorph::unwrap
