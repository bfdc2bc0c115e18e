#pragma once

#include <cstddef>
#include <vector>

#include "homomorph/trace.hpp"
#include "homomorph/unwrap.hpp"

/// Complex cepstrum and its inverse.
namespace homomorph::spectral {

/// Real sequence over quefrency, index q at q * dq (circular, negative
/// quefrencies in the upper half).
///
/// Before the inverse transform the unwrapped phase is shifted by the DC
/// sign term (0 or -pi) and by an integer-sample delay, so that the phase
/// vanishes at DC and Nyquist. Both are kept here and reapplied by
/// inverse_cepstrum.
struct Cepstrum {
    std::vector<double> values;
    double dq = 0.0;
    bool linear_phase_removed = false;
    long delay_samples = 0;           // removed phase -2 pi f delay dq
    double intercept_rad = 0.0;       // removed constant, 0 or -pi
    double slope_rad_per_hz = 0.0;    // -2 pi delay_samples dq
    std::size_t n_time = 0;

    std::size_t size() const noexcept { return values.size(); }
};

/// Cepstrum of x on an nfft-point grid (0 keeps the trace length).
Cepstrum cepstrum(const Trace& x, unwrap::Method unwrapper = unwrap::Method::factor, std::size_t nfft = 0,
                  const unwrap::FactorConfig& config = {});

/// exp of the forward transform of c, recorded linear phase put back, inverse DFT.
/// n_time = 0 uses c.n_time.
Trace inverse_cepstrum(const Cepstrum& c, std::size_t n_time = 0);

}  // namespace homomorph::spectral
