#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>

#include "homomorph/trace.hpp"

/// Deterministic synthesis of test signals.
namespace homomorph::synth {

/// Parameters of one synthetic scenario.
struct SynthConfig {
    std::size_t n_samples = 1024;
    double total_length = 1.024;  // seconds; dt = total_length / n_samples
    double ricker_f0 = 30.0;
    double rotation_deg = 90.0;
    double shift_s = 0.090;
    std::uint64_t rng_seed = 7;
    std::optional<double> snr_db;  // nullopt: noise-free

    double dt() const noexcept { return total_length / static_cast<double>(n_samples); }
    double nyquist() const noexcept { return 0.5 / dt(); }
    /// Wavelet centre before shifting.
    double t0() const noexcept { return total_length / 4.0; }

    /// Throws InvalidConfig when n_samples < 16 or f0 is not below Nyquist.
    void validate() const;
};

/// Peak-normalized Ricker wavelet (1 - 2 pi^2 f0^2 tau^2) exp(-pi^2 f0^2 tau^2), tau = t - t0.
Trace ricker(double f0, double dt, std::size_t n, double t0);

/// Constant-phase rotation: positive-frequency bins are multiplied by exp(-j phi),
/// DC and Nyquist by cos(phi). Composition is additive for signals without
/// DC or Nyquist content.
Trace rotate_phase(const Trace& x, double phi_deg);

/// Circular delay by tau seconds: bins multiplied by exp(-j 2 pi f tau). The
/// Nyquist bin takes the sign of cos(2 pi f_N tau) so the shift stays
/// energy-preserving and invertible.
Trace time_shift(const Trace& x, double tau);

/// Sparse reflectivity: each sample is a N(0,1) spike with probability
/// spike_density, zero otherwise. Sample interval is 1 (rescale with with_dt).
Trace gen_reflectivity(std::size_t n, double spike_density, std::uint64_t seed, double dt = 1.0);

/// Full linear convolution, length len(w) + len(r) - 1.
Trace convolve(const Trace& w, const Trace& r);

/// Adds white Gaussian noise at snr_db relative to the mean signal power.
/// An infinite snr_db returns the input unchanged.
Trace add_noise(const Trace& x, double snr_db, std::uint64_t seed);

/// Measured 10 log10(P_signal / P_noise) of noisy against clean.
double measured_snr_db(const Trace& clean, const Trace& noisy);

/// Rotated, shifted Ricker of the given scenario, with noise when snr_db is set.
Trace scenario_trace(const SynthConfig& config);

inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

}  // namespace homomorph::synth
