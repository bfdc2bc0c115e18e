#include "homomorph/synth.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "homomorph/error.hpp"
#include "homomorph/fft.hpp"
#include "homomorph/rng.hpp"

namespace homomorph::synth {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

template <typename Multiplier>
Trace apply_multiplier(const Trace& x, Multiplier&& multiplier)
{
    const std::size_t n = x.size();
    auto bins = fft::forward_real(x.samples(), n);
    for (std::size_t k = 0; k < bins.size(); ++k) {
        bins[k] *= multiplier(k, n);
    }
    return Trace(fft::inverse_real(bins, n), x.dt(), x.t_start());
}

bool is_edge_bin(std::size_t k, std::size_t n)
{
    return k == 0 || (n % 2 == 0 && k == n / 2);
}

}  // namespace

void SynthConfig::validate() const
{
    if (n_samples < 16) {
        throw InvalidConfig("n_samples must be at least 16, got " + std::to_string(n_samples));
    }
    if (!(total_length > 0.0)) {
        throw InvalidConfig("total_length must be positive");
    }
    if (!(ricker_f0 > 0.0) || ricker_f0 >= nyquist()) {
        throw InvalidConfig("ricker_f0 must lie in (0, Nyquist); Nyquist is " + std::to_string(nyquist()) +
                            " Hz");
    }
    if (std::abs(shift_s) >= total_length) {
        throw InvalidConfig("shift must be shorter than the record");
    }
    if (snr_db && std::isnan(*snr_db)) {
        throw InvalidConfig("snr_db must be a number");
    }
}

Trace ricker(double f0, double dt, std::size_t n, double t0)
{
    if (!(dt > 0.0) || n == 0) {
        throw InvalidConfig("ricker needs dt > 0 and n > 0");
    }
    if (!(f0 > 0.0) || f0 >= 0.5 / dt) {
        throw InvalidConfig("ricker frequency must lie in (0, Nyquist)");
    }
    const double last = static_cast<double>(n - 1) * dt;
    if (t0 < 0.0 || t0 > last) {
        throw InvalidConfig("ricker centre must lie inside the record");
    }
    std::vector<double> w(n);
    const double a = kPi * kPi * f0 * f0;
    for (std::size_t i = 0; i < n; ++i) {
        const double tau = static_cast<double>(i) * dt - t0;
        const double arg = a * tau * tau;
        w[i] = (1.0 - 2.0 * arg) * std::exp(-arg);
    }
    return Trace(std::move(w), dt);
}

Trace rotate_phase(const Trace& x, double phi_deg)
{
    const double phi = phi_deg * kPi / 180.0;
    const cplx positive = std::polar(1.0, -phi);
    const double edge = std::cos(phi);
    return apply_multiplier(x, [&](std::size_t k, std::size_t n) {
        return is_edge_bin(k, n) ? cplx(edge, 0.0) : positive;
    });
}

Trace time_shift(const Trace& x, double tau)
{
    const double cycles_per_bin = tau / (static_cast<double>(x.size()) * x.dt());
    return apply_multiplier(x, [&](std::size_t k, std::size_t n) {
        // Reduce k * tau / T modulo 1 before the trig call so integer-sample
        // shifts stay exact at large k.
        double turns = static_cast<double>(k) * cycles_per_bin;
        turns -= std::round(turns);
        if (k != 0 && n % 2 == 0 && k == n / 2) {
            return cplx(std::cos(2.0 * kPi * turns) < 0.0 ? -1.0 : 1.0, 0.0);
        }
        return std::polar(1.0, -2.0 * kPi * turns);
    });
}

Trace gen_reflectivity(std::size_t n, double spike_density, std::uint64_t seed, double dt)
{
    if (n == 0) {
        throw InvalidConfig("reflectivity length must be positive");
    }
    if (!(spike_density > 0.0) || spike_density > 1.0) {
        throw InvalidConfig("spike_density must lie in (0, 1]");
    }
    Rng rng(seed);
    std::vector<double> r(n, 0.0);
    for (double& v : r) {
        if (rng.uniform() < spike_density) {
            v = rng.normal();
        }
    }
    return Trace(std::move(r), dt);
}

Trace convolve(const Trace& w, const Trace& r)
{
    if (!same_sampling(w.dt(), r.dt())) {
        throw ShapeMismatch("convolve: sample intervals differ");
    }
    const std::size_t nw = w.size();
    const std::size_t nr = r.size();
    std::vector<double> out(nw + nr - 1, 0.0);
    for (std::size_t i = 0; i < nw; ++i) {
        const double wi = w[i];
        if (wi == 0.0) {
            continue;
        }
        for (std::size_t j = 0; j < nr; ++j) {
            out[i + j] += wi * r[j];
        }
    }
    return Trace(std::move(out), w.dt(), w.t_start() + r.t_start());
}

Trace add_noise(const Trace& x, double snr_db, std::uint64_t seed)
{
    if (std::isinf(snr_db) && snr_db > 0.0) {
        return x;
    }
    if (!std::isfinite(snr_db)) {
        throw InvalidConfig("snr_db must be finite or +inf");
    }
    const double energy = x.energy();
    if (energy == 0.0) {
        throw InvalidConfig("cannot add noise at a given SNR to an all-zero trace");
    }
    Rng rng(seed);
    std::vector<double> noise(x.size());
    double drawn = 0.0;
    for (double& v : noise) {
        v = rng.normal();
        drawn += v * v;
    }
    // scale the realized draw, not the model variance, so the SNR is exact
    const double scale = std::sqrt(energy / std::pow(10.0, snr_db / 10.0) / drawn);
    std::vector<double> y(x.vector());
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] += scale * noise[i];
    }
    return Trace(std::move(y), x.dt(), x.t_start());
}

double measured_snr_db(const Trace& clean, const Trace& noisy)
{
    if (clean.size() != noisy.size()) {
        throw ShapeMismatch("measured_snr_db: length mismatch");
    }
    double ps = 0.0;
    double pn = 0.0;
    for (std::size_t i = 0; i < clean.size(); ++i) {
        ps += clean[i] * clean[i];
        const double d = noisy[i] - clean[i];
        pn += d * d;
    }
    return 10.0 * std::log10(ps / pn);
}

Trace scenario_trace(const SynthConfig& config)
{
    config.validate();
    const double dt = config.dt();
    Trace w = ricker(config.ricker_f0, dt, config.n_samples, config.t0());
    w = rotate_phase(w, config.rotation_deg);
    w = time_shift(w, config.shift_s);
    if (config.snr_db && std::isfinite(*config.snr_db)) {
        w = add_noise(w, *config.snr_db, config.rng_seed);
    }
    return w;
}

}  // namespace homomorph::synth
