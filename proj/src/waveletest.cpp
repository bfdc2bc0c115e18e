#include "homomorph/waveletest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <numbers>
#include <limits>
#include <thread>

#include "homomorph/error.hpp"
#include "homomorph/fft.hpp"
#include "homomorph/rng.hpp"
#include "homomorph/synth.hpp"

namespace homomorph::waveletest {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct PerTrace {
    std::vector<double> log_amp;
    std::vector<double> phase;
    std::string error;
    bool ok = false;
};

PerTrace process(const Trace& x, std::size_t nfft, unwrap::Method method, const unwrap::FactorConfig& config)
{
    PerTrace out;
    try {
        const auto input = unwrap::UnwrapInput::from_trace(x, nfft);
        auto curve = unwrap::unwrap(input, method, config);
        const auto fit = unwrap::fit_linear_phase(curve, input.spectrum, input.mask);
        const double level = kTwoPi * std::round(fit.intercept_rad / kTwoPi);
        const auto logs = spectral::log_spectrum(input.spectrum, curve);
        out.log_amp.resize(logs.size());
        out.phase.resize(logs.size());
        for (std::size_t k = 0; k < logs.size(); ++k) {
            out.log_amp[k] = logs[k].real();
            out.phase[k] = curve.values[k] - level - fit.slope_rad_per_hz * input.spectrum.frequency(k);
        }
        out.ok = true;
    } catch (const Error& e) {
        out.error = e.what();
    }
    return out;
}

// Fixed-shape pairwise sum of rows [lo, hi).
std::vector<double> pairwise_sum(const std::vector<const std::vector<double>*>& rows, std::size_t lo, std::size_t hi)
{
    if (hi - lo == 1) {
        return *rows[lo];
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    auto left = pairwise_sum(rows, lo, mid);
    const auto right = pairwise_sum(rows, mid, hi);
    for (std::size_t k = 0; k < left.size(); ++k) {
        left[k] += right[k];
    }
    return left;
}

}  // namespace

Gather::Gather(std::vector<Trace> traces, std::uint64_t seed, std::string provenance)
    : traces_(std::move(traces)), seed_(seed), provenance_(std::move(provenance))
{
    if (traces_.empty()) {
        throw InvalidConfig("gather needs at least one trace");
    }
    for (const auto& t : traces_) {
        if (t.size() != traces_.front().size() || !same_sampling(t.dt(), traces_.front().dt())) {
            throw ShapeMismatch("gather traces must share length and sample interval");
        }
    }
}

void GatherSpec::validate() const
{
    if (n_traces == 0) {
        throw InvalidConfig("n_traces must be at least 1");
    }
    if (!(dt > 0.0)) {
        throw InvalidConfig("dt must be positive");
    }
    if (!(ricker_f0 > 0.0) || ricker_f0 >= 0.5 / dt) {
        throw InvalidConfig("ricker_f0 must lie in (0, Nyquist)");
    }
    if (!(spike_density > 0.0) || spike_density > 1.0) {
        throw InvalidConfig("spike_density must lie in (0, 1]");
    }
    if (!(wavelet_half_length_s > 0.0)) {
        throw InvalidConfig("wavelet_half_length_s must be positive");
    }
    const std::size_t len = 2 * static_cast<std::size_t>(std::lround(wavelet_half_length_s / dt)) + 1;
    if (len >= n_samples) {
        throw InvalidConfig("wavelet (" + std::to_string(len) + " samples) does not fit in " +
                            std::to_string(n_samples) + " samples");
    }
}

Trace GatherSpec::wavelet() const
{
    const auto half = static_cast<std::size_t>(std::lround(wavelet_half_length_s / dt));
    const Trace w = synth::ricker(ricker_f0, dt, 2 * half + 1, static_cast<double>(half) * dt);
    return Trace(w.vector(), dt, -static_cast<double>(half) * dt);
}

Gather make_synthetic_gather(const GatherSpec& spec)
{
    spec.validate();
    const Trace w = spec.wavelet();
    const std::size_t n_refl = spec.n_samples - w.size() + 1;
    std::vector<Trace> traces;
    traces.reserve(spec.n_traces);
    for (std::size_t i = 0; i < spec.n_traces; ++i) {
        const std::uint64_t trace_seed = mix_seed(spec.seed, i);
        Trace r = synth::gen_reflectivity(n_refl, spec.spike_density, trace_seed, spec.dt);
        Trace s = synth::convolve(Trace(w.vector(), spec.dt), r);
        if (spec.snr_db) {
            s = synth::add_noise(s, *spec.snr_db, mix_seed(trace_seed, 1));
        }
        traces.push_back(std::move(s));
    }
    return Gather(std::move(traces), spec.seed, "synthetic ricker gather");
}

LogSpectralAverage log_spectral_average(const Gather& g, unwrap::Method method, const AverageOptions& options)
{
    if (options.pad_factor == 0) {
        throw InvalidConfig("pad_factor must be at least 1");
    }
    const std::size_t nfft = options.pad_factor * g.n_samples();
    std::vector<PerTrace> results(g.size());
    const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, g.size());
    if (workers == 1) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            results[i] = process(g[i], nfft, method, options.factor);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < g.size(); i = next++) {
                    results[i] = process(g[i], nfft, method, options.factor);
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    LogSpectralAverage avg;
    avg.n_time = nfft;
    avg.df = 1.0 / (static_cast<double>(nfft) * g.dt());
    std::vector<const std::vector<double>*> amps;
    std::vector<const std::vector<double>*> phases;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].ok) {
            amps.push_back(&results[i].log_amp);
            phases.push_back(&results[i].phase);
        } else {
            avg.failures.push_back({i, results[i].error});
        }
    }
    if (amps.empty()) {
        throw Error("log_spectral_average: all " + std::to_string(g.size()) + " traces failed; first: " +
                    avg.failures.front().message);
    }
    avg.n_used = amps.size();
    avg.mean_log_amp = pairwise_sum(amps, 0, amps.size());
    avg.mean_phase = pairwise_sum(phases, 0, phases.size());
    const double inv = 1.0 / static_cast<double>(avg.n_used);
    for (auto& v : avg.mean_log_amp) {
        v *= inv;
    }
    for (auto& v : avg.mean_phase) {
        v *= inv;
    }
    return avg;
}

WaveletEstimate estimate_wavelet(const Gather& g, unwrap::Method method, double support_s, const AverageOptions& options)
{
    const double dt = g.dt();
    const double duration = static_cast<double>(g.n_samples() - 1) * dt;
    if (!(support_s > 0.0) || !(support_s < duration / 2.0)) {
        throw InvalidConfig("support_s must lie in (0, duration/2)");
    }
    auto avg = log_spectral_average(g, method, options);
    const std::size_t n = avg.n_time;
    std::vector<std::complex<double>> spec(avg.mean_log_amp.size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
        spec[k] = std::exp(std::complex<double>(avg.mean_log_amp[k], avg.mean_phase[k]));
    }
    const auto x = fft::inverse_real(spec, n);

    std::size_t peak = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(x[i]) > std::abs(x[peak])) {
            peak = i;
        }
    }
    const auto q = static_cast<std::size_t>(std::lround(support_s / dt));
    std::vector<double> cut(2 * q + 1);
    for (std::size_t i = 0; i < cut.size(); ++i) {
        cut[i] = x[(peak + n - q + i) % n];
    }
    const double scale = std::abs(x[peak]);
    if (scale > 0.0) {
        for (auto& v : cut) {
            v /= scale;
        }
    }

    WaveletEstimate est{Trace(std::move(cut), dt, -static_cast<double>(q) * dt), 0, method, {}, {}, {}, {}};
    est.n_traces_used = avg.n_used;
    est.unwrap_method = method;
    est.mean_log_amp = std::move(avg.mean_log_amp);
    est.mean_phase = std::move(avg.mean_phase);
    for (const auto& f : avg.failures) {
        est.failed_trace_ids.push_back(f.index);
        est.failure_messages.push_back(f.message);
    }
    return est;
}

double normalized_xcorr_max(const Trace& a, const Trace& b)
{
    if (!same_sampling(a.dt(), b.dt())) {
        throw ShapeMismatch("normalized_xcorr_max: sample intervals differ");
    }
    const double norm = std::sqrt(a.energy() * b.energy());
    if (norm == 0.0) {
        throw InvalidConfig("normalized_xcorr_max: zero-energy input");
    }
    const auto na = static_cast<long>(a.size());
    const auto nb = static_cast<long>(b.size());
    double best = -std::numeric_limits<double>::infinity();
    for (long lag = -(nb - 1); lag < na; ++lag) {
        double sum = 0.0;
        for (long j = std::max(0L, -lag); j < nb && j + lag < na; ++j) {
            sum += a[static_cast<std::size_t>(j + lag)] * b[static_cast<std::size_t>(j)];
        }
        best = std::max(best, sum);
    }
    return best / norm;
}

}  // namespace homomorph::waveletest
