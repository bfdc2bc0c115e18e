#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "homomorph/trace.hpp"
#include "homomorph/unwrap.hpp"

/// Wavelet estimation by averaging log spectra across traces.
namespace homomorph::waveletest {

/// Traces of equal length and sample interval.
class Gather {
public:
    Gather(std::vector<Trace> traces, std::uint64_t seed = 0, std::string provenance = {});

    const std::vector<Trace>& traces() const noexcept { return traces_; }
    const Trace& operator[](std::size_t i) const noexcept { return traces_[i]; }
    std::size_t size() const noexcept { return traces_.size(); }
    std::size_t n_samples() const noexcept { return traces_.front().size(); }
    double dt() const noexcept { return traces_.front().dt(); }
    std::uint64_t seed() const noexcept { return seed_; }
    const std::string& provenance() const noexcept { return provenance_; }

private:
    std::vector<Trace> traces_;
    std::uint64_t seed_;
    std::string provenance_;
};

/// Ricker wavelet convolved with sparse spikes, one reflectivity per trace.
struct GatherSpec {
    std::size_t n_traces = 50;
    std::size_t n_samples = 256;
    double dt = 0.002;
    double ricker_f0 = 30.0;
    double wavelet_half_length_s = 0.1;
    double spike_density = 0.1;
    std::optional<double> snr_db;
    std::uint64_t seed = 7;

    void validate() const;
    /// Zero-phase Ricker with 2 round(half_length/dt) + 1 samples, centred.
    Trace wavelet() const;
};

Gather make_synthetic_gather(const GatherSpec& spec);

struct AverageOptions {
    std::size_t pad_factor = 4;  // transform length = pad_factor * n_samples
    std::size_t workers = 1;
    unwrap::FactorConfig factor{};
};

struct TraceFailure {
    std::size_t index = 0;
    std::string message;
};

struct LogSpectralAverage {
    std::vector<double> mean_log_amp;
    std::vector<double> mean_phase;  // linear phase removed per trace
    std::vector<TraceFailure> failures;
    std::size_t n_used = 0;
    std::size_t n_time = 0;
    double df = 0.0;
};

/// Per trace: DFT, floor, unwrap, remove the fitted linear phase; then the
/// mean of log amplitudes and of residual phases over the traces that
/// succeeded. The mean is a pairwise sum in trace order, so it does not
/// depend on the worker count. Throws Error when every trace fails.
LogSpectralAverage log_spectral_average(const Gather& g, unwrap::Method method, const AverageOptions& options = {});

struct WaveletEstimate {
    Trace wavelet;
    std::size_t n_traces_used = 0;
    unwrap::Method unwrap_method = unwrap::Method::wplane;
    std::vector<double> mean_log_amp;
    std::vector<double> mean_phase;
    std::vector<std::size_t> failed_trace_ids;
    std::vector<std::string> failure_messages;
};

/// Inverse transform of exp(mean log spectrum), cut to +-support_s around
/// its largest sample, peak-normalized. support_s must be below half the
/// trace duration.
WaveletEstimate estimate_wavelet(const Gather& g, unwrap::Method method, double support_s,
                                 const AverageOptions& options = {});

/// Largest normalized cross-correlation over all lags. Requires equal dt.
double normalized_xcorr_max(const Trace& a, const Trace& b);

}  // namespace homomorph::waveletest
