#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homomorph/synth.hpp"
#include "homomorph/unwrap.hpp"
#include "homomorph/waveletest.hpp"

/// Benchmark harness behind the command-line tool.
namespace homomorph::bench {

/// Everything a subcommand needs. Filled from defaults, then a config file,
/// then command-line overrides.
///
/// Config file grammar: one `key = value` per line, `#` starts a comment,
/// blank lines ignored, lists are comma separated. Keys are the names
/// returned by resolved_settings().
struct BenchConfig {
    std::string scenario = "table1";
    synth::SynthConfig synth{};
    std::vector<std::size_t> n_values{256, 512, 1024};
    std::vector<double> shifts_ms{30.0, 60.0, 90.0};
    std::vector<unwrap::Method> methods{unwrap::Method::jump, unwrap::Method::wplane, unwrap::Method::factor,
                                        unwrap::Method::stoffa};
    std::size_t reps = 3;
    std::filesystem::path out_dir = "out";
    std::size_t nfft = 0;
    std::filesystem::path trace_path;

    waveletest::GatherSpec gather{};
    bool pure_wavelet = false;
    double support_s = 0.2;
    std::size_t pad_factor = 4;
    std::size_t workers = 1;

    std::vector<std::size_t> sweep_n_samples{256, 512, 1024};
    std::vector<double> sweep_snr_db{40.0, 30.0, 20.0, 10.0};

    std::uint64_t seed() const noexcept { return synth.rng_seed; }
    void set_seed(std::uint64_t s) noexcept
    {
        synth.rng_seed = s;
        gather.seed = s;
    }
    /// Throws InvalidConfig on out-of-range values.
    void validate() const;
};

/// Applies one `key = value` setting. Throws InvalidConfig for unknown keys
/// or unparsable values.
void apply_setting(BenchConfig& config, const std::string& key, const std::string& value);
/// Applies every setting of a config file, in file order.
void load_config_file(BenchConfig& config, const std::filesystem::path& path);
/// Full resolved configuration as ordered key/value pairs.
std::vector<std::pair<std::string, std::string>> resolved_settings(const BenchConfig& config);

/// Per-method outcome of one Table 1 cell.
struct MethodResult {
    unwrap::Method method = unwrap::Method::jump;
    bool ok = false;
    double phi0_deg = 0.0;
    double tau_ms = 0.0;  // fitted delay minus the wavelet centre
    std::optional<double> wall_time_s;
    std::string error;
};

struct ResultRow {
    std::size_t n_samples = 0;
    double ground_truth_deg = 0.0;
    double ground_truth_tau_ms = 0.0;
    std::vector<MethodResult> methods;
    std::uint64_t seed = 0;
};

/// Rows for every n in config.n_values; no timing.
std::vector<ResultRow> table1_rows(const BenchConfig& config);
/// Median wall time per method over config.reps runs after one discarded
/// warm-up, at n = n_samples.
ResultRow table1_timing(const BenchConfig& config, std::size_t n_samples);

/// Reads a two-column (time_s, amplitude) CSV; lines starting with # are skipped.
Trace read_trace_csv(const std::filesystem::path& path);
void write_trace_csv(const std::filesystem::path& path, const Trace& trace, const BenchConfig& config);

/// Subcommands. Each writes its files under config.out_dir and returns the
/// paths written.
std::vector<std::filesystem::path> cmd_synth(const BenchConfig& config);
std::vector<std::filesystem::path> cmd_unwrap(const BenchConfig& config);
std::vector<std::filesystem::path> cmd_table1(const BenchConfig& config);
std::vector<std::filesystem::path> cmd_estimate(const BenchConfig& config);
std::vector<std::filesystem::path> cmd_sweep(const BenchConfig& config);

}  // namespace homomorph::bench
