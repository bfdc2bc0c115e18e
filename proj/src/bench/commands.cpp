#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "format.hpp"
#include "homomorph/bench.hpp"
#include "homomorph/error.hpp"
#include "homomorph/spectral.hpp"

namespace homomorph::bench {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using detail::num;

namespace {

constexpr double kPi = std::numbers::pi;

std::string tag(unwrap::Method m)
{
    std::string s(unwrap::label(m));
    std::transform(s.begin(), s.end(), s.begin(), [](char ch) { return ch == '-' ? '_' : ch; });
    return s;
}

json config_json(const BenchConfig& c)
{
    json j = json::object();
    for (const auto& [k, v] : resolved_settings(c)) {
        j[k] = v;
    }
    return j;
}

std::ofstream open_out(const fs::path& path)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    return out;
}

void write_header(std::ostream& out, const BenchConfig& c)
{
    for (const auto& [k, v] : resolved_settings(c)) {
        out << "# " << k << '=' << v << '\n';
    }
}

void write_json(const fs::path& path, const json& j)
{
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

synth::SynthConfig scenario_at(const BenchConfig& c, std::size_t n)
{
    synth::SynthConfig s = c.synth;
    s.n_samples = n;
    s.validate();
    return s;
}

MethodResult evaluate(const unwrap::UnwrapInput& input, unwrap::Method m, double t0)
{
    MethodResult r;
    r.method = m;
    try {
        const auto rep = unwrap::run_method(input, m);
        r.ok = true;
        r.phi0_deg = rep.fit.phi0_deg;
        r.tau_ms = (rep.fit.tau_s - t0) * 1e3;
    } catch (const Error& e) {
        r.error = e.what();
    }
    return r;
}

json method_json(const MethodResult& r)
{
    json j;
    j["method"] = std::string(unwrap::label(r.method));
    j["status"] = r.ok ? "ok" : "failed";
    if (r.ok) {
        j["phi0_deg"] = r.phi0_deg;
        j["tau_ms"] = r.tau_ms;
    } else {
        j["error"] = r.error;
    }
    if (r.wall_time_s) {
        j["wall_time_s"] = *r.wall_time_s;
    }
    return j;
}

/// Phase CSV: frequency_hz, wrapped_rad, unwrapped_<name>_rad..., mask.
void write_phase_csv(const fs::path& path, const BenchConfig& c, const spectral::Spectrum& s,
                     const spectral::PhaseCurve& wrapped, const std::vector<std::uint8_t>& mask,
                     const std::vector<std::pair<std::string, const spectral::PhaseCurve*>>& curves)
{
    auto out = open_out(path);
    write_header(out, c);
    out << "frequency_hz,wrapped_rad";
    for (const auto& [name, curve] : curves) {
        out << ",unwrapped_" << name << "_rad";
    }
    out << ",mask\n";
    for (std::size_t k = 0; k < s.size(); ++k) {
        out << num(s.frequency(k)) << ',' << num(wrapped.values[k]);
        for (const auto& [name, curve] : curves) {
            out << ',' << (curve ? num(curve->values[k]) : std::string("nan"));
        }
        out << ',' << int(mask[k]) << '\n';
    }
}

std::string shift_name(double ms)
{
    std::string s = num(ms);
    std::replace(s.begin(), s.end(), '.', 'p');
    std::replace(s.begin(), s.end(), '-', 'm');
    return s;
}

}  // namespace

Trace read_trace_csv(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidConfig("cannot open trace file " + path.string());
    }
    std::vector<double> t;
    std::vector<double> x;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = detail::trim(line);
        if (body.empty() || body[0] == '#') {
            continue;
        }
        const auto cols = detail::split_list(body);
        if (cols.size() != 2) {
            throw Error(path.string() + ":" + std::to_string(lineno) + ": expected two columns");
        }
        if (t.empty() && x.empty() && cols[0] == "time_s") {
            continue;
        }
        try {
            std::size_t used0 = 0;
            std::size_t used1 = 0;
            const double tv = std::stod(cols[0], &used0);
            const double xv = std::stod(cols[1], &used1);
            if (used0 != cols[0].size() || used1 != cols[1].size()) {
                throw std::invalid_argument("trailing text");
            }
            t.push_back(tv);
            x.push_back(xv);
        } catch (const std::exception&) {
            throw Error(path.string() + ":" + std::to_string(lineno) + ": unparsable sample");
        }
    }
    if (x.size() < 2) {
        throw Error(path.string() + ": need at least two samples");
    }
    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (std::abs((t[i] - t[i - 1]) - dt) > 1e-6 * std::abs(dt)) {
            throw Error(path.string() + ": samples are not uniformly spaced");
        }
    }
    return Trace(std::move(x), dt, t.front());
}

void write_trace_csv(const fs::path& path, const Trace& trace, const BenchConfig& config)
{
    auto out = open_out(path);
    write_header(out, config);
    out << "time_s,amplitude\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out << num(trace.time(i)) << ',' << num(trace[i]) << '\n';
    }
}

std::vector<ResultRow> table1_rows(const BenchConfig& config)
{
    std::vector<ResultRow> rows;
    for (std::size_t n : config.n_values) {
        const auto sc = scenario_at(config, n);
        const auto input = unwrap::UnwrapInput::from_trace(synth::scenario_trace(sc));
        ResultRow row;
        row.n_samples = n;
        row.ground_truth_deg = sc.rotation_deg;
        row.ground_truth_tau_ms = sc.shift_s * 1e3;
        row.seed = sc.rng_seed;
        for (auto m : config.methods) {
            row.methods.push_back(evaluate(input, m, sc.t0()));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ResultRow table1_timing(const BenchConfig& config, std::size_t n_samples)
{
    if (config.reps < 3) {
        throw InvalidConfig("timing needs at least 3 repetitions");
    }
    const auto sc = scenario_at(config, n_samples);
    const auto input = unwrap::UnwrapInput::from_trace(synth::scenario_trace(sc));
    ResultRow row;
    row.n_samples = n_samples;
    row.ground_truth_deg = sc.rotation_deg;
    row.ground_truth_tau_ms = sc.shift_s * 1e3;
    row.seed = sc.rng_seed;
    for (auto m : config.methods) {
        MethodResult r = evaluate(input, m, sc.t0());  // warm-up, discarded timing
        if (r.ok) {
            std::vector<double> times;
            for (std::size_t i = 0; i < config.reps; ++i) {
                times.push_back(unwrap::run_method(input, m).wall_time_s);
            }
            std::sort(times.begin(), times.end());
            const std::size_t mid = times.size() / 2;
            r.wall_time_s = times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
        }
        row.methods.push_back(std::move(r));
    }
    return row;
}

std::vector<fs::path> cmd_synth(const BenchConfig& config)
{
    config.validate();
    std::vector<fs::path> written;
    json report;
    report["config"] = config_json(config);
    report["shifts"] = json::array();
    for (double ms : config.shifts_ms) {
        synth::SynthConfig sc = config.synth;
        sc.shift_s = ms * 1e-3;
        sc.validate();
        const Trace x = synth::scenario_trace(sc);
        const std::string stem = "synth_shift" + shift_name(ms) + "ms";
        written.push_back(config.out_dir / (stem + "_trace.csv"));
        write_trace_csv(written.back(), x, config);

        const auto input = unwrap::UnwrapInput::from_trace(x, config.nfft);
        const auto wrapped = spectral::wrapped_phase(input.spectrum);
        spectral::PhaseCurve ideal;
        ideal.kind = spectral::PhaseKind::unwrapped;
        for (std::size_t k = 0; k < input.spectrum.size(); ++k) {
            const double f = input.spectrum.frequency(k);
            ideal.values.push_back(-sc.rotation_deg * kPi / 180.0 - 2.0 * kPi * f * (sc.t0() + sc.shift_s));
        }
        const auto jumps = unwrap::unwrap_jump(wrapped, input.mask);
        std::int64_t corrections = 0;
        for (std::size_t k = 1; k < jumps.wrap_counts.size(); ++k) {
            corrections += std::abs(jumps.wrap_counts[k] - jumps.wrap_counts[k - 1]);
        }
        written.push_back(config.out_dir / (stem + "_phase.csv"));
        write_phase_csv(written.back(), config, input.spectrum, wrapped, input.mask, {{"ideal", &ideal}});

        json entry;
        entry["shift_ms"] = ms;
        entry["trace_file"] = (stem + "_trace.csv");
        entry["phase_file"] = (stem + "_phase.csv");
        entry["jump_corrections"] = corrections;
        entry["methods"] = json::array();
        for (auto m : config.methods) {
            entry["methods"].push_back(method_json(evaluate(input, m, sc.t0())));
        }
        report["shifts"].push_back(std::move(entry));
    }
    written.push_back(config.out_dir / "synth.json");
    write_json(written.back(), report);
    return written;
}

std::vector<fs::path> cmd_unwrap(const BenchConfig& config)
{
    config.validate();
    if (config.trace_path.empty()) {
        throw InvalidConfig("unwrap needs a trace file");
    }
    const Trace x = read_trace_csv(config.trace_path);
    const auto input = unwrap::UnwrapInput::from_trace(x, config.nfft);
    const auto wrapped = spectral::wrapped_phase(input.spectrum);
    std::vector<unwrap::UnwrapReport> reports;
    std::vector<std::string> failures;
    json report;
    report["config"] = config_json(config);
    report["trace_file"] = config.trace_path.string();
    report["n_time"] = input.spectrum.n_time;
    report["dt_s"] = x.dt();
    report["t_start_s"] = x.t_start();
    report["methods"] = json::array();
    for (auto m : config.methods) {
        try {
            reports.push_back(unwrap::run_method(input, m));
            const auto& f = reports.back().fit;
            json j;
            j["method"] = std::string(unwrap::label(m));
            j["status"] = "ok";
            j["phi0_deg"] = f.phi0_deg;
            j["tau_s"] = f.tau_s;
            j["intercept_rad"] = f.intercept_rad;
            j["slope_rad_per_hz"] = f.slope_rad_per_hz;
            j["fit_band_hz"] = {f.f_lo, f.f_hi};
            j["fit_bins"] = f.n_bins;
            j["residual_rms_rad"] = f.residual_rms;
            j["flagged_bins"] = reports.back().curve.flagged_count();
            report["methods"].push_back(std::move(j));
        } catch (const Error& e) {
            failures.push_back(std::string(unwrap::label(m)) + ": " + e.what());
        }
    }
    if (!failures.empty()) {
        std::string msg = "unwrapping failed";
        for (const auto& f : failures) {
            msg += "\n  " + f;
        }
        throw Error(msg);
    }
    const std::string stem = config.trace_path.stem().string();
    std::vector<std::pair<std::string, const spectral::PhaseCurve*>> curves;
    for (const auto& r : reports) {
        curves.emplace_back(tag(r.method), &r.curve);
    }
    std::vector<fs::path> written{config.out_dir / (stem + "_unwrap.csv"), config.out_dir / (stem + "_unwrap.json")};
    write_phase_csv(written[0], config, input.spectrum, wrapped, input.mask, curves);
    write_json(written[1], report);
    return written;
}

std::vector<fs::path> cmd_table1(const BenchConfig& config)
{
    config.validate();
    const auto rows = table1_rows(config);
    const std::size_t n_max = *std::max_element(config.n_values.begin(), config.n_values.end());
    const auto timing = table1_timing(config, n_max);

    std::vector<fs::path> written{config.out_dir / "table1.csv", config.out_dir / "table1.json",
                                  config.out_dir / "table1_timing.csv", config.out_dir / "table1_timing.json"};
    {
        auto out = open_out(written[0]);
        write_header(out, config);
        out << "n_samples,ground_truth_deg,ground_truth_tau_ms";
        for (auto m : config.methods) {
            out << ",phi0_deg_" << tag(m) << ",tau_ms_" << tag(m) << ",status_" << tag(m);
        }
        out << ",seed\n";
        for (const auto& row : rows) {
            out << row.n_samples << ',' << num(row.ground_truth_deg) << ',' << num(row.ground_truth_tau_ms);
            for (const auto& r : row.methods) {
                if (r.ok) {
                    out << ',' << num(r.phi0_deg) << ',' << num(r.tau_ms) << ",ok";
                } else {
                    out << ",,,failed";
                }
            }
            out << ',' << row.seed << '\n';
        }
    }
    {
        json j;
        j["config"] = config_json(config);
        j["rows"] = json::array();
        for (const auto& row : rows) {
            json jr;
            jr["n_samples"] = row.n_samples;
            jr["ground_truth_deg"] = row.ground_truth_deg;
            jr["ground_truth_tau_ms"] = row.ground_truth_tau_ms;
            jr["seed"] = row.seed;
            jr["methods"] = json::array();
            for (const auto& r : row.methods) {
                jr["methods"].push_back(method_json(r));
            }
            j["rows"].push_back(std::move(jr));
        }
        write_json(written[1], j);
    }
    {
        auto out = open_out(written[2]);
        write_header(out, config);
        out << "n_samples,method,wall_time_s,reps,status\n";
        for (const auto& r : timing.methods) {
            out << timing.n_samples << ',' << unwrap::label(r.method) << ','
                << (r.wall_time_s ? num(*r.wall_time_s) : std::string()) << ',' << config.reps << ','
                << (r.ok ? "ok" : "failed") << '\n';
        }
    }
    {
        json j;
        j["config"] = config_json(config);
        j["n_samples"] = timing.n_samples;
        j["reps"] = config.reps;
        j["protocol"] = "one discarded warm-up, median of reps, single thread, unwrap plus fit";
        j["methods"] = json::array();
        for (const auto& r : timing.methods) {
            j["methods"].push_back(method_json(r));
        }
        write_json(written[3], j);
    }
    return written;
}

std::vector<fs::path> cmd_estimate(const BenchConfig& config)
{
    config.validate();
    const auto& spec = config.gather;
    const Trace truth = spec.wavelet();
    waveletest::Gather gather = [&] {
        if (!config.pure_wavelet) {
            return waveletest::make_synthetic_gather(spec);
        }
        std::vector<double> x(spec.n_samples, 0.0);
        std::copy(truth.vector().begin(), truth.vector().end(), x.begin());
        return waveletest::Gather({Trace(std::move(x), spec.dt)}, spec.seed, "pure wavelet");
    }();
    waveletest::AverageOptions opts;
    opts.pad_factor = config.pad_factor;
    opts.workers = config.workers;

    std::vector<fs::path> written;
    json report;
    report["config"] = config_json(config);
    report["n_traces"] = gather.size();
    report["estimates"] = json::array();
    for (auto m : config.methods) {
        const auto est = waveletest::estimate_wavelet(gather, m, config.support_s, opts);
        const double corr = waveletest::normalized_xcorr_max(est.wavelet, truth);
        const std::string stem = "estimate_" + tag(m);
        written.push_back(config.out_dir / (stem + "_wavelet.csv"));
        {
            auto out = open_out(written.back());
            write_header(out, config);
            out << "time_s,estimated,true\n";
            const auto half = static_cast<long>(truth.size() / 2);
            const auto q = static_cast<long>(est.wavelet.size() / 2);
            for (std::size_t i = 0; i < est.wavelet.size(); ++i) {
                const long j = static_cast<long>(i) - q + half;
                const double tv = (j >= 0 && j < static_cast<long>(truth.size())) ? truth[static_cast<std::size_t>(j)] : 0.0;
                out << num(est.wavelet.time(i)) << ',' << num(est.wavelet[i]) << ',' << num(tv) << '\n';
            }
        }
        json j;
        j["method"] = std::string(unwrap::label(m));
        j["wavelet_file"] = stem + "_wavelet.csv";
        j["correlation"] = corr;
        j["n_traces_used"] = est.n_traces_used;
        j["failed_trace_ids"] = est.failed_trace_ids;
        j["failure_messages"] = est.failure_messages;
        report["estimates"].push_back(std::move(j));
    }
    written.push_back(config.out_dir / "estimate.json");
    write_json(written.back(), report);
    return written;
}

std::vector<fs::path> cmd_sweep(const BenchConfig& config)
{
    config.validate();
    std::vector<fs::path> written{config.out_dir / "sweep.csv", config.out_dir / "sweep.json"};
    auto out = open_out(written[0]);
    write_header(out, config);
    out << "n_samples,snr_db,method,phi0_deg,tau_ms,phi0_error_deg,tau_error_ms,status\n";
    json j;
    j["config"] = config_json(config);
    j["cells"] = json::array();
    for (std::size_t n : config.sweep_n_samples) {
        for (double snr : config.sweep_snr_db) {
            synth::SynthConfig sc = scenario_at(config, n);
            if (std::isinf(snr)) {
                sc.snr_db.reset();
            } else {
                sc.snr_db = snr;
            }
            const auto input = unwrap::UnwrapInput::from_trace(synth::scenario_trace(sc));
            for (auto m : config.methods) {
                const auto r = evaluate(input, m, sc.t0());
                double err = r.phi0_deg - sc.rotation_deg;
                err -= 360.0 * std::floor((err + 180.0) / 360.0);
                const double tau_err = r.tau_ms - sc.shift_s * 1e3;
                out << n << ',' << num(snr) << ',' << unwrap::label(m) << ',';
                if (r.ok) {
                    out << num(r.phi0_deg) << ',' << num(r.tau_ms) << ',' << num(err) << ',' << num(tau_err) << ",ok\n";
                } else {
                    out << ",,,,failed\n";
                }
                json cell = method_json(r);
                cell["n_samples"] = n;
                cell["snr_db"] = snr;
                if (r.ok) {
                    cell["phi0_error_deg"] = err;
                    cell["tau_error_ms"] = tau_err;
                }
                j["cells"].push_back(std::move(cell));
            }
        }
    }
    write_json(written[1], j);
    return written;
}

}  // namespace homomorph::bench
