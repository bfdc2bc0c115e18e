#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>

#include "format.hpp"
#include "homomorph/bench.hpp"
#include "homomorph/error.hpp"

namespace homomorph::bench {

namespace detail {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto piece = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!piece.empty()) {
            out.push_back(piece);
        }
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

}  // namespace detail

namespace {

using detail::num;

double parse_double(const std::string& key, const std::string& text)
{
    if (text == "inf" || text == "+inf") {
        return std::numeric_limits<double>::infinity();
    }
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) {
        throw InvalidConfig("bad number for '" + key + "': '" + text + "'");
    }
    return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& text)
{
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw InvalidConfig("bad non-negative integer for '" + key + "': '" + text + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw InvalidConfig("bad boolean for '" + key + "': '" + text + "'");
}

std::optional<double> parse_snr(const std::string& key, const std::string& text)
{
    if (text == "none" || text == "inf" || text == "+inf") {
        return std::nullopt;
    }
    return parse_double(key, text);
}

std::string snr_text(const std::optional<double>& snr) { return snr ? num(*snr) : "none"; }
std::string size_text(std::size_t v) { return std::to_string(v); }
std::string method_text(unwrap::Method m) { return std::string(unwrap::label(m)); }

template <typename T, typename F>
std::vector<T> parse_list(const std::string& key, const std::string& text, F&& one)
{
    std::vector<T> out;
    for (const auto& item : detail::split_list(text)) {
        out.push_back(one(key, item));
    }
    if (out.empty()) {
        throw InvalidConfig("empty list for '" + key + "'");
    }
    return out;
}

std::size_t parse_size(const std::string& key, const std::string& text)
{
    return static_cast<std::size_t>(parse_uint(key, text));
}

unwrap::Method parse_method_checked(const std::string& key, const std::string& text)
{
    auto m = unwrap::parse_method(text);
    if (!m) {
        throw InvalidConfig("unknown method in '" + key + "': '" + text + "' (expected PU-M, PU-K, PU-F, PU-S)");
    }
    return *m;
}

using Setter = std::function<void(BenchConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"scenario", [](BenchConfig& c, const std::string&, const std::string& v) { c.scenario = v; }},
        {"n_samples", [](BenchConfig& c, const std::string& k, const std::string& v) { c.synth.n_samples = parse_size(k, v); }},
        {"total_length_s", [](BenchConfig& c, const std::string& k, const std::string& v) { c.synth.total_length = parse_double(k, v); }},
        {"ricker_f0_hz", [](BenchConfig& c, const std::string& k, const std::string& v) {
             c.synth.ricker_f0 = parse_double(k, v);
             c.gather.ricker_f0 = c.synth.ricker_f0;
         }},
        {"rotation_deg", [](BenchConfig& c, const std::string& k, const std::string& v) { c.synth.rotation_deg = parse_double(k, v); }},
        {"shift_ms", [](BenchConfig& c, const std::string& k, const std::string& v) { c.synth.shift_s = parse_double(k, v) * 1e-3; }},
        {"snr_db", [](BenchConfig& c, const std::string& k, const std::string& v) {
             c.synth.snr_db = parse_snr(k, v);
             c.gather.snr_db = c.synth.snr_db;
         }},
        {"seed", [](BenchConfig& c, const std::string& k, const std::string& v) { c.set_seed(parse_uint(k, v)); }},
        {"n_values", [](BenchConfig& c, const std::string& k, const std::string& v) { c.n_values = parse_list<std::size_t>(k, v, parse_size); }},
        {"shifts_ms", [](BenchConfig& c, const std::string& k, const std::string& v) { c.shifts_ms = parse_list<double>(k, v, parse_double); }},
        {"methods", [](BenchConfig& c, const std::string& k, const std::string& v) { c.methods = parse_list<unwrap::Method>(k, v, parse_method_checked); }},
        {"reps", [](BenchConfig& c, const std::string& k, const std::string& v) { c.reps = parse_size(k, v); }},
        {"out", [](BenchConfig& c, const std::string&, const std::string& v) { c.out_dir = v; }},
        {"nfft", [](BenchConfig& c, const std::string& k, const std::string& v) { c.nfft = parse_size(k, v); }},
        {"trace", [](BenchConfig& c, const std::string&, const std::string& v) { c.trace_path = v; }},
        {"n_traces", [](BenchConfig& c, const std::string& k, const std::string& v) { c.gather.n_traces = parse_size(k, v); }},
        {"gather_n_samples", [](BenchConfig& c, const std::string& k, const std::string& v) { c.gather.n_samples = parse_size(k, v); }},
        {"gather_dt_s", [](BenchConfig& c, const std::string& k, const std::string& v) { c.gather.dt = parse_double(k, v); }},
        {"wavelet_half_length_s", [](BenchConfig& c, const std::string& k, const std::string& v) { c.gather.wavelet_half_length_s = parse_double(k, v); }},
        {"spike_density", [](BenchConfig& c, const std::string& k, const std::string& v) { c.gather.spike_density = parse_double(k, v); }},
        {"pure_wavelet", [](BenchConfig& c, const std::string& k, const std::string& v) { c.pure_wavelet = parse_bool(k, v); }},
        {"support_s", [](BenchConfig& c, const std::string& k, const std::string& v) { c.support_s = parse_double(k, v); }},
        {"pad_factor", [](BenchConfig& c, const std::string& k, const std::string& v) { c.pad_factor = parse_size(k, v); }},
        {"workers", [](BenchConfig& c, const std::string& k, const std::string& v) { c.workers = parse_size(k, v); }},
        {"sweep_n_samples", [](BenchConfig& c, const std::string& k, const std::string& v) { c.sweep_n_samples = parse_list<std::size_t>(k, v, parse_size); }},
        {"sweep_snr_db", [](BenchConfig& c, const std::string& k, const std::string& v) { c.sweep_snr_db = parse_list<double>(k, v, parse_double); }},
    };
    return table;
}

}  // namespace

void BenchConfig::validate() const
{
    synth.validate();
    if (methods.empty()) {
        throw InvalidConfig("methods must not be empty");
    }
    if (reps < 3) {
        throw InvalidConfig("reps must be at least 3, got " + std::to_string(reps));
    }
    if (n_values.empty()) {
        throw InvalidConfig("n_values must not be empty");
    }
    for (std::size_t n : n_values) {
        synth::SynthConfig s = synth;
        s.n_samples = n;
        s.validate();
    }
    gather.validate();
    if (!(support_s > 0.0)) {
        throw InvalidConfig("support_s must be positive");
    }
    if (pad_factor == 0 || workers == 0) {
        throw InvalidConfig("pad_factor and workers must be at least 1");
    }
}

void apply_setting(BenchConfig& config, const std::string& key, const std::string& value)
{
    const auto k = detail::trim(key);
    const auto it = setters().find(k);
    if (it == setters().end()) {
        throw InvalidConfig("unknown config key '" + k + "'");
    }
    it->second(config, k, detail::trim(value));
}

void load_config_file(BenchConfig& config, const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidConfig("cannot open config file " + path.string());
    }
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        if (detail::trim(line).empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidConfig(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        }
        try {
            apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
        } catch (const InvalidConfig& e) {
            throw InvalidConfig(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

std::vector<std::pair<std::string, std::string>> resolved_settings(const BenchConfig& c)
{
    return {
        {"scenario", c.scenario},
        {"n_samples", std::to_string(c.synth.n_samples)},
        {"total_length_s", num(c.synth.total_length)},
        {"ricker_f0_hz", num(c.synth.ricker_f0)},
        {"rotation_deg", num(c.synth.rotation_deg)},
        {"shift_ms", num(c.synth.shift_s * 1e3)},
        {"snr_db", snr_text(c.synth.snr_db)},
        {"seed", std::to_string(c.synth.rng_seed)},
        {"n_values", detail::join<std::size_t>(c.n_values, size_text)},
        {"shifts_ms", detail::join<double>(c.shifts_ms, num)},
        {"methods", detail::join<unwrap::Method>(c.methods, method_text)},
        {"reps", std::to_string(c.reps)},
        {"out", c.out_dir.string()},
        {"nfft", std::to_string(c.nfft)},
        {"trace", c.trace_path.string()},
        {"n_traces", std::to_string(c.gather.n_traces)},
        {"gather_n_samples", std::to_string(c.gather.n_samples)},
        {"gather_dt_s", num(c.gather.dt)},
        {"wavelet_half_length_s", num(c.gather.wavelet_half_length_s)},
        {"spike_density", num(c.gather.spike_density)},
        {"pure_wavelet", c.pure_wavelet ? "true" : "false"},
        {"support_s", num(c.support_s)},
        {"pad_factor", std::to_string(c.pad_factor)},
        {"workers", std::to_string(c.workers)},
        {"sweep_n_samples", detail::join<std::size_t>(c.sweep_n_samples, size_text)},
        {"sweep_snr_db", detail::join<double>(c.sweep_snr_db, num)},
    };
}

}  // namespace homomorph::bench
