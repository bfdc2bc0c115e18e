// homomorph: phase-unwrapping benchmarks and homomorphic wavelet estimation.
//
//   homomorph table1   --out out/           Table 1 accuracy + timing
//   homomorph synth    --out out/           shifted-Ricker traces and phase curves
//   homomorph unwrap   out/trace.csv        unwrap a two-column trace file
//   homomorph estimate --methods PU-K       wavelet estimate from a synthetic gather
//   homomorph sweep                         noise / sample-count grid
//
// Exit status: 0 success, 1 config error, 2 runtime failure.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "homomorph/bench.hpp"
#include "homomorph/error.hpp"

namespace hb = homomorph::bench;

namespace {

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string methods;
    std::string out;
    std::optional<std::size_t> reps;
    std::vector<std::string> sets;
    std::string trace;
};

void add_common(CLI::App* sub, CommonFlags& f)
{
    sub->add_option("--config", f.config, "flat key = value config file");
    sub->add_option("--seed", f.seed, "RNG seed");
    sub->add_option("--methods", f.methods, "comma list of PU-M, PU-K, PU-F, PU-S");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--reps", f.reps, "timing repetitions (>= 3)");
    sub->add_option("--set", f.sets, "extra key=value override, repeatable");
}

hb::BenchConfig resolve(const CommonFlags& f, const std::string& scenario)
{
    hb::BenchConfig c;
    c.scenario = scenario;
    if (!f.config.empty()) {
        hb::load_config_file(c, f.config);
    }
    for (const auto& s : f.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw homomorph::InvalidConfig("--set expects key=value, got '" + s + "'");
        }
        hb::apply_setting(c, s.substr(0, eq), s.substr(eq + 1));
    }
    if (f.seed) c.set_seed(*f.seed);
    if (!f.methods.empty()) hb::apply_setting(c, "methods", f.methods);
    if (!f.out.empty()) c.out_dir = f.out;
    if (f.reps) c.reps = *f.reps;
    if (!f.trace.empty()) c.trace_path = f.trace;
    c.validate();
    return c;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Phase unwrapping benchmarks and homomorphic wavelet estimation"};
    app.require_subcommand(1);

    using Command = std::vector<std::filesystem::path> (*)(const hb::BenchConfig&);
    const std::map<std::string, std::pair<std::string, Command>> commands = {
        {"synth", {"write shifted Ricker traces and their phase curves", hb::cmd_synth}},
        {"unwrap", {"unwrap the phase of a trace file", hb::cmd_unwrap}},
        {"table1", {"accuracy and timing table for the rotated, shifted Ricker", hb::cmd_table1}},
        {"estimate", {"estimate a wavelet from a synthetic gather", hb::cmd_estimate}},
        {"sweep", {"noise and sample-count grid", hb::cmd_sweep}},
    };
    std::map<std::string, CommonFlags> flags;
    for (const auto& [name, entry] : commands) {
        auto* sub = app.add_subcommand(name, entry.first);
        add_common(sub, flags[name]);
        if (name == "unwrap") {
            sub->add_option("trace", flags[name].trace, "two-column CSV trace (time_s, amplitude)");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    hb::BenchConfig config;
    try {
        config = resolve(flags.at(name), name);
    } catch (const homomorph::InvalidConfig& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
    try {
        for (const auto& p : commands.at(name).second(config)) {
            std::cout << p.string() << '\n';
        }
    } catch (const homomorph::InvalidConfig& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << name << " failed: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
