// cesaro: command-line runner for partition, SLLN and oracle experiments.

#include "cesaro/errors.hpp"
#include "cesaro/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

using namespace cesaro;

namespace {

struct Flags {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    std::string mode;
    unsigned jobs = 1;
    std::string eps_grid;
};

std::vector<double> parse_eps_list(const std::string& text) {
    std::vector<double> eps;
    std::stringstream in(text);
    std::string piece;
    while (std::getline(in, piece, ',')) {
        try {
            std::size_t used = 0;
            eps.push_back(std::stod(piece, &used));
            if (used != piece.size()) throw std::invalid_argument(piece);
        } catch (const std::exception&) {
            throw ConfigError("--eps-grid: cannot parse '" + piece + "'");
        }
    }
    return eps;
}

Overrides overrides_from(const Flags& flags, const CLI::App& sub) {
    Overrides o;
    if (sub.count("--seed")) o.seed = flags.seed;
    if (!flags.mode.empty()) o.mode = parse_mode(flags.mode);
    if (!flags.eps_grid.empty()) o.eps_grid = parse_eps_list(flags.eps_grid);
    if (!flags.out.empty()) o.out = flags.out;
    return o;
}

void add_common(CLI::App* sub, Flags& flags, bool needs_config) {
    auto* config = sub->add_option("--config", flags.config, needs_config ? "experiment config (JSON)" : "config directory");
    config->required();
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--seed", flags.seed, "master seed (overrides the config)");
    sub->add_option("--mode", flags.mode, "exact | heuristic")->check(CLI::IsMember({"exact", "heuristic"}));
    sub->add_option("--jobs", flags.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--eps-grid", flags.eps_grid, "comma-separated epsilon levels, e.g. 0.5,0.1,0.01");
}

int run_single(const std::string& command, const Flags& flags, const CLI::App& sub) {
    auto config = load_config(flags.config);
    apply(config, overrides_from(flags, sub));
    if (command != "oracle" && config.command != command)
        throw ConfigError(flags.config + ": config is for '" + config.command + "', not '" + command + "'");
    RunOptions options;
    options.jobs = flags.jobs;
    const auto report = command == "oracle" ? run_oracle(config, options) : run(config, options);
    std::cout << report.to_json().dump(2) << '\n';
    for (const auto& line : report.narrative) std::cerr << "  " << line << '\n';
    std::cerr << (report.passed() ? "PASS" : "FAIL") << '\n';
    return static_cast<int>(report.passed() ? ExitCode::Pass : ExitCode::VerificationFailure);
}

int run_suite_command(const Flags& flags, const CLI::App& sub) {
    RunOptions options;
    options.jobs = flags.jobs;
    const auto suite = run_suite(flags.config, overrides_from(flags, sub), options);
    for (const auto& w : suite.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& e : suite.entries) {
        std::cerr << (e.passed ? "PASS " : "FAIL ") << e.file;
        if (!e.error.empty()) std::cerr << "  (" << e.error << ")";
        std::cerr << '\n';
    }
    std::cout << suite.to_json().dump(2) << '\n';
    return static_cast<int>(suite.exit_code());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cesaro means on atomic probability spaces"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    Flags flags;
    auto* partition = app.add_subcommand("partition", "bounded/unbounded partition, certificate and limit checks");
    auto* slln = app.add_subcommand("slln", "generate paths and check the SLLN regime");
    auto* suite = app.add_subcommand("suite", "run every config in a directory");
    auto* oracle = app.add_subcommand("oracle", "compare the decision procedure with the brute-force oracle");
    add_common(partition, flags, true);
    add_common(slln, flags, true);
    add_common(suite, flags, false);
    add_common(oracle, flags, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitCode::ConfigError);
    }

    try {
        if (*suite) return run_suite_command(flags, *suite);
        if (*partition) return run_single("partition", flags, *partition);
        if (*slln) return run_single("slln", flags, *slln);
        return run_single("oracle", flags, *oracle);
    } catch (const StageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.code());
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::ConfigError);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::ConfigError);
    }
}
