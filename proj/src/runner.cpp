#include "cesaro/runner.hpp"
#include "cesaro/corollaries.hpp"
#include "cesaro/errors.hpp"
#include "cesaro/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

namespace cesaro {

void apply(ExperimentConfig& config, const Overrides& overrides) {
    if (overrides.seed) config.seed = *overrides.seed;
    if (overrides.mode) config.mode = *overrides.mode;
    if (overrides.eps_grid) {
        for (double e : *overrides.eps_grid) {
            if (!(e > 0 && e < 1)) throw ConfigError("--eps-grid: epsilon must lie in (0,1)");
        }
        if (overrides.eps_grid->empty()) throw ConfigError("--eps-grid: must not be empty");
        config.tolerances.eps_grid = *overrides.eps_grid;
    }
    if (overrides.out) config.output = std::filesystem::absolute(*overrides.out).string();
}

//==============================================================================
// RunReport
//==============================================================================

bool RunReport::passed() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

Json RunReport::verdict_section() const {
    Json list = Json::array();
    for (const auto& v : verdicts) {
        list.push_back(Json{{"name", v.name},
                            {"pass", v.pass},
                            {"provenance", v.provenance},
                            {"parameters", v.parameters},
                            {"detail", v.detail}});
    }
    return Json{{"passed", passed()}, {"verdicts", list}};
}

Json RunReport::to_json(bool with_timings) const {
    Json out{{"tool_version", kToolVersion},
             {"command", command},
             {"seed", seed},
             {"config", config},
             {"verdict", verdict_section()},
             {"results", results},
             {"narrative", narrative}};
    if (with_timings) out["timings"] = timings;
    return out;
}

//==============================================================================
// Stages
//==============================================================================

namespace {

template <class F>
auto stage(RunReport& report, const char* name, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    auto record = [&] {
        report.timings[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    try {
        auto result = body();
        record();
        return result;
    } catch (const StageError&) {
        throw;
    } catch (const ConfigError& e) {
        throw StageError(name, e.what(), ExitCode::ConfigError);
    } catch (const SpecError& e) {
        throw StageError(name, e.what(), ExitCode::ConfigError);
    } catch (const StructuralError& e) {
        throw StageError(name, e.what(), ExitCode::ConfigError);
    } catch (const std::filesystem::filesystem_error& e) {
        throw StageError(name, e.what(), ExitCode::ConfigError);
    } catch (const std::exception& e) {
        throw StageError(name, e.what(), ExitCode::VerificationFailure);
    }
}

std::string set_text(const AtomSet& atoms) {
    std::string s = "{";
    for (std::size_t i = 0; i < atoms.size(); ++i) s += (i ? "," : "") + std::to_string(atoms[i].value);
    return s + "}";
}

std::string provenance_of(const Partition& a, const Partition& b) {
    return a.provenance == Provenance::Heuristic || b.provenance == Provenance::Heuristic ? "heuristic" : "exact";
}

Json limit_parameters(const LimitParams& params, std::size_t window_length) {
    return Json{{"tol", params.tol},
                {"stability_span", params.span_for(window_length)},
                {"growth_factor", params.growth.factor},
                {"growth_span_blocks", params.growth.span_blocks}};
}

std::filesystem::path output_dir(const ExperimentConfig& config) {
    const std::filesystem::path out(config.output);
    return out.is_absolute() || config.base_dir.empty() ? out : config.base_dir / out;
}

SequenceWindow build_window(const ExperimentConfig& config, const CoefficientFamily& family, const AtomicSpace& space,
                            const LimitParams& params, Json& info) {
    const auto& spec = *config.window;
    switch (spec.kind) {
    case WindowSpec::Kind::Horizon:
        info = Json{{"kind", "horizon"}, {"length", spec.horizon}};
        return SequenceWindow::prefix(family, spec.horizon, space);
    case WindowSpec::Kind::Indices:
        info = Json{{"kind", "indices"}, {"length", spec.indices.size()}};
        return SequenceWindow(family, spec.indices, space);
    case WindowSpec::Kind::Komlos: break;
    }
    auto selection = komlos_select(family, space, spec.horizon, spec.block, params);
    info = Json{{"kind", "komlos"},
                {"length", selection.window.length()},
                {"identity", selection.identity},
                {"fallback", selection.fallback},
                {"first_index", selection.window.index(1)},
                {"last_index", selection.window.index(selection.window.length())}};
    return selection.window;
}

std::vector<SimpleRV> member_rvs(const SequenceWindow& window) {
    const auto values = evaluate_all(window);
    std::vector<SimpleRV> rvs;
    rvs.reserve(values.length());
    for (std::size_t k = 1; k <= values.length(); ++k) rvs.push_back(row_rv(values, k));
    return rvs;
}

void add_expectations(RunReport& report, const ExperimentConfig& config, const AtomSet* bounded,
                      const AtomSet* finite_set, const std::string* regime) {
    if (config.expect.bounded && bounded) {
        report.verdicts.push_back({"expect_J_b", *config.expect.bounded == *bounded, to_string(config.mode), Json::object(),
                                   Json{{"expected", to_json(*config.expect.bounded)}, {"actual", to_json(*bounded)}}});
    }
    if (config.expect.finite_set && finite_set) {
        report.verdicts.push_back({"expect_finite_set", *config.expect.finite_set == *finite_set, "exact",
                                   Json::object(),
                                   Json{{"expected", to_json(*config.expect.finite_set)}, {"actual", to_json(*finite_set)}}});
    }
    if (config.expect.regime && regime) {
        report.verdicts.push_back({"expect_regime", *config.expect.regime == *regime, "exact", Json::object(),
                                   Json{{"expected", *config.expect.regime}, {"actual", *regime}}});
    }
}

} // namespace

//==============================================================================
// partition
//==============================================================================

RunReport run_partition(const ExperimentConfig& config, const RunOptions& options) {
    RunReport report;
    report.command = "partition";
    report.seed = config.seed;
    report.config = to_json(config);
    if (config.command != "partition") throw StageError("config", "not a partition config", ExitCode::ConfigError);

    const auto params = build_limit_params(config);
    const auto space = stage(report, "space", [&] { return build_space(config); });
    const auto family = stage(report, "family", [&] { return build_family(config); });
    Json window_info;
    const auto window = stage(report, "window", [&] { return build_window(config, family, space, params, window_info); });
    report.results["window"] = window_info;

    const auto part = stage(report, "partition", [&] { return partition(window, config.mode, params.growth); });
    report.results["partition"] = to_json(part);
    report.narrative.push_back("J_b = " + set_text(part.bounded) + ", J_u = " + set_text(part.unbounded) + " (" +
                               to_string(part.provenance) + ")");

    const auto measure = stage(report, "measure", [&] { return build_equivalent_measure(space, part); });
    if (!part.bounded.empty()) {
        const auto cert = stage(report, "certificate", [&] { return certify_l1_bound(window, part, measure); });
        report.results["certificate"] = to_json(space, cert, config.seed);
        report.verdicts.push_back({"certificate", cert.checked_sup <= cert.l1_bound + 1e-9, to_string(part.provenance),
                                   Json{{"slack", 1e-9}},
                                   Json{{"checked_sup", number(cert.checked_sup)}, {"l1_bound", number(cert.l1_bound)}}});
        report.narrative.push_back("L1(Q) certificate: sup E_Q = " + number(cert.checked_sup).dump() +
                                   " <= bound " + number(cert.l1_bound).dump());
    } else {
        report.results["certificate"] = nullptr;
        report.narrative.push_back("J_b is empty; no certificate to build");
    }

    const auto prop = stage(report, "prop_main", [&] { return verify_prop_main(window, params, config.mode); });
    report.results["limit_profile"] = to_json(prop.profile);
    report.results["prop_main"] = to_json(prop);
    report.verdicts.push_back({"prop_main", prop.holds(),
                               provenance_of(prop.base_partition, prop.cesaro_partition),
                               limit_parameters(params, window.length()), to_json(prop)});
    report.narrative.push_back(std::string("finite set ") + set_text(prop.finite_set) +
                               (prop.holds() ? " matches" : " does not match") + " both bounded sets");

    ChainParams chain_params;
    chain_params.limits = params;
    chain_params.eps_grid = config.tolerances.eps_grid;
    chain_params.mode = config.mode;
    Json chain_parameters = limit_parameters(params, window.length());
    chain_parameters["eps_grid"] = config.tolerances.eps_grid;
    if (part.unbounded.empty() && !part.bounded.empty()) {
        const auto chain = stage(report, "cor_finite", [&] { return finite_limit_chain(window, chain_params); });
        report.results["cor_finite"] = to_json(chain);
        report.verdicts.push_back({"cor_finite", chain.consistent(), to_string(part.provenance), chain_parameters,
                                   Json{{"all_true", chain.all_true()}, {"broken_edges", chain.broken_edges()}}});
        report.narrative.push_back(chain.consistent() ? "finite-limit equivalences agree"
                                                      : "finite-limit equivalences disagree");
    } else if (part.bounded.empty()) {
        const auto chain = stage(report, "cor_infinite", [&] { return infinite_limit_chain(window, chain_params); });
        report.results["cor_infinite"] = to_json(chain);
        report.verdicts.push_back({"cor_infinite", chain.consistent(), to_string(part.provenance), chain_parameters,
                                   Json{{"all_true", chain.all_true()}, {"broken_edges", chain.broken_edges()}}});
        report.narrative.push_back(chain.consistent() ? "infinite-limit equivalences agree"
                                                      : "infinite-limit equivalences disagree");
    }
    add_expectations(report, config, &part.bounded, &prop.finite_set, nullptr);

    if (options.write_files && !config.output.empty()) {
        stage(report, "outputs", [&] {
            const auto dir = output_dir(config);
            std::ostringstream cesaro_csv, quantile_csv;
            write_trajectory_csv(cesaro_csv, space, cesaro_all(window));
            const auto members = member_rvs(window);
            write_quantile_csv(quantile_csv, tightness_check(members, space, config.tolerances.eps_grid));
            write_text(dir / "cesaro.csv", cesaro_csv.str());
            write_text(dir / "quantiles.csv", quantile_csv.str());
            write_text(dir / "report.json", report.to_json(false).dump(2) + "\n");
            return 0;
        });
    }
    return report;
}

//==============================================================================
// slln
//==============================================================================

RunReport run_slln(const ExperimentConfig& config, const RunOptions& options) {
    RunReport report;
    report.command = "slln";
    report.seed = config.seed;
    report.config = to_json(config);
    if (config.command != "slln") throw StageError("config", "not an slln config", ExitCode::ConfigError);

    const auto spec = stage(report, "generator", [&] { return build_generator(config); });
    const auto run = stage(report, "generate", [&] { return generate(spec, options.jobs); });
    report.narrative.push_back(spec.describe());

    RegimeParams params;
    params.limits = build_limit_params(config);
    params.eps_grid = config.tolerances.eps_grid;
    params.oracle.samples = config.oracle_samples;
    params.oracle.seed = config.seed;
    params.oracle.jobs = options.jobs;
    const auto regime = stage(report, "regime", [&] { return slln_regime_check(spec, run, params); });
    report.results["regime"] = to_json(regime);
    const bool holds =
        regime.verdict == RegimeVerdict::FiniteBranchHolds || regime.verdict == RegimeVerdict::InfiniteBranchHolds;
    report.verdicts.push_back({"prop_slln", holds, "heuristic",
                               Json{{"tol", params.limits.tol},
                                    {"majority", params.majority},
                                    {"eps_grid", params.eps_grid},
                                    {"grid_points", params.grid_points},
                                    {"oracle_samples", params.oracle.samples}},
                               Json{{"verdict", to_string(regime.verdict)}}});
    report.narrative.push_back("regime: " + to_string(regime.verdict) + " (" + std::to_string(regime.paths_finite) +
                               " finite, " + std::to_string(regime.paths_infinite) + " infinite, " +
                               std::to_string(regime.paths_no_limit) + " undecided paths)");

    std::vector<double> finals;
    for (std::size_t p = 0; p < run.paths; ++p) finals.push_back(run.final_cesaro(p));
    Json final_means = Json::array();
    for (double v : finals) final_means.push_back(number(v));
    report.results["final_cesaro"] = final_means;

    if (const auto* cv = std::get_if<CorrelatedVarianceKind>(&spec.kind); cv && run.paths >= 200) {
        const auto variance = stage(report, "variance", [&] { return verify_variance_condition(run, cv->c); });
        report.results["variance"] = to_json(variance);
        report.verdicts.push_back({"variance_condition", variance.holds, "heuristic",
                                   Json{{"c", variance.c}, {"slack", variance.slack}}, Json::object()});
    }
    const auto verdict_text = to_string(regime.verdict);
    add_expectations(report, config, nullptr, nullptr, &verdict_text);

    if (options.write_files && !config.output.empty()) {
        stage(report, "outputs", [&] {
            const auto dir = output_dir(config);
            std::ostringstream paths_csv;
            write_paths_csv(paths_csv, run);
            write_text(dir / "paths.csv", paths_csv.str());
            write_text(dir / "report.json", report.to_json(false).dump(2) + "\n");
            return 0;
        });
    }
    return report;
}

//==============================================================================
// oracle
//==============================================================================

RunReport run_oracle(const ExperimentConfig& config, const RunOptions& options) {
    RunReport report;
    report.command = "oracle";
    report.seed = config.seed;
    report.config = to_json(config);
    if (config.command != "partition") throw StageError("config", "oracle needs a partition config", ExitCode::ConfigError);

    const auto params = build_limit_params(config);
    const auto space = stage(report, "space", [&] { return build_space(config); });
    const auto family = stage(report, "family", [&] { return build_family(config); });
    Json window_info;
    const auto window = stage(report, "window", [&] { return build_window(config, family, space, params, window_info); });
    const auto part = stage(report, "partition", [&] { return partition(window, config.mode, params.growth); });
    const auto grid = build_oracle_grid(config, part);
    const auto members = member_rvs(window);

    OracleOptions oracle;
    oracle.samples = config.oracle_samples;
    oracle.seed = config.seed;
    oracle.jobs = options.jobs;
    Json rows = Json::array();
    bool all_agree = true;
    stage(report, "oracle", [&] {
        for (double eps : config.tolerances.eps_grid) {
            const auto decision = bounded_in_probability(space, part, space.all_atoms(), eps);
            const auto brute = brute_force_boundedness_oracle(members, space, eps, grid, oracle);
            const bool agree = is_bounded(decision) == brute.bounded;
            all_agree = all_agree && agree;
            rows.push_back(Json{{"eps", eps},
                                {"decision", to_json(decision)},
                                {"oracle", Json{{"bounded", brute.bounded}, {"M", number(brute.M)}}},
                                {"agree", agree}});
        }
        return 0;
    });
    report.results["window"] = window_info;
    report.results["partition"] = to_json(part);
    report.results["oracle"] = rows;
    report.verdicts.push_back({"oracle_agreement", all_agree, to_string(part.provenance),
                               Json{{"samples", oracle.samples},
                                    {"grid_low", grid.front()},
                                    {"grid_high", grid.back()},
                                    {"grid_points", grid.size()}},
                               Json::object()});
    report.narrative.push_back(all_agree ? "decision procedure agrees with the oracle at every epsilon"
                                         : "decision procedure disagrees with the oracle");
    if (options.write_files && !config.output.empty()) {
        stage(report, "outputs", [&] {
            write_text(output_dir(config) / "oracle.json", report.to_json(false).dump(2) + "\n");
            return 0;
        });
    }
    return report;
}

RunReport run(const ExperimentConfig& config, const RunOptions& options) {
    return config.command == "slln" ? run_slln(config, options) : run_partition(config, options);
}

//==============================================================================
// suite
//==============================================================================

ExitCode SuiteReport::exit_code() const {
    ExitCode code = ExitCode::Pass;
    for (const auto& e : entries) {
        if (e.code == ExitCode::ConfigError) return ExitCode::ConfigError;
        if (!e.passed) code = ExitCode::VerificationFailure;
    }
    return code;
}

Json SuiteReport::to_json() const {
    Json list = Json::array();
    std::size_t passed = 0;
    for (const auto& e : entries) {
        passed += e.passed ? 1 : 0;
        Json row{{"file", e.file}, {"passed", e.passed}, {"exit_code", static_cast<int>(e.code)}};
        if (!e.error.empty()) row["error"] = e.error;
        if (!e.verdicts.is_null()) row["verdict"] = e.verdicts;
        list.push_back(row);
    }
    return Json{{"tool_version", kToolVersion},
                {"total", entries.size()},
                {"passed", passed},
                {"failed", entries.size() - passed},
                {"warnings", warnings},
                {"runs", list}};
}

SuiteReport run_suite(const std::filesystem::path& directory, const Overrides& overrides, const RunOptions& options) {
    SuiteReport suite;
    std::error_code ec;
    if (!std::filesystem::is_directory(directory, ec))
        throw ConfigError(directory.string() + ": not a readable directory");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(directory)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
    if (files.empty()) {
        suite.warnings.push_back("no configs found in " + directory.string());
        return suite;
    }

    suite.entries.resize(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < files.size(); i = next++) {
            auto& entry = suite.entries[i];
            entry.file = files[i].filename().string();
            try {
                auto config = load_config(files[i]);
                Overrides local = overrides;
                if (local.out) local.out = *local.out / files[i].stem();
                apply(config, local);
                RunOptions run_options = options;
                run_options.jobs = 1;
                const auto report = run(config, run_options);
                entry.passed = report.passed();
                entry.code = entry.passed ? ExitCode::Pass : ExitCode::VerificationFailure;
                entry.verdicts = report.verdict_section();
            } catch (const StageError& e) {
                entry.code = e.code();
                entry.error = e.what();
            } catch (const std::exception& e) {
                entry.code = ExitCode::ConfigError;
                entry.error = e.what();
            }
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(files.size())));
    std::vector<std::thread> threads;
    for (unsigned t = 1; t < jobs; ++t) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();
    return suite;
}

} // namespace cesaro
