#pragma once

#include "cesaro/config.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cesaro {

inline constexpr const char* kToolVersion = "cesaro 0.1.0";

/// Exit statuses shared by the CLI and the suite.
enum class ExitCode : int { Pass = 0, VerificationFailure = 1, ConfigError = 2 };

/// A pipeline stage threw; carries the stage name and whether the cause was
/// configuration/IO (exit 2) or a verification failure (exit 1).
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& cause, ExitCode code)
        : std::runtime_error("stage '" + stage + "': " + cause), stage_(std::move(stage)), code_(code) {}
    const std::string& stage() const noexcept { return stage_; }
    ExitCode code() const noexcept { return code_; }

private:
    std::string stage_;
    ExitCode code_;
};

struct RunOptions {
    unsigned jobs = 1;
    bool write_files = true;
};

/// CLI flags that replace config fields; the echo reflects the replaced values.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<Mode> mode;
    std::optional<std::vector<double>> eps_grid;
    std::optional<std::filesystem::path> out;
};

void apply(ExperimentConfig& config, const Overrides& overrides);

struct Verdict {
    std::string name;
    bool pass = false;
    std::string provenance;   // "exact" or "heuristic"
    Json parameters;
    Json detail;
};

struct RunReport {
    std::string command;
    std::uint64_t seed = 0;
    Json config;                      // echo
    Json results;
    std::vector<Verdict> verdicts;
    std::vector<std::string> narrative;
    Json timings = Json::object();    // seconds per stage, excluded from determinism

    bool passed() const;
    Json verdict_section() const;
    Json to_json(bool with_timings = true) const;
};

RunReport run_partition(const ExperimentConfig& config, const RunOptions& options = {});
RunReport run_slln(const ExperimentConfig& config, const RunOptions& options = {});
/// Compares bounded_in_probability with the brute-force oracle at every ε of the config.
RunReport run_oracle(const ExperimentConfig& config, const RunOptions& options = {});
/// Dispatches on config.command.
RunReport run(const ExperimentConfig& config, const RunOptions& options = {});

struct SuiteEntry {
    std::string file;
    bool passed = false;
    ExitCode code = ExitCode::Pass;
    std::string error;       // empty unless the run aborted
    Json verdicts;
};

struct SuiteReport {
    std::vector<SuiteEntry> entries;   // sorted by filename
    std::vector<std::string> warnings;

    ExitCode exit_code() const;
    Json to_json() const;
};

/// Runs every *.json file in `directory` (sorted by filename) with up to
/// `options.jobs` configs in flight. A config that cannot be read or parsed
/// counts as a failure and the suite continues.
SuiteReport run_suite(const std::filesystem::path& directory, const Overrides& overrides = {},
                      const RunOptions& options = {});

} // namespace cesaro
