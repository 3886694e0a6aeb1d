#pragma once

#include "cesaro/decomposition.hpp"
#include "cesaro/families.hpp"
#include "cesaro/serialize.hpp"
#include "cesaro/slln.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cesaro {

//==============================================================================
// Experiment configuration
//==============================================================================
//
// {
//   "name": "three-atom",                    optional
//   "command": "partition" | "slln",
//   "seed": 42,                                optional, default 0
//   "mode": "exact" | "heuristic",             optional, default exact
//   "output": "out/three-atom",              optional, relative to the config file
//   "space": {"masses": [...], "tail_mass": 0} | {"uniform": n} | {"geometric": {"atoms": n, "ratio": r}},
//   "family": see build_family,
//   "window": {"horizon": n} | {"indices": [...]} | {"komlos": {"horizon": n, "block": b}},
//   "tolerances": {"tol": t, "stability_span": s, "eps_grid": [...]},
//   "oracle": {"samples": 1000, "grid": {"scale": "linear"|"geometric", "low": a, "high": b, "points": 64}},
//   "generator": {"kind": "iid" | "m_dependent" | "correlated_variance", "length": n, "paths": p, ...},
//   "expect": {"J_b": [...], "finite_set": [...], "regime": "finite_branch_holds"}
// }

struct WindowSpec {
    enum class Kind { Horizon, Indices, Komlos };
    Kind kind = Kind::Horizon;
    std::uint64_t horizon = 0;
    std::vector<std::uint64_t> indices;
    std::size_t block = 0;
};

struct GridSpec {
    bool geometric = false;
    double low = 0.0;
    double high = 0.0;
    std::size_t points = 64;
};

struct Tolerances {
    std::optional<double> tol;
    std::optional<std::size_t> stability_span;
    std::vector<double> eps_grid{0.5, 0.1, 0.01};
};

struct Expectations {
    std::optional<AtomSet> bounded;
    std::optional<AtomSet> finite_set;
    std::optional<std::string> regime;
};

struct ExperimentConfig {
    std::string name;
    std::string command;   // "partition" or "slln"
    std::uint64_t seed = 0;
    Mode mode = Mode::Exact;
    std::string output;
    std::vector<double> masses;
    double tail_mass = 0.0;
    Json family;           // validated family spec, echoed verbatim
    std::optional<WindowSpec> window;
    Tolerances tolerances;
    std::size_t oracle_samples = 1000;
    std::optional<GridSpec> oracle_grid;
    Json generator;        // validated generator spec, echoed verbatim
    Expectations expect;
    std::filesystem::path base_dir;   // where relative paths resolve; not echoed
};

/// Parses a config, rejecting it with the first offending key path (ConfigError).
ExperimentConfig parse_config(const Json& json, std::filesystem::path base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical echo; parse_config(to_json(c)) is equivalent to c.
Json to_json(const ExperimentConfig& config);
bool equivalent(const ExperimentConfig& a, const ExperimentConfig& b);

AtomicSpace build_space(const ExperimentConfig& config);
LimitParams build_limit_params(const ExperimentConfig& config);
std::vector<double> build_oracle_grid(const ExperimentConfig& config, const Partition& part);

/// Families:
///   {"builtin": "constant", "value": v}
///   {"builtin": "power", "alpha": a, "weights": [...]}
///   {"builtin": "sampled", "law": LAW, "seed": s}
///   {"atoms": [{"series": "constant", "value": v, "declare": DECL}, ...]}
///       series: constant(value) | power(scale, alpha) | abs_sine(amplitude) | periodic(values)
///               | burst(period, offset, scale, alpha, base) | squares(scale, base) | logarithmic(scale)
///   {"table": "file.csv", "meta": [DECL, ...]}
/// DECL is "unbounded", "unknown" or {"bounded": C}.
/// LAW is {"name": "constant"|"uniform"|"exponential"|"pareto", ...parameters}.
CoefficientFamily build_family(const ExperimentConfig& config);

GeneratorSpec build_generator(const ExperimentConfig& config);

} // namespace cesaro
