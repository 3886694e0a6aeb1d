#pragma once

#include "cesaro/decomposition.hpp"
#include "cesaro/distribution.hpp"
#include "cesaro/families.hpp"
#include "cesaro/limits.hpp"
#include "cesaro/oracle.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cesaro {

//==============================================================================
// Generator specifications
//==============================================================================

/// ξ_n i.i.d. with the given law. The only kind that admits μ = ∞.
struct IIDKind {
    Distribution law;
};

/// ξ_n = Σ_j w_j ε_{n+j} / Σ_j w_j over lag + 1 i.i.d. innovations. Stationary
/// with mean E[ε], and independent beyond the lag, so φ(n) = ρ(n) = 0 for n > lag.
struct MDependentKind {
    Distribution innovation;
    std::size_t lag = 1;
    std::vector<double> kernel;   // lag + 1 nonnegative weights; empty means uniform
};

enum class CorrelationRule { Antithetic, Independent, FullyCorrelated };
std::string to_string(CorrelationRule rule);
CorrelationRule parse_correlation_rule(const std::string& text);

/// Mean μ, per-term variance σ_n² = variance · n^(-decay), and a pairing rule.
/// Terms are μ + s_n U with U uniform on [-1,1] and s_n = sqrt(3 σ_n²), which
/// must stay ≤ μ for nonnegativity. Antithetic pairs (2i-1, 2i) share U with
/// opposite signs, so E[ξ_n ξ_m] ≤ μ² for n ≠ m.
struct CorrelatedVarianceKind {
    double mean = 1.0;
    double variance = 0.1;
    double decay = 0.0;
    CorrelationRule rule = CorrelationRule::Antithetic;
    double c = 1.0;
};

using GeneratorKind = std::variant<IIDKind, MDependentKind, CorrelatedVarianceKind>;

struct GeneratorSpec {
    GeneratorKind kind = CorrelatedVarianceKind{};
    std::uint64_t seed = 0;
    std::size_t length = 0;
    std::size_t paths = 1;

    double declared_mean() const;
    double variance(std::size_t n) const;   // Var[ξ_n], n ≥ 1
    std::string describe() const;
};

/// Rejects a spec whose construction would break one of its hypotheses and
/// names the violated condition (SpecError).
void validate(const GeneratorSpec& spec);

/// Worst-case Var[Σ_{n≤N} ξ_n] / Σ_{n≤N} Var[ξ_n] implied by the construction.
double analytic_variance_ratio(const CorrelatedVarianceKind& kind, std::size_t N);

//==============================================================================
// Runs
//==============================================================================

struct EmpiricalRun {
    std::size_t length = 0;
    std::size_t paths = 0;
    std::vector<double> values;   // values[path * length + (n - 1)]

    double at(std::size_t path, std::size_t n) const { return values[path * length + (n - 1)]; }
    std::span<const double> path(std::size_t p) const { return {values.data() + p * length, length}; }
    std::vector<double> cesaro_path(std::size_t p) const;
    double final_cesaro(std::size_t p) const;
};

/// Reproducible trajectories: path p uses a generator seeded from (seed, p)
/// only, so results do not depend on `jobs`.
EmpiricalRun generate(const GeneratorSpec& spec, unsigned jobs = 1);

//==============================================================================
// Variance condition
//==============================================================================

struct VarianceCheckRow {
    std::size_t N = 0;
    double var_of_sum = 0.0;
    double sum_of_vars = 0.0;
    double ratio = 0.0;
    bool holds = false;
};

struct VarianceReport {
    double c = 1.0;
    double slack = 0.0;   // 3 / sqrt(paths)
    std::vector<VarianceCheckRow> rows;
    bool holds = false;
};

/// Estimates both sides across paths for N = 1, 2, 4, ... ≤ length (and N =
/// length), asserting ratio ≤ c (1 + 3/√paths). Needs ≥ 200 paths.
VarianceReport verify_variance_condition(const EmpiricalRun& run, double c);

//==============================================================================
// Regime check
//==============================================================================

enum class RegimeVerdict { FiniteBranchHolds, InfiniteBranchHolds, Broken, Inconclusive };
std::string to_string(RegimeVerdict verdict);

struct RegimeParams {
    LimitParams limits{.tol = 0.05};
    std::vector<double> eps_grid{0.5, 0.1, 0.01};
    std::size_t grid_points = 64;
    OracleOptions oracle{};
    double majority = 0.9;   // share of paths a classifier verdict must reach
    std::size_t min_paths = 20;
};

/// Each path is one atom of mass 1/paths, so ξ_n becomes a random variable on
/// an empirical atomic space and the hulls C, C̄ can be probed by the oracle.
struct RegimeReport {
    bool mean_finite = false;                 // declared
    std::size_t paths_finite = 0;             // classifier verdicts per path
    std::size_t paths_infinite = 0;
    std::size_t paths_no_limit = 0;
    std::optional<bool> cesaro_converges;     // nullopt when no majority
    bool hull_bounded = false;                // oracle on C at every ε
    bool cesaro_hull_bounded = false;         // oracle on C̄ at every ε
    std::vector<double> hull_levels;          // least M per ε, NaN when unbounded
    std::vector<double> cesaro_hull_levels;
    std::vector<std::string> broken_edges;
    RegimeVerdict verdict = RegimeVerdict::Inconclusive;
};

RegimeReport slln_regime_check(const GeneratorSpec& spec, const EmpiricalRun& run, const RegimeParams& params = {});

/// Empirical space with one atom of mass 1/paths per path.
AtomicSpace path_space(std::size_t paths);
/// The run as a table family over path_space: c_{n,p} = value of path p at time n.
CoefficientFamily run_family(const EmpiricalRun& run);

} // namespace cesaro
