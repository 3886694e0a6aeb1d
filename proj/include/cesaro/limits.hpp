#pragma once

#include "cesaro/atomic_space.hpp"
#include "cesaro/decomposition.hpp"
#include "cesaro/families.hpp"
#include "cesaro/growth.hpp"

#include <span>
#include <vector>

namespace cesaro {

//==============================================================================
// Limit profile
//==============================================================================

/// Operational definition of "Cesàro convergent" on a finite window: the last
/// `stability_span` means oscillate by at most tol · max(1, |mean|). A zero
/// span means max(32, K/4).
struct LimitParams {
    double tol = 1e-3;
    std::size_t stability_span = 0;
    GrowthParams growth{};

    std::size_t span_for(std::size_t window_length) const;
};

enum class LimitKind { Finite, Infinite, NoLimit };
std::string to_string(LimitKind kind);

struct AtomLimit {
    LimitKind kind = LimitKind::NoLimit;
    double value = 0.0;   // mean of the stable tail when Finite, +inf when Infinite
};

struct LimitProfile {
    std::vector<AtomLabel> labels;    // space order
    std::vector<AtomLimit> limits;    // parallel to labels
    AtomSet finite_set;
    AtomSet infinite_set;
    AtomSet no_limit;
    double tol = 0.0;
    std::size_t stability_span = 0;
    std::size_t window_length = 0;

    bool converged() const noexcept { return no_limit.empty(); }
    const AtomLimit& at(AtomLabel label) const;
    /// ξ as a limit object (values may be +inf). Throws if any atom has no limit.
    SimpleRV as_rv() const;
};

LimitProfile limit_profile(const SequenceWindow& window, const LimitParams& params = {});
/// Classifies precomputed Cesàro means (rows = positions k, columns = atoms of `space`).
LimitProfile limit_profile(const AtomicSpace& space, const Trajectory& means, const LimitParams& params = {});

//==============================================================================
// Proposition check: {ξ < ∞} = Ω_b = Ω̄_b
//==============================================================================

struct PropMainReport {
    AtomSet finite_set;
    AtomSet omega_b;
    AtomSet omega_bar_b;
    bool finite_equals_b = false;
    bool b_equals_bar_b = false;
    bool finite_equals_bar_b = false;
    bool conclusive = false;
    AtomSet no_limit_atoms;
    LimitProfile profile;
    Partition base_partition;
    Partition cesaro_partition;

    bool holds() const noexcept { return conclusive && finite_equals_b && b_equals_bar_b && finite_equals_bar_b; }
};

PropMainReport verify_prop_main(const SequenceWindow& window, const LimitParams& params = {},
                                Mode mode = Mode::Exact);

//==============================================================================
// Subsequence selection
//==============================================================================

struct KomlosSelection {
    SequenceWindow window;
    bool identity = false;   // the prefix window already converged
    bool fallback = false;   // band thinning left too few survivors; stride selection used
};

/// Desk-scale stand-in for the existence of a good subsequence. Returns the
/// prefix 1..horizon when it already converges; otherwise, atom by atom, keeps
/// the indices whose coefficient falls in the most populated dyadic value band
/// [2^j, 2^{j+1}) (zero is its own band). Atoms declared Unbounded never
/// constrain the selection.
KomlosSelection komlos_select(const CoefficientFamily& family, const AtomicSpace& space, std::uint64_t horizon,
                              std::size_t block, const LimitParams& params = {});

//==============================================================================
// Tightness and weak convergence
//==============================================================================

struct TightnessReport {
    std::vector<double> eps_grid;
    std::vector<std::vector<double>> quantiles;   // quantiles[i][e]: (1-ε_e)-quantile of P∘X_i
    std::vector<double> envelope;                 // max over samples, per ε
    bool tight = false;
};

/// Distributions are taken over the tracked atoms, renormalized by 1 - tail.
double upper_quantile(const AtomicSpace& space, const SimpleRV& rv, double epsilon);

TightnessReport tightness_check(std::span<const SimpleRV> samples, const AtomicSpace& space,
                                std::span<const double> eps_grid);

struct WeakConvergenceParams {
    std::size_t grid_points = 256;
    double tolerance = 1e-3;
    double grid_high = 0.0;   // upper grid end; 0 means 1.05 · max sample value
};

struct WeakConvergenceReport {
    bool converges = false;
    double tail_distance = 0.0;   // largest grid distance between a tail sample and the last one
    std::vector<double> grid;
    std::vector<double> limit_cdf;
};

/// Empirical CDFs on a fixed grid over [0, grid_high], by default [0, 1.05 · max value]. Two CDFs are
/// compared with one grid cell of slack in x (a grid Lévy distance); the
/// sequence converges when every sample of the second half lies within
/// `tolerance` of the last one.
WeakConvergenceReport weak_convergence_check(std::span<const SimpleRV> samples, const AtomicSpace& space,
                                             const WeakConvergenceParams& params = {});

/// Picks a subsequence whose values share one grid cell per atom, refining atom
/// by atom and stopping before fewer than 8 samples would remain.
std::vector<std::size_t> extract_convergent_subsequence(std::span<const SimpleRV> samples, const AtomicSpace& space,
                                                        const WeakConvergenceParams& params = {});

//==============================================================================
// Permutation of the window
//==============================================================================

/// (1/K) Σ_k X_{order[k]}: the full-window mean taken in a permuted order.
SimpleRV permuted_final_mean(const Trajectory& values, std::span<const std::size_t> order);

} // namespace cesaro
