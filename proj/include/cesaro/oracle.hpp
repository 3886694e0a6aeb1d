#pragma once

#include "cesaro/atomic_space.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cesaro {

/// Brute-force probe of a finite hull conv{X_1..X_K}: for every grid level M
/// it records sup_X P(X > M) over the listed members and over `samples`
/// Dirichlet(1,...,1) convex combinations. Sample j draws from its own
/// generator seeded by (seed, j), and per-worker maxima are merged with max,
/// so the result does not depend on `jobs`.
struct OracleOptions {
    std::size_t samples = 1000;
    std::uint64_t seed = 0x5eedULL;
    unsigned jobs = 1;
};

class HullTailProfile {
public:
    HullTailProfile(std::span<const SimpleRV> rvs, const AtomicSpace& space, std::vector<double> m_grid,
                    const OracleOptions& options = {});

    std::span<const double> grid() const noexcept { return grid_; }
    /// sup_X P(X > grid[j]) over members and samples.
    std::span<const double> sup_tail() const noexcept { return sup_tail_; }

    /// Least grid M with sup_X P(X > M) < ε, if any.
    std::optional<double> least_level(double epsilon) const;

private:
    std::vector<double> grid_;
    std::vector<double> sup_tail_;
};

struct OracleDecision {
    bool bounded = false;   // false means Unbounded-on-grid
    double M = 0.0;

    friend bool operator==(const OracleDecision&, const OracleDecision&) = default;
};

/// Independent check of boundedness in probability at level ε for a finite
/// hull: the least grid M meeting the criterion, or Unbounded-on-grid.
OracleDecision brute_force_boundedness_oracle(std::span<const SimpleRV> rvs, const AtomicSpace& space, double epsilon,
                                              std::vector<double> m_grid, const OracleOptions& options = {});

/// `points` levels spaced evenly between low and high, inclusive.
std::vector<double> linear_grid(double low, double high, std::size_t points);
/// `points` levels spaced geometrically between low > 0 and high, inclusive.
std::vector<double> geometric_grid(double low, double high, std::size_t points);

} // namespace cesaro
