#include "cesaro/oracle.hpp"
#include "cesaro/errors.hpp"
#include "cesaro/rng.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <optional>
#include <thread>

namespace cesaro {

namespace {

/// Adds P(X > grid[j]) for every j into `tail` (same length as grid).
void tail_masses(std::span<const double> values, std::span<const double> masses, std::span<const double> grid,
                 std::vector<double>& scratch, std::vector<double>& tail) {
    std::fill(scratch.begin(), scratch.end(), 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        // grid[j] < v  for j in [0, idx)
        const auto idx = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), values[i]) - grid.begin());
        if (idx > 0) scratch[idx - 1] += masses[i];
    }
    double running = 0.0;
    for (std::size_t j = grid.size(); j-- > 0;) {
        running += scratch[j];
        tail[j] = running;
    }
}

void merge_max(std::vector<double>& into, const std::vector<double>& from) {
    for (std::size_t j = 0; j < into.size(); ++j) into[j] = std::max(into[j], from[j]);
}

} // namespace

HullTailProfile::HullTailProfile(std::span<const SimpleRV> rvs, const AtomicSpace& space, std::vector<double> m_grid,
                                 const OracleOptions& options)
    : grid_(std::move(m_grid)) {
    if (grid_.empty()) throw StructuralError("oracle: empty M grid");
    if (rvs.empty()) throw StructuralError("oracle: empty family of random variables");
    for (const auto& rv : rvs) {
        if (rv.size() != space.size()) throw StructuralError("oracle: random variable length does not match atom count");
    }
    std::sort(grid_.begin(), grid_.end());
    grid_.erase(std::unique(grid_.begin(), grid_.end()), grid_.end());

    const std::size_t G = grid_.size();
    const std::size_t atoms = space.size();
    const auto masses = space.masses();
    sup_tail_.assign(G, 0.0);

    {
        std::vector<double> scratch(G), tail(G);
        for (const auto& rv : rvs) {
            tail_masses(rv.values(), masses, grid_, scratch, tail);
            merge_max(sup_tail_, tail);
        }
    }

    if (options.samples == 0) return;
    // exact mixtures stay inside the per-atom member range; clamp away rounding drift
    std::vector<double> lo(atoms, std::numeric_limits<double>::infinity()), hi(atoms, 0.0);
    for (const auto& rv : rvs) {
        for (std::size_t a = 0; a < atoms; ++a) {
            lo[a] = std::min(lo[a], rv[a]);
            hi[a] = std::max(hi[a], rv[a]);
        }
    }
    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(options.samples)));
    std::vector<std::vector<double>> partial(jobs, std::vector<double>(G, 0.0));

    auto work = [&](unsigned worker) {
        std::vector<double> weights(rvs.size()), mix(atoms), scratch(G), tail(G);
        for (std::size_t j = worker; j < options.samples; j += jobs) {
            Engine engine(child_seed(options.seed, 0xD1F1ULL, j));
            double total = 0.0;
            for (auto& w : weights) {
                w = -std::log(uniform_open(engine));
                total += w;
            }
            std::fill(mix.begin(), mix.end(), 0.0);
            for (std::size_t i = 0; i < rvs.size(); ++i) {
                const double w = weights[i] / total;
                const auto values = rvs[i].values();
                for (std::size_t a = 0; a < atoms; ++a) mix[a] += w * values[a];
            }
            for (std::size_t a = 0; a < atoms; ++a) mix[a] = std::clamp(mix[a], lo[a], hi[a]);
            tail_masses(mix, masses, grid_, scratch, tail);
            merge_max(partial[worker], tail);
        }
    };

    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::jthread> threads;
        for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(work, w);
    }
    for (const auto& p : partial) merge_max(sup_tail_, p);
}

std::optional<double> HullTailProfile::least_level(double epsilon) const {
    for (std::size_t j = 0; j < grid_.size(); ++j) {
        if (sup_tail_[j] < epsilon) return grid_[j];
    }
    return std::nullopt;
}

OracleDecision brute_force_boundedness_oracle(std::span<const SimpleRV> rvs, const AtomicSpace& space, double epsilon,
                                              std::vector<double> m_grid, const OracleOptions& options) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) throw StructuralError("epsilon must lie in (0,1)");
    HullTailProfile profile(rvs, space, std::move(m_grid), options);
    if (auto M = profile.least_level(epsilon)) return {true, *M};
    return {false, 0.0};
}

std::vector<double> linear_grid(double low, double high, std::size_t points) {
    if (points == 0 || !(high >= low)) throw StructuralError("grid: need points > 0 and high >= low");
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = points == 1 ? low : low + (high - low) * static_cast<double>(i) / static_cast<double>(points - 1);
    return grid;
}

std::vector<double> geometric_grid(double low, double high, std::size_t points) {
    if (points == 0 || !(low > 0.0) || !(high >= low)) throw StructuralError("grid: need points > 0 and 0 < low <= high");
    std::vector<double> grid(points);
    const double step = points == 1 ? 0.0 : std::log(high / low) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) grid[i] = low * std::exp(step * static_cast<double>(i));
    grid.back() = high;
    return grid;
}

} // namespace cesaro
