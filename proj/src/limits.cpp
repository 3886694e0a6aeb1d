#include "cesaro/limits.hpp"
#include "cesaro/errors.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace cesaro {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::size_t LimitParams::span_for(std::size_t window_length) const {
    return stability_span > 0 ? stability_span : std::max<std::size_t>(32, window_length / 4);
}

std::string to_string(LimitKind kind) {
    switch (kind) {
    case LimitKind::Finite: return "finite";
    case LimitKind::Infinite: return "infinite";
    case LimitKind::NoLimit: return "no_limit";
    }
    return "no_limit";
}

//==============================================================================
// Limit profile
//==============================================================================

const AtomLimit& LimitProfile::at(AtomLabel label) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) return limits[i];
    }
    throw StructuralError("atom " + std::to_string(label.value) + " is not in the limit profile");
}

SimpleRV LimitProfile::as_rv() const {
    std::vector<double> values;
    for (std::size_t i = 0; i < limits.size(); ++i) {
        if (limits[i].kind == LimitKind::NoLimit)
            throw StructuralError("atom " + std::to_string(labels[i].value) + " has no limit on this window");
        values.push_back(limits[i].value);
    }
    return SimpleRV(std::move(values), RVKind::LimitObject);
}

LimitProfile limit_profile(const AtomicSpace& space, const Trajectory& means, const LimitParams& params) {
    if (means.atoms() != space.size()) throw StructuralError("trajectory width does not match atom count");
    const std::size_t K = means.length();
    const std::size_t span = params.span_for(K);
    if (span == 0 || K < 2 * span) {
        throw StructuralError("window too short: length " + std::to_string(K) + " < 2 x stability span " +
                              std::to_string(span));
    }

    LimitProfile profile;
    profile.tol = params.tol;
    profile.stability_span = span;
    profile.window_length = K;
    for (std::size_t pos = 0; pos < space.size(); ++pos) {
        const auto column = means.column(pos);
        const auto tail = std::span<const double>(column).subspan(K - span);
        const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
        const double mean = std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(span);

        AtomLimit limit;
        if (*hi - *lo <= params.tol * std::max(1.0, std::abs(mean))) {
            limit = {LimitKind::Finite, mean};
        } else if (diverges(column, params.growth)) {
            limit = {LimitKind::Infinite, kInf};
        }
        const auto label = space.label(pos);
        profile.labels.push_back(label);
        profile.limits.push_back(limit);
        switch (limit.kind) {
        case LimitKind::Finite: profile.finite_set.push_back(label); break;
        case LimitKind::Infinite: profile.infinite_set.push_back(label); break;
        case LimitKind::NoLimit: profile.no_limit.push_back(label); break;
        }
    }
    profile.finite_set = make_atom_set(std::move(profile.finite_set));
    profile.infinite_set = make_atom_set(std::move(profile.infinite_set));
    profile.no_limit = make_atom_set(std::move(profile.no_limit));
    return profile;
}

LimitProfile limit_profile(const SequenceWindow& window, const LimitParams& params) {
    const std::size_t span = params.span_for(window.length());
    if (window.length() < 2 * span) {
        throw StructuralError("window too short: length " + std::to_string(window.length()) +
                              " < 2 x stability span " + std::to_string(span));
    }
    return limit_profile(window.space(), cesaro_all(window), params);
}

//==============================================================================
// Proposition check
//==============================================================================

PropMainReport verify_prop_main(const SequenceWindow& window, const LimitParams& params, Mode mode) {
    PropMainReport report;
    report.profile = limit_profile(window, params);
    report.base_partition = partition(window, mode, params.growth);
    report.cesaro_partition = partition(CesaroFamily(window), mode, params.growth);
    report.finite_set = report.profile.finite_set;
    report.no_limit_atoms = report.profile.no_limit;
    report.omega_b = report.base_partition.bounded;
    report.omega_bar_b = report.cesaro_partition.bounded;
    report.conclusive = report.profile.converged();
    report.finite_equals_b = report.finite_set == report.omega_b;
    report.b_equals_bar_b = report.omega_b == report.omega_bar_b;
    report.finite_equals_bar_b = report.finite_set == report.omega_bar_b;
    return report;
}

//==============================================================================
// Subsequence selection
//==============================================================================

namespace {

int value_band(double v) {
    if (v <= 0.0) return INT_MIN;
    return std::ilogb(v);
}

bool prefix_already_converges(const CoefficientFamily& family, const LimitProfile& profile) {
    if (!profile.converged()) return false;
    for (std::size_t i = 0; i < profile.labels.size(); ++i) {
        if (is_unbounded(family.meta(profile.labels[i]))) continue;
        if (profile.limits[i].kind != LimitKind::Finite) return false;
    }
    return true;
}

} // namespace

KomlosSelection komlos_select(const CoefficientFamily& family, const AtomicSpace& space, std::uint64_t horizon,
                              std::size_t block, const LimitParams& params) {
    if (block == 0 || horizon < 4 * static_cast<std::uint64_t>(block))
        throw StructuralError("komlos_select: need block > 0 and horizon >= 4 x block");

    auto identity = SequenceWindow::prefix(family, horizon, space);
    const auto values = evaluate_all(identity);
    if (prefix_already_converges(family, limit_profile(space, cesaro_all(values), params)))
        return {identity, true, false};

    std::vector<std::uint64_t> survivors(horizon);
    std::iota(survivors.begin(), survivors.end(), std::uint64_t{1});
    for (std::size_t pos = 0; pos < space.size(); ++pos) {
        if (is_unbounded(family.meta(space.label(pos)))) continue;
        std::map<int, std::size_t> counts;
        for (auto n : survivors) ++counts[value_band(values.at(n, pos))];
        // std::map iterates bands upward, so ties resolve to the lower band.
        auto modal = std::max_element(counts.begin(), counts.end(),
                                      [](const auto& a, const auto& b) { return a.second < b.second; });
        std::vector<std::uint64_t> kept;
        for (auto n : survivors) {
            if (value_band(values.at(n, pos)) == modal->first) kept.push_back(n);
        }
        survivors = std::move(kept);
    }

    const std::size_t atoms = std::min<std::size_t>(space.size(), 63);
    const std::uint64_t floor = std::max<std::uint64_t>(horizon >> atoms, 2 * static_cast<std::uint64_t>(block));
    if (survivors.size() >= floor && survivors.size() >= 2 * params.span_for(survivors.size()))
        return {SequenceWindow(family, std::move(survivors), space), false, false};

    const std::uint64_t stride = std::max<std::uint64_t>(1, horizon / (4 * static_cast<std::uint64_t>(block)));
    std::vector<std::uint64_t> strided;
    for (std::uint64_t n = stride; n <= horizon; n += stride) strided.push_back(n);
    return {SequenceWindow(family, std::move(strided), space), false, true};
}

//==============================================================================
// Tightness and weak convergence
//==============================================================================

namespace {

double tracked_mass(const AtomicSpace& space) {
    return 1.0 - space.tail_mass();
}

/// P(X ≤ x) on each grid point.
std::vector<double> grid_cdf(const AtomicSpace& space, const SimpleRV& rv, std::span<const double> grid) {
    std::vector<double> cdf(grid.size(), 0.0);
    const double total = tracked_mass(space);
    for (std::size_t pos = 0; pos < rv.size(); ++pos) {
        const auto first = std::lower_bound(grid.begin(), grid.end(), rv[pos]) - grid.begin();
        if (first < static_cast<std::ptrdiff_t>(grid.size())) cdf[static_cast<std::size_t>(first)] += space.mass(pos) / total;
    }
    std::partial_sum(cdf.begin(), cdf.end(), cdf.begin());
    return cdf;
}

double shifted_distance(std::span<const double> f, std::span<const double> g) {
    double d = 0.0;
    const std::size_t last = f.size() - 1;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const std::size_t up = std::min(j + 1, last);
        d = std::max({d, f[j] - g[up], g[j] - f[up]});
    }
    return d;
}

std::vector<double> sample_grid(std::span<const SimpleRV> samples, std::size_t points, double fixed_high = 0.0) {
    double top = 0.0;
    for (const auto& s : samples) {
        for (double v : s.values()) {
            if (std::isfinite(v)) top = std::max(top, v);
        }
    }
    std::vector<double> grid(points);
    const double high = fixed_high > 0.0 ? fixed_high : top > 0.0 ? top * 1.05 : 1.0;
    for (std::size_t j = 0; j < points; ++j)
        grid[j] = high * static_cast<double>(j) / static_cast<double>(points - 1);
    return grid;
}

void check_samples(std::span<const SimpleRV> samples, const AtomicSpace& space) {
    for (const auto& s : samples) {
        if (s.size() != space.size()) throw StructuralError("sample length does not match atom count");
    }
}

} // namespace

double upper_quantile(const AtomicSpace& space, const SimpleRV& rv, double epsilon) {
    if (rv.size() != space.size()) throw StructuralError("random variable length does not match atom count");
    std::vector<std::size_t> order(rv.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rv[a] < rv[b]; });
    const double total = tracked_mass(space);
    const double target = (1.0 - epsilon) - kMeasureTolerance;
    double cdf = 0.0;
    for (auto pos : order) {
        cdf += space.mass(pos) / total;
        if (cdf >= target) return rv[pos];
    }
    return rv[order.back()];
}

TightnessReport tightness_check(std::span<const SimpleRV> samples, const AtomicSpace& space,
                                std::span<const double> eps_grid) {
    if (samples.empty()) throw StructuralError("tightness check needs at least one sample");
    check_samples(samples, space);

    TightnessReport report;
    report.eps_grid.assign(eps_grid.begin(), eps_grid.end());
    report.envelope.assign(eps_grid.size(), 0.0);
    std::vector<std::vector<double>> running(samples.size(), std::vector<double>(eps_grid.size()));
    bool finite = true;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        std::vector<double> q(eps_grid.size());
        for (std::size_t e = 0; e < eps_grid.size(); ++e) {
            q[e] = upper_quantile(space, samples[i], eps_grid[e]);
            finite = finite && std::isfinite(q[e]);
            report.envelope[e] = std::max(report.envelope[e], q[e]);
            running[i][e] = report.envelope[e];
        }
        report.quantiles.push_back(std::move(q));
    }

    const std::size_t mid = (samples.size() - 1) / 2;
    bool stable = true;
    for (std::size_t e = 0; e < eps_grid.size(); ++e) {
        const double before = running[mid][e];
        const double after = running.back()[e];
        if (before == 0.0) {
            stable = stable && after == 0.0;
        } else {
            stable = stable && (after - before) <= 0.1 * before;
        }
    }
    report.tight = finite && stable;
    return report;
}

WeakConvergenceReport weak_convergence_check(std::span<const SimpleRV> samples, const AtomicSpace& space,
                                             const WeakConvergenceParams& params) {
    if (samples.size() < 8) throw StructuralError("weak convergence check needs at least 8 samples");
    if (params.grid_points < 2) throw StructuralError("weak convergence grid needs at least 2 points");
    check_samples(samples, space);

    WeakConvergenceReport report;
    report.grid = sample_grid(samples, params.grid_points, params.grid_high);
    report.limit_cdf = grid_cdf(space, samples.back(), report.grid);
    for (std::size_t i = samples.size() / 2; i + 1 < samples.size(); ++i) {
        const auto cdf = grid_cdf(space, samples[i], report.grid);
        report.tail_distance = std::max(report.tail_distance, shifted_distance(cdf, report.limit_cdf));
    }
    report.converges = report.tail_distance <= params.tolerance;
    return report;
}

std::vector<std::size_t> extract_convergent_subsequence(std::span<const SimpleRV> samples, const AtomicSpace& space,
                                                        const WeakConvergenceParams& params) {
    check_samples(samples, space);
    std::vector<std::size_t> survivors(samples.size());
    std::iota(survivors.begin(), survivors.end(), std::size_t{0});
    if (samples.size() < 8) return survivors;

    const auto grid = sample_grid(samples, params.grid_points, params.grid_high);
    auto cell = [&](double v) {
        return static_cast<std::ptrdiff_t>(std::lower_bound(grid.begin(), grid.end(), v) - grid.begin());
    };
    for (std::size_t pos = 0; pos < space.size(); ++pos) {
        std::map<std::ptrdiff_t, std::size_t> counts;
        for (auto i : survivors) ++counts[cell(samples[i][pos])];
        auto modal = std::max_element(counts.begin(), counts.end(),
                                      [](const auto& a, const auto& b) { return a.second < b.second; });
        if (modal->second < 8) break;
        std::vector<std::size_t> kept;
        for (auto i : survivors) {
            if (cell(samples[i][pos]) == modal->first) kept.push_back(i);
        }
        survivors = std::move(kept);
    }
    return survivors;
}

SimpleRV permuted_final_mean(const Trajectory& values, std::span<const std::size_t> order) {
    if (order.size() != values.length()) throw StructuralError("permutation length does not match window length");
    std::vector<bool> seen(values.length(), false);
    std::vector<double> sums(values.atoms(), 0.0);
    for (auto i : order) {
        if (i >= values.length() || seen[i]) throw StructuralError("invalid permutation of the window");
        seen[i] = true;
        for (std::size_t pos = 0; pos < values.atoms(); ++pos) sums[pos] += values.at(i + 1, pos);
    }
    for (auto& s : sums) s /= static_cast<double>(values.length());
    return SimpleRV(std::move(sums));
}

} // namespace cesaro
