#include "cesaro/corollaries.hpp"
#include "cesaro/decomposition.hpp"
#include "cesaro/errors.hpp"

#include <algorithm>

namespace cesaro {

bool EquivalenceChain::all_true() const {
    return std::all_of(statements.begin(), statements.end(), [](const auto& s) { return s.value; });
}

bool EquivalenceChain::all_false() const {
    return std::none_of(statements.begin(), statements.end(), [](const auto& s) { return s.value; });
}

std::vector<std::string> EquivalenceChain::broken_edges() const {
    std::vector<std::string> edges;
    if (statements.empty()) return edges;
    for (std::size_t i = 1; i < statements.size(); ++i) {
        if (statements[i].value != statements.front().value)
            edges.push_back(statements.front().label + "<->" + statements[i].label);
    }
    return edges;
}

namespace {

bool certificate_on_whole_space(const SequenceWindow& window, const Partition& part) {
    if (!part.unbounded.empty()) return false;
    try {
        certify_l1_bound(window, part, build_equivalent_measure(window.space(), part));
        return true;
    } catch (const CertificateError&) {
        return false;
    }
}

std::vector<SimpleRV> rows_of(const Trajectory& t) {
    std::vector<SimpleRV> rows;
    rows.reserve(t.length());
    for (std::size_t k = 1; k <= t.length(); ++k) rows.push_back(row_rv(t, k));
    return rows;
}

bool tight_with_convergent_subsequence(const std::vector<SimpleRV>& samples, const AtomicSpace& space,
                                       const std::vector<double>& eps_grid, const WeakConvergenceParams& weak) {
    if (!tightness_check(samples, space, eps_grid).tight) return false;
    auto pinned = weak;
    if (pinned.grid_high <= 0.0) {
        for (const auto& s : samples) {
            for (double v : s.values()) pinned.grid_high = std::max(pinned.grid_high, v * 1.05);
        }
    }
    const auto picked = extract_convergent_subsequence(samples, space, pinned);
    if (picked.size() < 8) return false;
    std::vector<SimpleRV> sub;
    for (auto i : picked) sub.push_back(samples[i]);
    return weak_convergence_check(sub, space, pinned).converges;
}

} // namespace

EquivalenceChain finite_limit_chain(const SequenceWindow& window, const ChainParams& params) {
    const auto& space = window.space();
    const auto all = space.all_atoms();
    const CesaroFamily hull(window);
    const auto profile = limit_profile(space, hull.trajectory(), params.limits);
    const auto part = partition(window, params.mode, params.limits.growth);
    const auto bar_part = partition(hull, params.mode, params.limits.growth);

    auto eps = params.eps_grid;
    const auto masses = space.masses();
    eps.push_back(*std::min_element(masses.begin(), masses.end()) / 2.0);

    EquivalenceChain chain;
    chain.statements.push_back({"(i)", "xi < inf on every atom", profile.converged() && profile.finite_set == all});
    chain.statements.push_back({"(ii)", "C bounded in probability", is_bounded(bounded_for_all_levels(part, all))});
    chain.statements.push_back(
        {"(iii)", "C-bar bounded in probability", is_bounded(bounded_for_all_levels(bar_part, all))});
    chain.statements.push_back({"(iv)", "window L1(Q)-bounded for some Q ~ P", certificate_on_whole_space(window, part)});
    chain.statements.push_back(
        {"(v)", "Cesaro means L1(Q)-bounded for some Q ~ P", certificate_on_whole_space(hull.window(), bar_part)});
    chain.statements.push_back({"(vi)", "members tight with a weakly convergent subsequence",
                                tight_with_convergent_subsequence(rows_of(evaluate_all(window)), space, eps, params.weak)});
    chain.statements.push_back({"(vii)", "Cesaro means tight with a weakly convergent subsequence",
                                tight_with_convergent_subsequence(rows_of(hull.trajectory()), space, eps, params.weak)});
    return chain;
}

EquivalenceChain infinite_limit_chain(const SequenceWindow& window, const ChainParams& params) {
    const auto& space = window.space();
    const auto all = space.all_atoms();
    const CesaroFamily hull(window);
    const auto profile = limit_profile(space, hull.trajectory(), params.limits);
    const auto part = partition(window, params.mode, params.limits.growth);
    const auto bar_part = partition(hull, params.mode, params.limits.growth);

    EquivalenceChain chain;
    chain.statements.push_back({"(i)", "xi = inf on every atom", profile.converged() && profile.infinite_set == all});
    chain.statements.push_back({"(ii)", "C hereditarily unbounded", hereditarily_unbounded(part, all)});
    chain.statements.push_back({"(iii)", "C-bar hereditarily unbounded", hereditarily_unbounded(bar_part, all)});
    return chain;
}

} // namespace cesaro
