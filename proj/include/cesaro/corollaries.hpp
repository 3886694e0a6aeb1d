#pragma once

#include "cesaro/decomposition.hpp"
#include "cesaro/families.hpp"
#include "cesaro/limits.hpp"

#include <string>
#include <vector>

namespace cesaro {

struct ChainStatement {
    std::string label;   // "(i)", "(ii)", ...
    std::string claim;
    bool value = false;
};

/// A list of statements that must be simultaneously true or simultaneously false.
struct EquivalenceChain {
    std::vector<ChainStatement> statements;

    bool all_true() const;
    bool all_false() const;
    bool consistent() const { return all_true() || all_false(); }
    std::vector<std::string> broken_edges() const;   // "(i)<->(iv)" for statements disagreeing with (i)
};

struct ChainParams {
    LimitParams limits{};
    std::vector<double> eps_grid{0.5, 0.1, 0.01};
    WeakConvergenceParams weak{};
    Mode mode = Mode::Exact;
};

/// Finite-limit chain: ξ < ∞ everywhere; C and C̄ bounded in probability;
/// L1(Q) certificates on the whole space for the window and its Cesàro means;
/// tightness and weakly convergent subsequences for both sample sequences.
/// The tightness grid is extended by half the smallest atom mass so that a
/// light unbounded atom cannot hide below every ε.
EquivalenceChain finite_limit_chain(const SequenceWindow& window, const ChainParams& params = {});

/// Infinite-limit chain: ξ = ∞ everywhere; C and C̄ hereditarily unbounded.
EquivalenceChain infinite_limit_chain(const SequenceWindow& window, const ChainParams& params = {});

} // namespace cesaro
