#pragma once

#include "cesaro/atomic_space.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace cesaro {

//==============================================================================
// Per-atom boundedness metadata
//==============================================================================

/// Declared bound C_m ≥ sup_n c_{n,m}.
struct Bounded {
    double bound = 1.0;
    friend bool operator==(const Bounded&, const Bounded&) = default;
};
struct Unbounded {
    friend bool operator==(const Unbounded&, const Unbounded&) = default;
};
struct Unknown {
    friend bool operator==(const Unknown&, const Unknown&) = default;
};

using AtomMeta = std::variant<Bounded, Unbounded, Unknown>;

bool is_bounded(const AtomMeta& meta);
bool is_unbounded(const AtomMeta& meta);
bool is_unknown(const AtomMeta& meta);

//==============================================================================
// CoefficientFamily
//==============================================================================

/// The array c_{n,m} defining ξ_n = Σ_m c_{n,m} 1_{A_m}. Sequence indices n
/// start at 1; atoms are addressed by label. Evaluators must be pure.
class CoefficientFamily {
public:
    using Evaluator = std::function<double(std::uint64_t n, AtomLabel m)>;
    using MetaRule = std::function<AtomMeta(AtomLabel m)>;

    CoefficientFamily(Evaluator evaluator, MetaRule meta, std::string description);
    /// meta[i] describes label i + 1; labels past the end are Unknown.
    CoefficientFamily(Evaluator evaluator, std::vector<AtomMeta> meta, std::string description);

    /// c_{n,m}; throws StructuralError for negative or non-finite values.
    double coefficient(std::uint64_t n, AtomLabel m) const;

    /// Declared metadata with bounds clamped up to 1.
    AtomMeta meta(AtomLabel m) const;

    const std::string& description() const noexcept { return description_; }

    /// Same coefficients with the metadata replaced.
    CoefficientFamily with_meta(MetaRule meta) const;

private:
    Evaluator evaluator_;
    MetaRule meta_;
    std::string description_;
};

//==============================================================================
// Windows and trajectories
//==============================================================================

/// Row-major (position k, atom position) matrix of per-atom values; k is 1-based.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(std::size_t length, std::size_t atoms);

    std::size_t length() const noexcept { return length_; }
    std::size_t atoms() const noexcept { return atoms_; }

    double at(std::size_t k, std::size_t position) const { return data_[(k - 1) * atoms_ + position]; }
    double& at(std::size_t k, std::size_t position) { return data_[(k - 1) * atoms_ + position]; }
    std::span<const double> row(std::size_t k) const { return {data_.data() + (k - 1) * atoms_, atoms_}; }
    std::vector<double> column(std::size_t position) const;

private:
    std::size_t length_ = 0;
    std::size_t atoms_ = 0;
    std::vector<double> data_;
};

/// A family probed along a strictly increasing subsequence n_1 < ... < n_K.
class SequenceWindow {
public:
    SequenceWindow(CoefficientFamily family, std::vector<std::uint64_t> indices, AtomicSpace space);

    /// Indices 1..horizon.
    static SequenceWindow prefix(CoefficientFamily family, std::uint64_t horizon, AtomicSpace space);

    const CoefficientFamily& family() const noexcept { return family_; }
    const AtomicSpace& space() const noexcept { return space_; }
    std::span<const std::uint64_t> indices() const noexcept { return indices_; }
    std::size_t length() const noexcept { return indices_.size(); }
    std::uint64_t index(std::size_t k) const;

    /// Same subsequence viewed on a reordered atom list.
    SequenceWindow with_space(AtomicSpace space) const;

private:
    CoefficientFamily family_;
    std::vector<std::uint64_t> indices_;
    AtomicSpace space_;
};

/// ξ_{n_k} on the tracked atoms.
SimpleRV evaluate(const SequenceWindow& window, std::size_t k);
/// ξ̄_{n_k} = (1/k) Σ_{l≤k} ξ_{n_l}, summed directly in order.
SimpleRV cesaro(const SequenceWindow& window, std::size_t k);

Trajectory evaluate_all(const SequenceWindow& window);
/// All Cesàro means; running sums are accumulated in the same order as
/// cesaro(), so each row is bit-identical to the direct computation.
Trajectory cesaro_all(const SequenceWindow& window);
Trajectory cesaro_all(const Trajectory& values);

SimpleRV row_rv(const Trajectory& trajectory, std::size_t k);

/// Pointwise Σ w_i X_i. Weights must be nonnegative and sum to 1 within 1e-12.
SimpleRV convex_combination(std::span<const SimpleRV> rvs, std::span<const double> weights);

//==============================================================================
// CesaroFamily
//==============================================================================

/// The Cesàro transform of a window, exposed as its own family over indices
/// 1..K so the decomposition machinery can run on C̄ exactly as on C.
///
/// Metadata carries over atom by atom. Bounded(C) stays Bounded(C) since a mean
/// of values ≤ C is ≤ C. Unbounded stays Unbounded, which is valid for windows
/// whose limit is L1(Q)-bounded on {ξ < ∞}: an unbounded atom there must have
/// an infinite Cesàro limit.
class CesaroFamily {
public:
    explicit CesaroFamily(SequenceWindow base);

    const SequenceWindow& base() const noexcept { return base_; }
    const Trajectory& trajectory() const noexcept { return *means_; }
    const SequenceWindow& window() const noexcept { return window_; }

private:
    SequenceWindow base_;
    std::shared_ptr<const Trajectory> means_;
    SequenceWindow window_;
};

/// Verifies the evaluator is finite and nonnegative on the window and that
/// every Bounded(C_m) declaration holds there. Throws MetadataError naming the
/// first offending (n, atom).
void check_declared_bounds(const SequenceWindow& window);

} // namespace cesaro
