#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cesaro {

/// Absolute tolerance for every measure identity (sums of at most ~1e4 doubles).
inline constexpr double kMeasureTolerance = 1e-12;

/// Original 1-based label of an atom A_m. Labels survive truncation and
/// reordering, so weights such as 2^-m stay reproducible.
struct AtomLabel {
    std::uint32_t value = 1;

    constexpr AtomLabel() = default;
    constexpr explicit AtomLabel(std::uint32_t v) : value(v) {}

    friend constexpr auto operator<=>(const AtomLabel&, const AtomLabel&) = default;
};

using AtomSet = std::vector<AtomLabel>;   // kept sorted and unique

AtomSet make_atom_set(std::vector<AtomLabel> labels);
AtomSet labels_from(std::initializer_list<std::uint32_t> raw);

//==============================================================================
// AtomicSpace
//==============================================================================

/// Finite prefix of a countable atomic probability space plus the mass of the
/// untracked tail. Immutable after construction.
class AtomicSpace {
public:
    explicit AtomicSpace(std::vector<double> masses, double tail_mass = 0.0);
    AtomicSpace(std::vector<double> masses, std::vector<AtomLabel> labels, double tail_mass);

    static AtomicSpace uniform(std::size_t atoms);
    /// Masses proportional to ratio^(m-1), truncated at `atoms` with the rest in the tail.
    static AtomicSpace geometric(std::size_t atoms, double ratio);

    std::size_t size() const noexcept { return masses_.size(); }
    double mass(std::size_t position) const { return masses_.at(position); }
    AtomLabel label(std::size_t position) const { return labels_.at(position); }
    std::span<const double> masses() const noexcept { return masses_; }
    std::span<const AtomLabel> labels() const noexcept { return labels_; }
    double tail_mass() const noexcept { return tail_mass_; }
    AtomSet all_atoms() const;

    std::optional<std::size_t> position_of(AtomLabel label) const;
    std::size_t require_position(AtomLabel label) const;

    /// Same atoms in a new order: position i of the result is position order[i] here.
    AtomicSpace permuted(std::span<const std::size_t> order) const;

private:
    std::vector<double> masses_;
    std::vector<AtomLabel> labels_;
    double tail_mass_;
};

//==============================================================================
// SimpleRV
//==============================================================================

enum class RVKind { SequenceMember, LimitObject };

/// Nonnegative random variable constant on each tracked atom. Only limit
/// objects may take the value +infinity.
class SimpleRV {
public:
    SimpleRV() = default;
    explicit SimpleRV(std::vector<double> values, RVKind kind = RVKind::SequenceMember);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t position) const { return values_[position]; }
    std::span<const double> values() const noexcept { return values_; }
    RVKind kind() const noexcept { return kind_; }

    friend bool operator==(const SimpleRV&, const SimpleRV&) = default;

private:
    std::vector<double> values_;
    RVKind kind_ = RVKind::SequenceMember;
};

/// Zero outside the atoms in `keep` (ξ·1_B).
SimpleRV restrict_to(const AtomicSpace& space, const SimpleRV& rv, const AtomSet& keep);

//==============================================================================
// EquivalentMeasure
//==============================================================================

/// Probability measure with Q(A_m) = q_m / K and every q_m > 0, i.e. Q ≈ P on
/// the tracked atoms. The tail receives no Q-mass because K sums the tracked
/// weights only.
class EquivalentMeasure {
public:
    explicit EquivalentMeasure(std::vector<double> weights);

    std::span<const double> weights() const noexcept { return weights_; }
    double normalizer() const noexcept { return normalizer_; }
    std::span<const double> probabilities() const noexcept { return probabilities_; }
    double probability(std::size_t position) const { return probabilities_.at(position); }
    double tail_probability() const noexcept { return 0.0; }
    std::size_t size() const noexcept { return weights_.size(); }

private:
    std::vector<double> weights_;
    double normalizer_ = 0.0;
    std::vector<double> probabilities_;
};

//==============================================================================
// Operations
//==============================================================================

/// Σ p_m over the selected positions. Duplicate positions count once.
double probability_of(const AtomicSpace& space, std::span<const std::size_t> positions);
double probability_of(const AtomicSpace& space, const AtomSet& atoms);

/// Σ_m value_m · P(A_m). The tail contributes nothing; it is the caller's
/// error bar. Returns +inf when an infinite value sits on a positive-mass atom.
double expectation(const AtomicSpace& space, const SimpleRV& rv);
/// Same, under an equivalent measure Q.
double expectation(const AtomicSpace& space, const SimpleRV& rv, const EquivalentMeasure& measure);

} // namespace cesaro
