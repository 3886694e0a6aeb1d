#include "cesaro/atomic_space.hpp"
#include "cesaro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace cesaro {

AtomSet make_atom_set(std::vector<AtomLabel> labels) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return labels;
}

AtomSet labels_from(std::initializer_list<std::uint32_t> raw) {
    std::vector<AtomLabel> labels;
    for (auto v : raw) labels.emplace_back(v);
    return make_atom_set(std::move(labels));
}

namespace {

std::vector<AtomLabel> default_labels(std::size_t n) {
    std::vector<AtomLabel> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.emplace_back(static_cast<std::uint32_t>(i + 1));
    return labels;
}

} // namespace

//==============================================================================
// AtomicSpace
//==============================================================================

AtomicSpace::AtomicSpace(std::vector<double> masses, double tail_mass)
    : AtomicSpace(masses, default_labels(masses.size()), tail_mass) {}

AtomicSpace::AtomicSpace(std::vector<double> masses, std::vector<AtomLabel> labels, double tail_mass)
    : masses_(std::move(masses)), labels_(std::move(labels)), tail_mass_(tail_mass) {
    if (masses_.empty()) throw StructuralError("atomic space needs at least one atom");
    if (labels_.size() != masses_.size())
        throw StructuralError("atomic space: label count does not match atom count");
    for (std::size_t i = 0; i < masses_.size(); ++i) {
        const double p = masses_[i];
        if (!(p > 0.0) || !(p <= 1.0)) {
            std::ostringstream os;
            os << "atomic space: mass of atom " << labels_[i].value << " must lie in (0,1], got " << p;
            throw StructuralError(os.str());
        }
        if (labels_[i].value == 0) throw StructuralError("atomic space: atom labels start at 1");
    }
    if (!(tail_mass_ >= 0.0) || !(tail_mass_ < 1.0))
        throw StructuralError("atomic space: tail mass must lie in [0,1)");
    if (std::set<AtomLabel>(labels_.begin(), labels_.end()).size() != labels_.size())
        throw StructuralError("atomic space: duplicate atom labels");
    const double total = std::accumulate(masses_.begin(), masses_.end(), 0.0) + tail_mass_;
    if (std::abs(total - 1.0) > kMeasureTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "atomic space: masses plus tail sum to " << total << ", expected 1";
        throw StructuralError(os.str());
    }
}

AtomicSpace AtomicSpace::uniform(std::size_t atoms) {
    if (atoms == 0) throw StructuralError("atomic space needs at least one atom");
    return AtomicSpace(std::vector<double>(atoms, 1.0 / static_cast<double>(atoms)), 0.0);
}

AtomicSpace AtomicSpace::geometric(std::size_t atoms, double ratio) {
    if (atoms == 0) throw StructuralError("atomic space needs at least one atom");
    if (!(ratio > 0.0) || !(ratio < 1.0)) throw StructuralError("geometric space: ratio must lie in (0,1)");
    std::vector<double> masses(atoms);
    double p = 1.0 - ratio;
    for (auto& m : masses) {
        m = p;
        p *= ratio;
    }
    const double tracked = std::accumulate(masses.begin(), masses.end(), 0.0);
    return AtomicSpace(std::move(masses), std::max(0.0, 1.0 - tracked));
}

AtomSet AtomicSpace::all_atoms() const {
    return make_atom_set(labels_);
}

std::optional<std::size_t> AtomicSpace::position_of(AtomLabel label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t AtomicSpace::require_position(AtomLabel label) const {
    if (auto pos = position_of(label)) return *pos;
    throw StructuralError("atom " + std::to_string(label.value) + " is not tracked by this space");
}

AtomicSpace AtomicSpace::permuted(std::span<const std::size_t> order) const {
    if (order.size() != size()) throw StructuralError("permutation length does not match atom count");
    std::vector<double> masses;
    std::vector<AtomLabel> labels;
    std::vector<bool> seen(size(), false);
    for (auto i : order) {
        if (i >= size() || seen[i]) throw StructuralError("invalid permutation of atoms");
        seen[i] = true;
        masses.push_back(masses_[i]);
        labels.push_back(labels_[i]);
    }
    return AtomicSpace(std::move(masses), std::move(labels), tail_mass_);
}

//==============================================================================
// SimpleRV
//==============================================================================

SimpleRV::SimpleRV(std::vector<double> values, RVKind kind) : values_(std::move(values)), kind_(kind) {
    for (double v : values_) {
        if (std::isnan(v) || v < 0.0) throw StructuralError("random variable values must be nonnegative");
        if (std::isinf(v) && kind_ != RVKind::LimitObject)
            throw StructuralError("sequence members are finite; only limit objects may be infinite");
    }
}

SimpleRV restrict_to(const AtomicSpace& space, const SimpleRV& rv, const AtomSet& keep) {
    if (rv.size() != space.size()) throw StructuralError("random variable length does not match atom count");
    std::vector<double> out(rv.size(), 0.0);
    for (auto label : keep) {
        const auto pos = space.require_position(label);
        out[pos] = rv[pos];
    }
    return SimpleRV(std::move(out), rv.kind());
}

//==============================================================================
// EquivalentMeasure
//==============================================================================

EquivalentMeasure::EquivalentMeasure(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw StructuralError("equivalent measure needs at least one atom");
    for (double q : weights_) {
        if (!(q > 0.0) || !std::isfinite(q))
            throw StructuralError("equivalent measure weights must be finite and strictly positive");
    }
    normalizer_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    if (!(normalizer_ > 0.0) || !std::isfinite(normalizer_))
        throw StructuralError("equivalent measure normalizer must be finite and positive");
    probabilities_.reserve(weights_.size());
    for (double q : weights_) probabilities_.push_back(q / normalizer_);
}

//==============================================================================
// Operations
//==============================================================================

double probability_of(const AtomicSpace& space, std::span<const std::size_t> positions) {
    std::vector<bool> taken(space.size(), false);
    double total = 0.0;
    for (auto pos : positions) {
        if (pos >= space.size()) {
            throw StructuralError("atom position " + std::to_string(pos) + " is outside the truncation (" +
                                  std::to_string(space.size()) + " atoms)");
        }
        if (taken[pos]) continue;
        taken[pos] = true;
        total += space.mass(pos);
    }
    return total;
}

double probability_of(const AtomicSpace& space, const AtomSet& atoms) {
    std::vector<std::size_t> positions;
    positions.reserve(atoms.size());
    for (auto label : atoms) positions.push_back(space.require_position(label));
    return probability_of(space, positions);
}

namespace {

double weighted_sum(std::span<const double> values, std::span<const double> weights) {
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        if (std::isinf(values[i])) return std::numeric_limits<double>::infinity();
        total += values[i] * weights[i];
    }
    return total;
}

} // namespace

double expectation(const AtomicSpace& space, const SimpleRV& rv) {
    if (rv.size() != space.size()) throw StructuralError("random variable length does not match atom count");
    return weighted_sum(rv.values(), space.masses());
}

double expectation(const AtomicSpace& space, const SimpleRV& rv, const EquivalentMeasure& measure) {
    if (rv.size() != space.size()) throw StructuralError("random variable length does not match atom count");
    if (measure.size() != space.size()) throw StructuralError("measure length does not match atom count");
    return weighted_sum(rv.values(), measure.probabilities());
}

} // namespace cesaro
