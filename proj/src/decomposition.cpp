#include "cesaro/decomposition.hpp"
#include "cesaro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cesaro {

std::string to_string(Mode mode) { return mode == Mode::Exact ? "exact" : "heuristic"; }
std::string to_string(Provenance provenance) { return provenance == Provenance::Exact ? "exact" : "heuristic"; }

Mode parse_mode(const std::string& text) {
    if (text == "exact") return Mode::Exact;
    if (text == "heuristic") return Mode::Heuristic;
    throw ConfigError("mode must be 'exact' or 'heuristic', got '" + text + "'");
}

namespace {

Partition classify_atoms(const SequenceWindow& window, const AtomSet& atoms, Mode mode, const GrowthParams& growth) {
    const auto& family = window.family();
    const auto& space = window.space();

    AtomSet unknown;
    for (auto label : atoms) {
        space.require_position(label);
        if (is_unknown(family.meta(label))) unknown.push_back(label);
    }
    if (mode == Mode::Exact && !unknown.empty()) {
        std::ostringstream os;
        os << "exact mode needs declared metadata; Unknown atoms:";
        for (auto l : unknown) os << ' ' << l.value;
        throw MetadataError(os.str());
    }
    if (mode == Mode::Exact) check_declared_bounds(window);

    Partition part;
    part.provenance = unknown.empty() ? Provenance::Exact : Provenance::Heuristic;
    for (auto label : atoms) {
        const auto meta = family.meta(label);
        if (const auto* b = std::get_if<Bounded>(&meta)) {
            part.bounded.push_back(label);
            part.bounds[label] = b->bound;
        } else if (is_unbounded(meta)) {
            part.unbounded.push_back(label);
        } else {
            const auto pos = space.require_position(label);
            std::vector<double> column(window.length());
            for (std::size_t k = 1; k <= window.length(); ++k)
                column[k - 1] = family.coefficient(window.index(k), space.label(pos));
            const auto probe = probe_growth(column, growth);
            part.probed.push_back(label);
            if (probe.unbounded) {
                part.unbounded.push_back(label);
            } else {
                part.bounded.push_back(label);
                part.bounds[label] = std::max(probe.bound, 1.0);
            }
        }
    }
    part.bounded = make_atom_set(std::move(part.bounded));
    part.unbounded = make_atom_set(std::move(part.unbounded));
    part.probed = make_atom_set(std::move(part.probed));
    return part;
}

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) throw StructuralError("epsilon must lie in (0,1)");
}

} // namespace

Partition partition(const SequenceWindow& window, Mode mode, const GrowthParams& growth) {
    return classify_atoms(window, window.space().all_atoms(), mode, growth);
}

Partition partition(const CesaroFamily& hull, Mode mode, const GrowthParams& growth) {
    return partition(hull.window(), mode, growth);
}

EquivalentMeasure build_equivalent_measure(const AtomicSpace& space, const Partition& part) {
    return build_equivalent_measure(space, part, part.bounds);
}

EquivalentMeasure build_equivalent_measure(const AtomicSpace& space, const Partition& part,
                                           const std::map<AtomLabel, double>& bounds) {
    std::vector<double> q(space.size());
    for (std::size_t pos = 0; pos < space.size(); ++pos) {
        const auto label = space.label(pos);
        const double geometric = std::ldexp(1.0, -static_cast<int>(label.value));
        if (std::binary_search(part.bounded.begin(), part.bounded.end(), label)) {
            auto it = bounds.find(label);
            if (it == bounds.end())
                throw StructuralError("no bound C_m for bounded atom " + std::to_string(label.value));
            q[pos] = geometric / std::max(it->second, 1.0);
        } else if (std::binary_search(part.unbounded.begin(), part.unbounded.end(), label)) {
            q[pos] = geometric;
        } else {
            throw StructuralError("atom " + std::to_string(label.value) + " is missing from the partition");
        }
    }
    return EquivalentMeasure(std::move(q));
}

double l1_bound(const Partition& part, const EquivalentMeasure& measure) {
    double total = 0.0;
    for (auto label : part.bounded) total += std::ldexp(1.0, -static_cast<int>(label.value));
    return total / measure.normalizer();
}

BoundednessCertificate certify_l1_bound(const SequenceWindow& window, const Partition& part,
                                        const EquivalentMeasure& measure) {
    const auto& space = window.space();
    if (measure.size() != space.size()) throw StructuralError("measure does not match the window's space");

    std::vector<std::size_t> positions;
    for (auto label : part.bounded) positions.push_back(space.require_position(label));

    BoundednessCertificate cert{measure, l1_bound(part, measure), 0.0, 0, part};
    if (positions.empty()) return cert;

    for (std::size_t k = 1; k <= window.length(); ++k) {
        const auto n = window.index(k);
        double e = 0.0;
        for (auto pos : positions) e += window.family().coefficient(n, space.label(pos)) * measure.probability(pos);
        if (e > cert.checked_sup || cert.sup_position == 0) {
            cert.checked_sup = e;
            cert.sup_position = k;
        }
    }

    if (cert.checked_sup > cert.l1_bound + 1e-9) {
        // Name the atom whose coefficient overshoots its bound, or failing that
        // the largest contributor.
        const auto n = window.index(cert.sup_position);
        std::size_t culprit = positions.front();
        double worst = -1.0;
        for (auto pos : positions) {
            const auto label = space.label(pos);
            const double c = window.family().coefficient(n, label);
            auto it = part.bounds.find(label);
            const double excess = it != part.bounds.end() ? c - it->second : c * measure.probability(pos);
            if (excess > worst) {
                worst = excess;
                culprit = pos;
            }
        }
        std::ostringstream os;
        os.precision(17);
        os << "L1 certificate violated at window position " << cert.sup_position << " (n = " << n << "), atom "
           << space.label(culprit).value << ": sup E_Q = " << cert.checked_sup << " > bound " << cert.l1_bound;
        throw CertificateError(os.str(), cert.sup_position, space.label(culprit).value);
    }
    return cert;
}

//==============================================================================
// Boundedness in probability
//==============================================================================

BoundednessDecision bounded_in_probability(const AtomicSpace& space, const Partition& part,
                                           const AtomSet& restrict_to, double epsilon) {
    check_epsilon(epsilon);
    const auto set = make_atom_set(restrict_to);

    double unbounded_mass = 0.0;
    std::optional<AtomLabel> witness;
    double witness_mass = -1.0;
    std::vector<std::pair<AtomLabel, double>> bounded;   // (label, C_m) in label order
    double bounded_mass = 0.0;
    for (auto label : set) {
        const double p = space.mass(space.require_position(label));
        if (std::binary_search(part.unbounded.begin(), part.unbounded.end(), label)) {
            unbounded_mass += p;
            if (p > witness_mass) {
                witness_mass = p;
                witness = label;
            }
        } else if (std::binary_search(part.bounded.begin(), part.bounded.end(), label)) {
            bounded.emplace_back(label, part.bounds.at(label));
            bounded_mass += p;
        } else {
            throw StructuralError("atom " + std::to_string(label.value) + " is missing from the partition");
        }
    }
    if (witness && unbounded_mass >= epsilon) return UnboundedAt{*witness};

    double uncovered = bounded_mass;
    double M = 0.0;
    for (const auto& [label, bound] : bounded) {
        if (unbounded_mass + uncovered < epsilon) break;
        M = std::max(M, bound);
        uncovered -= space.mass(space.require_position(label));
    }
    return BoundedWithM{M};
}

BoundednessDecision bounded_in_probability(const SequenceWindow& window, const AtomSet& restrict_to, double epsilon,
                                           Mode mode, const GrowthParams& growth) {
    check_epsilon(epsilon);
    const auto set = make_atom_set(restrict_to);
    const auto part = classify_atoms(window, set, mode, growth);
    return bounded_in_probability(window.space(), part, set, epsilon);
}

BoundednessDecision bounded_in_probability(const CesaroFamily& hull, const AtomSet& restrict_to, double epsilon,
                                           Mode mode, const GrowthParams& growth) {
    return bounded_in_probability(hull.window(), restrict_to, epsilon, mode, growth);
}

BoundednessDecision bounded_for_all_levels(const Partition& part, const AtomSet& restrict_to) {
    for (auto label : make_atom_set(restrict_to)) {
        if (std::binary_search(part.unbounded.begin(), part.unbounded.end(), label)) return UnboundedAt{label};
    }
    double M = 0.0;
    for (auto label : restrict_to) {
        auto it = part.bounds.find(label);
        if (it == part.bounds.end())
            throw StructuralError("atom " + std::to_string(label.value) + " is missing from the partition");
        M = std::max(M, it->second);
    }
    return BoundedWithM{M};
}

bool hereditarily_unbounded(const Partition& part, const AtomSet& subset) {
    return std::all_of(subset.begin(), subset.end(), [&](AtomLabel label) {
        return std::binary_search(part.unbounded.begin(), part.unbounded.end(), label);
    });
}

} // namespace cesaro
