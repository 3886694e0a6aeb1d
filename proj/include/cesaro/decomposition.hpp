#pragma once

#include "cesaro/atomic_space.hpp"
#include "cesaro/families.hpp"
#include "cesaro/growth.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>

namespace cesaro {

enum class Mode { Exact, Heuristic };
enum class Provenance { Exact, Heuristic };

std::string to_string(Mode mode);
std::string to_string(Provenance provenance);
Mode parse_mode(const std::string& text);

/// The split {Ω_b, Ω_u} of the tracked atoms for a convex hull, with the
/// per-atom bounds C_m (≥ 1) of the bounded side.
struct Partition {
    AtomSet bounded;
    AtomSet unbounded;
    std::map<AtomLabel, double> bounds;
    Provenance provenance = Provenance::Exact;
    AtomSet probed;   // atoms classified by the growth probe

    friend bool operator==(const Partition&, const Partition&) = default;
};

/// Partition of C = conv{ξ_{n_k}}. In exact mode every atom needs declared
/// metadata (MetadataError lists the Unknown atoms) and Bounded declarations
/// are spot-checked on the window. Heuristic mode probes Unknown atoms.
Partition partition(const SequenceWindow& window, Mode mode = Mode::Exact, const GrowthParams& growth = {});
/// Partition of C̄ = conv{ξ̄_{n_k}}.
Partition partition(const CesaroFamily& hull, Mode mode = Mode::Exact, const GrowthParams& growth = {});

/// q_m = 2^-m / C_m on the bounded side, 2^-m on the unbounded side, with m
/// the atom's original label; Q(A_m) = q_m / K.
EquivalentMeasure build_equivalent_measure(const AtomicSpace& space, const Partition& part);
EquivalentMeasure build_equivalent_measure(const AtomicSpace& space, const Partition& part,
                                           const std::map<AtomLabel, double>& bounds);

/// (1/K) Σ_{m∈J_b} 2^-m.
double l1_bound(const Partition& part, const EquivalentMeasure& measure);

struct BoundednessCertificate {
    EquivalentMeasure measure;
    double l1_bound = 0.0;
    double checked_sup = 0.0;
    std::size_t sup_position = 0;   // window position attaining checked_sup (0 when J_b is empty)
    Partition partition;
};

/// sup_k E_Q[ξ_{n_k} 1_{U_b}] over the window, checked against l1_bound + 1e-9.
/// Throws CertificateError naming the violating position and atom.
BoundednessCertificate certify_l1_bound(const SequenceWindow& window, const Partition& part,
                                        const EquivalentMeasure& measure);

//==============================================================================
// Boundedness in probability
//==============================================================================

struct BoundedWithM {
    double M = 0.0;
    friend bool operator==(const BoundedWithM&, const BoundedWithM&) = default;
};
struct UnboundedAt {
    AtomLabel witness;
    friend bool operator==(const UnboundedAt&, const UnboundedAt&) = default;
};
using BoundednessDecision = std::variant<BoundedWithM, UnboundedAt>;

inline bool is_bounded(const BoundednessDecision& d) { return std::holds_alternative<BoundedWithM>(d); }

/// Decides whether sup_{X∈C|_B} P(X > M) < ε for some M, with B = restrict_to.
///
/// Unbounded atoms of B contribute their full mass for every M, so the hull is
/// bounded at level ε exactly when their total mass is below ε; M is then the
/// largest C_m over the bounded atoms of B, taken in label order, needed to
/// push the uncovered mass below ε. The witness is the heaviest unbounded atom.
BoundednessDecision bounded_in_probability(const SequenceWindow& window, const AtomSet& restrict_to, double epsilon,
                                           Mode mode = Mode::Exact, const GrowthParams& growth = {});
BoundednessDecision bounded_in_probability(const CesaroFamily& hull, const AtomSet& restrict_to, double epsilon,
                                           Mode mode = Mode::Exact, const GrowthParams& growth = {});
/// Same decision from a precomputed partition.
BoundednessDecision bounded_in_probability(const AtomicSpace& space, const Partition& part,
                                           const AtomSet& restrict_to, double epsilon);

/// Bounded in probability at every level ε > 0: B contains no unbounded atom.
/// The witness is then the first unbounded atom of B in label order.
BoundednessDecision bounded_for_all_levels(const Partition& part, const AtomSet& restrict_to);

/// True iff every atom of `subset` lies in J_u. On an atomic space every
/// positive-probability subset of U_u contains a whole unbounded atom.
/// The empty subset is vacuously hereditarily unbounded.
bool hereditarily_unbounded(const Partition& part, const AtomSet& subset);

} // namespace cesaro
