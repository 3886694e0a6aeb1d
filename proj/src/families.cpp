#include "cesaro/families.hpp"
#include "cesaro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace cesaro {

bool is_bounded(const AtomMeta& meta) { return std::holds_alternative<Bounded>(meta); }
bool is_unbounded(const AtomMeta& meta) { return std::holds_alternative<Unbounded>(meta); }
bool is_unknown(const AtomMeta& meta) { return std::holds_alternative<Unknown>(meta); }

//==============================================================================
// CoefficientFamily
//==============================================================================

CoefficientFamily::CoefficientFamily(Evaluator evaluator, MetaRule meta, std::string description)
    : evaluator_(std::move(evaluator)), meta_(std::move(meta)), description_(std::move(description)) {
    if (!evaluator_) throw StructuralError("coefficient family needs an evaluator");
    if (!meta_) meta_ = [](AtomLabel) -> AtomMeta { return Unknown{}; };
}

CoefficientFamily::CoefficientFamily(Evaluator evaluator, std::vector<AtomMeta> meta, std::string description)
    : CoefficientFamily(
          std::move(evaluator),
          [table = std::move(meta)](AtomLabel m) -> AtomMeta {
              if (m.value == 0 || m.value > table.size()) return Unknown{};
              return table[m.value - 1];
          },
          std::move(description)) {}

double CoefficientFamily::coefficient(std::uint64_t n, AtomLabel m) const {
    const double c = evaluator_(n, m);
    if (!std::isfinite(c) || c < 0.0) {
        std::ostringstream os;
        os << "family '" << description_ << "': c(" << n << "," << m.value << ") = " << c
           << " is not a finite nonnegative value";
        throw StructuralError(os.str());
    }
    return c;
}

AtomMeta CoefficientFamily::meta(AtomLabel m) const {
    AtomMeta meta = meta_(m);
    if (auto* b = std::get_if<Bounded>(&meta)) b->bound = std::max(b->bound, 1.0);
    return meta;
}

CoefficientFamily CoefficientFamily::with_meta(MetaRule meta) const {
    return CoefficientFamily(evaluator_, std::move(meta), description_);
}

//==============================================================================
// Trajectory / SequenceWindow
//==============================================================================

Trajectory::Trajectory(std::size_t length, std::size_t atoms)
    : length_(length), atoms_(atoms), data_(length * atoms, 0.0) {}

std::vector<double> Trajectory::column(std::size_t position) const {
    std::vector<double> out(length_);
    for (std::size_t k = 1; k <= length_; ++k) out[k - 1] = at(k, position);
    return out;
}

SequenceWindow::SequenceWindow(CoefficientFamily family, std::vector<std::uint64_t> indices, AtomicSpace space)
    : family_(std::move(family)), indices_(std::move(indices)), space_(std::move(space)) {
    if (indices_.empty()) throw StructuralError("sequence window needs at least one index");
    if (indices_.front() == 0) throw StructuralError("sequence indices start at 1");
    for (std::size_t i = 1; i < indices_.size(); ++i) {
        if (indices_[i] <= indices_[i - 1]) throw StructuralError("sequence window indices must be strictly increasing");
    }
}

SequenceWindow SequenceWindow::prefix(CoefficientFamily family, std::uint64_t horizon, AtomicSpace space) {
    std::vector<std::uint64_t> indices(horizon);
    for (std::uint64_t i = 0; i < horizon; ++i) indices[i] = i + 1;
    return SequenceWindow(std::move(family), std::move(indices), std::move(space));
}

std::uint64_t SequenceWindow::index(std::size_t k) const {
    if (k < 1 || k > indices_.size()) {
        throw StructuralError("window position " + std::to_string(k) + " outside 1.." +
                              std::to_string(indices_.size()));
    }
    return indices_[k - 1];
}

SequenceWindow SequenceWindow::with_space(AtomicSpace space) const {
    return SequenceWindow(family_, indices_, std::move(space));
}

//==============================================================================
// Evaluation
//==============================================================================

SimpleRV evaluate(const SequenceWindow& window, std::size_t k) {
    const auto n = window.index(k);
    const auto& space = window.space();
    std::vector<double> values(space.size());
    for (std::size_t pos = 0; pos < space.size(); ++pos) values[pos] = window.family().coefficient(n, space.label(pos));
    return SimpleRV(std::move(values));
}

SimpleRV cesaro(const SequenceWindow& window, std::size_t k) {
    window.index(k);
    const auto& space = window.space();
    std::vector<double> sums(space.size(), 0.0);
    for (std::size_t l = 1; l <= k; ++l) {
        const auto n = window.index(l);
        for (std::size_t pos = 0; pos < space.size(); ++pos) sums[pos] += window.family().coefficient(n, space.label(pos));
    }
    for (auto& s : sums) s /= static_cast<double>(k);
    return SimpleRV(std::move(sums));
}

Trajectory evaluate_all(const SequenceWindow& window) {
    const auto& space = window.space();
    Trajectory out(window.length(), space.size());
    for (std::size_t k = 1; k <= window.length(); ++k) {
        const auto n = window.index(k);
        for (std::size_t pos = 0; pos < space.size(); ++pos) out.at(k, pos) = window.family().coefficient(n, space.label(pos));
    }
    return out;
}

Trajectory cesaro_all(const Trajectory& values) {
    Trajectory out(values.length(), values.atoms());
    std::vector<double> sums(values.atoms(), 0.0);
    for (std::size_t k = 1; k <= values.length(); ++k) {
        for (std::size_t pos = 0; pos < values.atoms(); ++pos) {
            sums[pos] += values.at(k, pos);
            out.at(k, pos) = sums[pos] / static_cast<double>(k);
        }
    }
    return out;
}

Trajectory cesaro_all(const SequenceWindow& window) {
    return cesaro_all(evaluate_all(window));
}

SimpleRV row_rv(const Trajectory& trajectory, std::size_t k) {
    if (k < 1 || k > trajectory.length()) throw StructuralError("trajectory position out of range");
    auto row = trajectory.row(k);
    return SimpleRV(std::vector<double>(row.begin(), row.end()));
}

SimpleRV convex_combination(std::span<const SimpleRV> rvs, std::span<const double> weights) {
    if (rvs.empty()) throw StructuralError("convex combination of an empty family");
    if (rvs.size() != weights.size()) throw StructuralError("convex combination: weight count does not match");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw StructuralError("convex combination: weights must be nonnegative");
        total += w;
    }
    if (std::abs(total - 1.0) > kMeasureTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "convex combination: weights sum to " << total << ", expected 1";
        throw StructuralError(os.str());
    }
    const std::size_t n = rvs.front().size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < rvs.size(); ++i) {
        if (rvs[i].size() != n) throw StructuralError("convex combination: random variable lengths differ");
        for (std::size_t pos = 0; pos < n; ++pos) out[pos] += weights[i] * rvs[i][pos];
    }
    return SimpleRV(std::move(out));
}

//==============================================================================
// CesaroFamily
//==============================================================================

namespace {

SequenceWindow make_cesaro_window(const SequenceWindow& base, std::shared_ptr<const Trajectory> means) {
    std::map<AtomLabel, std::size_t> positions;
    const auto& space = base.space();
    for (std::size_t pos = 0; pos < space.size(); ++pos) positions.emplace(space.label(pos), pos);

    auto evaluator = [means, positions](std::uint64_t k, AtomLabel m) -> double {
        auto it = positions.find(m);
        if (it == positions.end() || k < 1 || k > means->length())
            throw StructuralError("Cesaro family evaluated outside its window");
        return means->at(static_cast<std::size_t>(k), it->second);
    };
    auto meta = [family = base.family()](AtomLabel m) -> AtomMeta { return family.meta(m); };
    return SequenceWindow::prefix(CoefficientFamily(std::move(evaluator), std::move(meta),
                                                    "cesaro(" + base.family().description() + ")"),
                                  means->length(), space);
}

} // namespace

CesaroFamily::CesaroFamily(SequenceWindow base)
    : base_(std::move(base)),
      means_(std::make_shared<const Trajectory>(cesaro_all(base_))),
      window_(make_cesaro_window(base_, means_)) {}

void check_declared_bounds(const SequenceWindow& window) {
    const auto& space = window.space();
    for (std::size_t pos = 0; pos < space.size(); ++pos) {
        const auto label = space.label(pos);
        const auto meta = window.family().meta(label);
        const auto* b = std::get_if<Bounded>(&meta);
        // running means of values at the bound may round a few ulps above it
        const double limit = b ? b->bound * (1.0 + 1e-12) : 0.0;
        for (std::size_t k = 1; k <= window.length(); ++k) {
            const auto n = window.index(k);
            const double c = window.family().coefficient(n, label);
            if (b && c > limit) {
                std::ostringstream os;
                os << "family '" << window.family().description() << "': atom " << label.value
                   << " declared Bounded(" << b->bound << ") but c(" << n << "," << label.value << ") = " << c;
                throw MetadataError(os.str());
            }
        }
    }
}

} // namespace cesaro
