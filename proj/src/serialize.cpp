#include "cesaro/serialize.hpp"
#include "cesaro/errors.hpp"

#include <cmath>
#include <fstream>

namespace cesaro {

Json number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return value;
}

namespace {

Json numbers(std::span<const double> values) {
    Json out = Json::array();
    for (double v : values) out.push_back(number(v));
    return out;
}

Json labels(std::span<const AtomLabel> atoms) {
    Json out = Json::array();
    for (auto a : atoms) out.push_back(a.value);
    return out;
}

} // namespace

Json to_json(const AtomSet& atoms) { return labels(atoms); }

Json to_json(const Partition& part) {
    Json bounds = Json::object();
    for (const auto& [label, c] : part.bounds) bounds[std::to_string(label.value)] = number(c);
    return Json{{"J_b", labels(part.bounded)},
                {"J_u", labels(part.unbounded)},
                {"bounds", bounds},
                {"provenance", to_string(part.provenance)},
                {"probed", labels(part.probed)}};
}

Json to_json(const AtomicSpace& space, const BoundednessCertificate& cert, std::uint64_t seed) {
    return Json{{"atoms", labels(space.labels())},
                {"J_b", labels(cert.partition.bounded)},
                {"J_u", labels(cert.partition.unbounded)},
                {"q", numbers(cert.measure.weights())},
                {"K", number(cert.measure.normalizer())},
                {"Q", numbers(cert.measure.probabilities())},
                {"l1_bound", number(cert.l1_bound)},
                {"checked_sup", number(cert.checked_sup)},
                {"sup_position", cert.sup_position},
                {"provenance", to_string(cert.partition.provenance)},
                {"seed", seed}};
}

Json to_json(const LimitProfile& profile) {
    Json atoms = Json::array();
    for (std::size_t i = 0; i < profile.labels.size(); ++i) {
        atoms.push_back(Json{{"atom", profile.labels[i].value},
                             {"kind", to_string(profile.limits[i].kind)},
                             {"value", number(profile.limits[i].value)}});
    }
    return Json{{"atoms", atoms},
                {"finite_set", labels(profile.finite_set)},
                {"infinite_set", labels(profile.infinite_set)},
                {"no_limit", labels(profile.no_limit)},
                {"tol", profile.tol},
                {"stability_span", profile.stability_span},
                {"window_length", profile.window_length}};
}

Json to_json(const PropMainReport& report) {
    return Json{{"holds", report.holds()},
                {"conclusive", report.conclusive},
                {"finite_set", labels(report.finite_set)},
                {"omega_b", labels(report.omega_b)},
                {"omega_bar_b", labels(report.omega_bar_b)},
                {"finite_equals_b", report.finite_equals_b},
                {"b_equals_bar_b", report.b_equals_bar_b},
                {"finite_equals_bar_b", report.finite_equals_bar_b},
                {"no_limit_atoms", labels(report.no_limit_atoms)}};
}

Json to_json(const EquivalenceChain& chain) {
    Json statements = Json::array();
    for (const auto& s : chain.statements)
        statements.push_back(Json{{"label", s.label}, {"claim", s.claim}, {"value", s.value}});
    return Json{{"consistent", chain.consistent()},
                {"all_true", chain.all_true()},
                {"statements", statements},
                {"broken_edges", chain.broken_edges()}};
}

Json to_json(const TightnessReport& report) {
    return Json{{"tight", report.tight}, {"eps_grid", numbers(report.eps_grid)}, {"envelope", numbers(report.envelope)}};
}

Json to_json(const VarianceReport& report) {
    Json rows = Json::array();
    for (const auto& r : report.rows) {
        rows.push_back(Json{{"N", r.N},
                            {"var_of_sum", number(r.var_of_sum)},
                            {"sum_of_vars", number(r.sum_of_vars)},
                            {"ratio", number(r.ratio)},
                            {"holds", r.holds}});
    }
    return Json{{"holds", report.holds}, {"c", report.c}, {"slack", report.slack}, {"rows", rows}};
}

Json to_json(const RegimeReport& report) {
    Json converges = report.cesaro_converges ? Json(*report.cesaro_converges) : Json(nullptr);
    return Json{{"verdict", to_string(report.verdict)},
                {"mean_finite", report.mean_finite},
                {"paths_finite", report.paths_finite},
                {"paths_infinite", report.paths_infinite},
                {"paths_no_limit", report.paths_no_limit},
                {"cesaro_converges", converges},
                {"hull_bounded", report.hull_bounded},
                {"cesaro_hull_bounded", report.cesaro_hull_bounded},
                {"hull_levels", numbers(report.hull_levels)},
                {"cesaro_hull_levels", numbers(report.cesaro_hull_levels)},
                {"broken_edges", report.broken_edges}};
}

Json to_json(const BoundednessDecision& decision) {
    if (const auto* b = std::get_if<BoundedWithM>(&decision)) return Json{{"bounded", true}, {"M", number(b->M)}};
    return Json{{"bounded", false}, {"witness", std::get<UnboundedAt>(decision).witness.value}};
}

//==============================================================================
// CSV
//==============================================================================

namespace {

std::string csv_number(double v) {
    const auto j = number(v);
    return j.is_string() ? j.get<std::string>() : j.dump();
}

} // namespace

void write_trajectory_csv(std::ostream& out, const AtomicSpace& space, const Trajectory& values) {
    out << "k,atom,value\n";
    for (std::size_t k = 1; k <= values.length(); ++k) {
        for (std::size_t p = 0; p < values.atoms(); ++p)
            out << k << ',' << space.label(p).value << ',' << csv_number(values.at(k, p)) << '\n';
    }
}

void write_quantile_csv(std::ostream& out, const TightnessReport& report) {
    out << "k,atom,value\n";
    for (std::size_t i = 0; i < report.quantiles.size(); ++i) {
        for (std::size_t e = 0; e < report.eps_grid.size(); ++e)
            out << i + 1 << ',' << csv_number(report.eps_grid[e]) << ',' << csv_number(report.quantiles[i][e]) << '\n';
    }
}

void write_paths_csv(std::ostream& out, const EmpiricalRun& run) {
    out << "path,n,value\n";
    for (std::size_t p = 0; p < run.paths; ++p) {
        for (std::size_t n = 1; n <= run.length; ++n) out << p << ',' << n << ',' << csv_number(run.at(p, n)) << '\n';
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
    if (!out) throw ConfigError("write failed for " + path.string());
}

} // namespace cesaro
