// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "cesaro/config.hpp"
#include "cesaro/corollaries.hpp"
#include "cesaro/decomposition.hpp"
#include "cesaro/errors.hpp"
#include "cesaro/family_library.hpp"
#include "cesaro/growth.hpp"
#include "cesaro/limits.hpp"
#include "cesaro/oracle.hpp"
#include "cesaro/runner.hpp"
#include "cesaro/slln.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace cesaro;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = CESARO_SOURCE_DIR;

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

std::vector<fs::path> json_files(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

SequenceWindow horizon_window(const ExperimentConfig& config) {
    return SequenceWindow::prefix(build_family(config), config.window->horizon, build_space(config));
}

std::vector<SimpleRV> rows_of(const Trajectory& t) {
    std::vector<SimpleRV> rows;
    rows.reserve(t.length());
    for (std::size_t k = 1; k <= t.length(); ++k) rows.push_back(row_rv(t, k));
    return rows;
}

AtomicSpace random_space(std::mt19937_64& rng, std::size_t atoms) {
    std::uniform_real_distribution<double> u(0.5, 1.5);
    std::vector<double> masses(atoms);
    for (auto& m : masses) m = u(rng);
    const double total = std::accumulate(masses.begin(), masses.end(), 0.0);
    for (auto& m : masses) m /= total;
    double head = 0.0;
    for (std::size_t i = 0; i + 1 < atoms; ++i) head += masses[i];
    masses.back() = 1.0 - head;
    return AtomicSpace(masses);
}

AtomSeries random_bounded(std::mt19937_64& rng, double cap) {
    std::uniform_real_distribution<double> u(0.1, cap);
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: return series::constant(u(rng));
    case 1: return series::periodic({u(rng), u(rng)});
    case 2: return series::abs_sine(u(rng));
    default: return series::burst(3, std::uniform_int_distribution<std::uint64_t>(0, 2)(rng), u(rng), 0.0, 0.1);
    }
}

//==============================================================================
// Criteria
//==============================================================================

// {ξ < ∞} = Ω_b = Ω̄_b on every shipped declared family.
Outcome prop_main_on_shipped_families() {
    const auto start = Clock::now();
    const auto files = json_files(kSource / "configs" / "acceptance");
    std::size_t held = 0;
    std::string first_failure;
    for (const auto& file : files) {
        const auto config = load_config(file);
        const auto window = horizon_window(config);
        const auto report = verify_prop_main(window, build_limit_params(config), config.mode);
        const bool atoms_ok = window.space().size() >= 3 && window.space().size() <= 20;
        if (report.holds() && atoms_ok) ++held;
        else if (first_failure.empty()) first_failure = file.filename().string();
    }
    const double elapsed = seconds_since(start);
    Outcome out;
    out.pass = files.size() >= 30 && held == files.size() && elapsed < 10.0;
    out.detail = fmt("%zu/%zu families hold in %.2f s (limit 10 s)", held, files.size(), elapsed);
    if (!first_failure.empty()) out.detail += ", first failure " + first_failure;
    return out;
}

// Per-ε decision against the brute-force oracle on random declared families.
Outcome decision_matches_oracle() {
    constexpr std::size_t kFamilies = 50;
    constexpr std::uint64_t kHorizon = 2048;
    const std::vector<double> eps_grid{0.5, 0.1, 0.01};
    const auto grid = linear_grid(0.0, 100.0, 64);
    std::mt19937_64 rng(2024);
    std::size_t agree = 0, total = 0;
    std::string first_failure;
    for (std::size_t f = 0; f < kFamilies; ++f) {
        const std::size_t atoms = std::uniform_int_distribution<std::size_t>(3, 10)(rng);
        const auto space = random_space(rng, atoms);
        const double bounded_share = f % 10 == 0 ? 1.0 : f % 10 == 1 ? 0.0 : 0.6;
        std::vector<AtomSeries> series_list;
        for (std::size_t a = 0; a < atoms; ++a) {
            if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < bounded_share) {
                series_list.push_back(random_bounded(rng, 10.0));
            } else {
                // reaches at least 1000 inside the window
                const double alpha = std::uniform_real_distribution<double>(1.0, 1.5)(rng);
                const double scale = 1000.0 / std::pow(static_cast<double>(kHorizon), alpha) *
                                     std::uniform_real_distribution<double>(1.0, 3.0)(rng);
                series_list.push_back(series::power(scale, alpha));
            }
        }
        const auto window = SequenceWindow::prefix(per_atom_family(std::move(series_list)), kHorizon, space);
        const auto members = rows_of(evaluate_all(window));
        const auto all = space.all_atoms();
        for (double eps : eps_grid) {
            const auto decision = bounded_in_probability(window, all, eps);
            OracleOptions options;
            options.samples = 1000;
            options.seed = 1000 + f;
            const auto oracle = brute_force_boundedness_oracle(members, space, eps, grid, options);
            bool ok = is_bounded(decision) == oracle.bounded;
            if (ok && oracle.bounded) {
                // the decided level is sufficient, so the oracle's least level cannot exceed it
                const double m = std::get<BoundedWithM>(decision).M;
                const auto at_or_above = std::lower_bound(grid.begin(), grid.end(), m);
                ok = at_or_above != grid.end() && oracle.M <= *at_or_above;
            }
            ++total;
            if (ok) ++agree;
            else if (first_failure.empty()) first_failure = fmt("family %zu eps %g", f, eps);
        }
    }
    Outcome out;
    out.pass = agree == total;
    out.detail = fmt("%zu/%zu (family, eps) decisions agree with the oracle", agree, total);
    if (!first_failure.empty()) out.detail += ", first failure " + first_failure;
    return out;
}

// Q is a probability with full support and the window is L1(Q)-bounded on U_b.
Outcome certificates_on_shipped_families() {
    std::size_t checked = 0, good = 0;
    double worst_sum = 0.0, worst_gap = -1.0;
    std::string first_failure;
    for (const auto& file : json_files(kSource / "configs" / "acceptance")) {
        const auto config = load_config(file);
        const auto window = horizon_window(config);
        const auto part = partition(window, config.mode);
        if (part.bounded.empty()) continue;
        ++checked;
        const auto measure = build_equivalent_measure(window.space(), part);
        const auto cert = certify_l1_bound(window, part, measure);
        const auto probs = measure.probabilities();
        const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
        const bool positive = std::all_of(probs.begin(), probs.end(), [](double q) { return q > 0.0; });

        // independent recomputation of sup_k E_Q[ξ_{n_k} 1_{U_b}]
        const auto& space = window.space();
        std::vector<std::size_t> positions;
        for (auto label : part.bounded) positions.push_back(space.require_position(label));
        const auto values = evaluate_all(window);
        double sup = 0.0;
        for (std::size_t k = 1; k <= values.length(); ++k) {
            double e = 0.0;
            for (auto p : positions) e += probs[p] * values.at(k, p);
            sup = std::max(sup, e);
        }
        const bool sup_matches = std::abs(sup - cert.checked_sup) <= 1e-12 * std::max(1.0, sup);
        const bool within = cert.checked_sup <= cert.l1_bound + 1e-9;
        worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
        worst_gap = std::max(worst_gap, cert.checked_sup - cert.l1_bound);
        if (std::abs(sum - 1.0) <= 1e-12 && positive && sup_matches && within) ++good;
        else if (first_failure.empty()) first_failure = file.filename().string();
    }
    Outcome out;
    out.pass = checked > 0 && good == checked;
    out.detail = fmt("%zu/%zu certificates valid, max |sum Q - 1| = %.2e, max (sup - bound) = %.3g", good, checked,
                     worst_sum, worst_gap);
    if (!first_failure.empty()) out.detail += ", first failure " + first_failure;
    return out;
}

// Both equivalence chains hold in full on their families.
Outcome equivalence_chains() {
    std::mt19937_64 rng(77);
    std::size_t finite_ok = 0, infinite_ok = 0;
    std::string first_failure;
    for (std::size_t f = 0; f < 10; ++f) {
        const std::size_t atoms = std::uniform_int_distribution<std::size_t>(3, 12)(rng);
        std::vector<AtomSeries> list;
        for (std::size_t a = 0; a < atoms; ++a) list.push_back(random_bounded(rng, 3.0));
        const auto window = SequenceWindow::prefix(per_atom_family(std::move(list)), 4096, random_space(rng, atoms));
        const auto chain = finite_limit_chain(window);
        if (chain.all_true()) ++finite_ok;
        else if (first_failure.empty()) first_failure = fmt("bounded family %zu", f);
    }
    for (std::size_t f = 0; f < 5; ++f) {
        const std::size_t atoms = std::uniform_int_distribution<std::size_t>(3, 12)(rng);
        std::vector<AtomSeries> list;
        for (std::size_t a = 0; a < atoms; ++a) {
            if (a % 3 == 2) list.push_back(series::squares(std::uniform_real_distribution<double>(0.5, 2.0)(rng)));
            else list.push_back(series::power(std::uniform_real_distribution<double>(0.01, 1.0)(rng),
                                              std::uniform_real_distribution<double>(0.5, 1.5)(rng)));
        }
        const auto window = SequenceWindow::prefix(per_atom_family(std::move(list)), 4096, random_space(rng, atoms));
        const auto chain = infinite_limit_chain(window);
        if (chain.all_true()) ++infinite_ok;
        else if (first_failure.empty()) first_failure = fmt("unbounded family %zu", f);
    }
    Outcome out;
    out.pass = finite_ok == 10 && infinite_ok == 5;
    out.detail = fmt("finite chain %zu/10, infinite chain %zu/5", finite_ok, infinite_ok);
    if (!first_failure.empty()) out.detail += ", first failure " + first_failure;
    return out;
}

// Both SLLN branches across 100 seeds.
Outcome slln_branches() {
    const auto start = Clock::now();
    constexpr std::size_t kLength = 100000;
    std::size_t close = 0, fired = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        GeneratorSpec spec;
        spec.kind = IIDKind{Distribution::exponential(1.0)};
        spec.length = kLength;
        spec.paths = 1;
        spec.seed = seed;
        if (std::abs(generate(spec).final_cesaro(0) - 1.0) < 0.02) ++close;
        spec.kind = IIDKind{Distribution::pareto(0.5)};
        if (diverges(generate(spec).cesaro_path(0))) ++fired;
    }
    const double elapsed = seconds_since(start);
    Outcome out;
    out.pass = close >= 95 && fired >= 95 && elapsed < 60.0;
    out.detail = fmt("Exp(1) within 0.02 of 1 in %zu/100, Pareto(0.5) diverges in %zu/100, %.1f s (limit 60 s)",
                     close, fired, elapsed);
    return out;
}

// Empirical variance condition for antithetic pairs; fully correlated specs are rejected.
Outcome variance_condition() {
    GeneratorSpec spec;
    spec.kind = CorrelatedVarianceKind{1.0, 0.2, 0.0, CorrelationRule::Antithetic, 1.0};
    spec.length = 4096;
    spec.paths = 500;
    spec.seed = 31;
    const auto report = verify_variance_condition(generate(spec), 1.0);
    const double slack = 3.0 / std::sqrt(500.0);
    double worst = 0.0;
    bool every_row = !report.rows.empty();
    std::vector<std::size_t> dyadic;
    for (const auto& row : report.rows) {
        worst = std::max(worst, row.ratio);
        every_row = every_row && row.ratio <= 1.0 + slack;
        if ((row.N & (row.N - 1)) == 0) dyadic.push_back(row.N);
    }
    bool covers = dyadic.size() == 13;
    for (std::size_t j = 0; covers && j < dyadic.size(); ++j) covers = dyadic[j] == (std::size_t{1} << j);

    auto full = spec;
    std::get<CorrelatedVarianceKind>(full.kind).rule = CorrelationRule::FullyCorrelated;
    bool rejected = false;
    try {
        validate(full);
    } catch (const SpecError&) {
        rejected = true;
    }
    Outcome out;
    out.pass = report.holds && every_row && covers && rejected;
    out.detail = fmt("max ratio %.4f <= %.4f over N = 1..4096 (%zu dyadic rows), fully correlated spec %s", worst,
                     1.0 + slack, dyadic.size(), rejected ? "rejected" : "accepted");
    return out;
}

// Reordering the window leaves the full-window mean unchanged.
Outcome permutation_invariance() {
    std::mt19937_64 rng(404);
    const std::vector<std::pair<CoefficientFamily, bool>> families{
        {per_atom_family({series::constant(3.0), series::periodic({0.0, 5.0}), series::power(1.0, 1.0)}), true},
        {per_atom_family({series::squares(1.0), series::constant(1.0), series::periodic({2.0, 7.0, 1.0})}), true},
        {per_atom_family({series::power(1.0, 2.0), series::burst(4, 1, 9.0, 0.0, 1.0), series::constant(0.0)}), true},
        {per_atom_family({series::periodic({1.0, 2.0, 3.0, 4.0}), series::constant(11.0), series::power(2.0, 1.0)}), true},
        {power_family(1.0, {1.0, 2.0, 3.0}), true},
        {per_atom_family({series::abs_sine(2.0), series::power(0.3, 0.5), series::logarithmic(1.0)}), false},
        {per_atom_family({series::constant(0.1), series::periodic({0.3, 0.7}), series::abs_sine(1.0)}), false},
        {sampled_family(Distribution::exponential(1.0), 5), false},
        {power_family(0.75), false},
        {sampled_family(Distribution::pareto(0.5), 9), false},
    };
    std::size_t good = 0;
    std::string first_failure;
    for (std::size_t f = 0; f < families.size(); ++f) {
        const auto& [family, integer_valued] = families[f];
        const auto window = SequenceWindow::prefix(family, 2000 + 97 * f, AtomicSpace::uniform(3));
        const auto values = evaluate_all(window);
        const auto reference = row_rv(cesaro_all(values), values.length());
        std::vector<std::size_t> order(values.length());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), rng);
        const auto permuted = permuted_final_mean(values, order);
        bool ok = true;
        for (std::size_t p = 0; p < reference.size(); ++p) {
            ok = ok && (integer_valued ? permuted[p] == reference[p]
                                       : std::abs(permuted[p] - reference[p]) <= 1e-12 * std::abs(reference[p]));
        }
        if (ok) ++good;
        else if (first_failure.empty()) first_failure = fmt("window %zu", f);
    }
    Outcome out;
    out.pass = good == families.size();
    out.detail = fmt("%zu/%zu windows (5 bitwise, 5 within 1e-12 relative)", good, families.size());
    if (!first_failure.empty()) out.detail += ", first failure " + first_failure;
    return out;
}

// Reports do not depend on reruns or the number of jobs.
Outcome determinism() {
    const auto files = json_files(kSource / "configs" / "regression");
    std::size_t same = 0;
    std::string first_failure;
    for (const auto& file : files) {
        const auto config = load_config(file);
        const auto a = run(config, {.jobs = 1, .write_files = false});
        const auto b = run(config, {.jobs = 1, .write_files = false});
        const auto c = run(config, {.jobs = 4, .write_files = false});
        const auto va = a.verdict_section().dump();
        const bool ok = va == b.verdict_section().dump() && va == c.verdict_section().dump() &&
                        a.to_json(false).dump() == c.to_json(false).dump();
        if (ok) ++same;
        else if (first_failure.empty()) first_failure = file.filename().string();
    }
    Outcome out;
    out.pass = !files.empty() && same == files.size();
    out.detail = fmt("%zu/%zu regression configs identical across reruns and jobs 1/4", same, files.size());
    if (!first_failure.empty()) out.detail += ", first failure " + first_failure;
    return out;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"prop-main on declared families", prop_main_on_shipped_families},
        {"decision agrees with brute-force oracle", decision_matches_oracle},
        {"equivalent measure and L1(Q) certificate", certificates_on_shipped_families},
        {"finite and infinite equivalence chains", equivalence_chains},
        {"SLLN branches", slln_branches},
        {"variance condition and rule rejection", variance_condition},
        {"permutation invariance of the window mean", permutation_invariance},
        {"determinism across reruns and jobs", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("threw: ") + e.what()};
        }
        if (!out.pass) ++failures;
        std::printf("%s %zu %s: %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), out.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
