#include "cesaro/corollaries.hpp"
#include "cesaro/distribution.hpp"
#include "cesaro/errors.hpp"
#include "cesaro/family_library.hpp"
#include "cesaro/limits.hpp"

#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

using namespace cesaro;

namespace {

CoefficientFamily linear_on_atom_two() {
    return CoefficientFamily([](std::uint64_t n, AtomLabel m) { return m.value == 2 ? static_cast<double>(n) : 0.0; },
                             [](AtomLabel m) -> AtomMeta {
                                 if (m.value == 2) return Unbounded{};
                                 return Bounded{0.0};
                             },
                             "n on atom 2");
}

CoefficientFamily odd_spikes() {
    return CoefficientFamily([](std::uint64_t n, AtomLabel) { return n % 2 == 1 ? static_cast<double>(n) : 0.0; },
                             [](AtomLabel) -> AtomMeta { return Unknown{}; }, "1{n odd} n");
}

std::vector<SimpleRV> rows(const Trajectory& t) {
    std::vector<SimpleRV> out;
    for (std::size_t k = 1; k <= t.length(); ++k) out.push_back(row_rv(t, k));
    return out;
}

} // namespace

TEST_CASE("limit profile of reference families") {
    const auto space = AtomicSpace::uniform(3);
    const auto five = limit_profile(SequenceWindow::prefix(constant_family(5.0), 256, space));
    CHECK(five.finite_set == space.all_atoms());
    for (const auto& l : five.limits) CHECK(l.value == 5.0);

    const auto lin = limit_profile(SequenceWindow::prefix(linear_on_atom_two(), 4096, space));
    CHECK(lin.at(AtomLabel(2)).kind == LimitKind::Infinite);
    CHECK(std::isinf(lin.at(AtomLabel(2)).value));
    CHECK(lin.at(AtomLabel(1)).value == 0.0);
    CHECK(lin.at(AtomLabel(3)).value == 0.0);
    CHECK(lin.finite_set == labels_from({1, 3}));
    CHECK(lin.as_rv().kind() == RVKind::LimitObject);

    CoefficientFamily alt([](std::uint64_t n, AtomLabel) { return n % 2 == 1 ? 1.0 : 0.0; },
                          [](AtomLabel) -> AtomMeta { return Bounded{1.0}; }, "alternating");
    const auto half = limit_profile(SequenceWindow::prefix(alt, 4096, space));
    CHECK(half.finite_set == space.all_atoms());
    for (const auto& l : half.limits) CHECK(l.value == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("oscillating means are reported as NoLimit") {
    // Blocks of doubling length alternate between 0 and 1, so the mean swings forever.
    CoefficientFamily swing([](std::uint64_t n, AtomLabel) { return (std::bit_width(n) % 2 == 0) ? 1.0 : 0.0; },
                            [](AtomLabel) -> AtomMeta { return Bounded{1.0}; }, "swing");
    const auto p = limit_profile(SequenceWindow::prefix(swing, 8192, AtomicSpace::uniform(1)));
    CHECK(p.no_limit == labels_from({1}));
    CHECK_FALSE(p.converged());
}

TEST_CASE("limit profile needs a window of twice the stability span") {
    LimitParams params;
    params.stability_span = 50;
    CHECK_THROWS_AS(limit_profile(SequenceWindow::prefix(constant_family(1.0), 99, AtomicSpace::uniform(1)), params),
                    StructuralError);
    CHECK_NOTHROW(limit_profile(SequenceWindow::prefix(constant_family(1.0), 100, AtomicSpace::uniform(1)), params));
}

TEST_CASE("finite set matches both bounded sets") {
    const AtomicSpace two({0.5, 0.5});
    const auto mixed = verify_prop_main(SequenceWindow::prefix(
        per_atom_family({series::constant(1.0), series::power(1.0, 1.0)}), 4096, two));
    CHECK(mixed.holds());
    CHECK(mixed.finite_set == labels_from({1}));
    CHECK(mixed.omega_b == labels_from({1}));
    CHECK(mixed.omega_bar_b == labels_from({1}));

    const auto constant = verify_prop_main(SequenceWindow::prefix(constant_family(3.0), 512, two));
    CHECK(constant.holds());
    CHECK(constant.finite_set == two.all_atoms());

    CoefficientFamily lin([](std::uint64_t n, AtomLabel) { return static_cast<double>(n); },
                          [](AtomLabel) -> AtomMeta { return Unbounded{}; }, "n");
    const auto diverging = verify_prop_main(SequenceWindow::prefix(lin, 4096, two));
    CHECK(diverging.holds());
    CHECK(diverging.finite_set.empty());
    CHECK(diverging.omega_b.empty());
    CHECK(diverging.omega_bar_b.empty());
}

TEST_CASE("subsequence selection") {
    const auto space = AtomicSpace::uniform(2);
    SUBCASE("already convergent family keeps the identity window") {
        const auto s = komlos_select(constant_family(2.0), space, 1024, 64);
        CHECK(s.identity);
        CHECK(s.window.length() == 1024);
        CHECK(s.window.index(1) == 1);
        CHECK(s.window.index(1024) == 1024);
    }
    SUBCASE("spikes on odd indices are thinned out") {
        const auto s = komlos_select(odd_spikes(), space, 4096, 64);
        CHECK_FALSE(s.identity);
        CHECK_FALSE(s.fallback);
        for (auto n : s.window.indices()) CHECK(n % 2 == 0);
        CHECK(s.window.length() >= 4096 / 4);
        const auto p = limit_profile(s.window);
        CHECK(p.converged());
        CHECK(p.at(AtomLabel(1)).value == 0.0);
    }
    SUBCASE("declared unbounded atoms do not constrain the selection") {
        const auto s = komlos_select(odd_spikes().with_meta([](AtomLabel) -> AtomMeta { return Unbounded{}; }), space,
                                     1024, 64);
        CHECK(s.identity);
        CHECK(s.window.length() == 1024);
    }
    SUBCASE("horizon must cover four blocks") {
        CHECK_THROWS(komlos_select(constant_family(1.0), space, 100, 64));
    }
}

TEST_CASE("selected windows give the same limits on every long sub-window") {
    const AtomicSpace space({0.4, 0.3, 0.3});
    const auto family = per_atom_family({series::periodic({0.0, 1.0}), series::constant(2.0), series::power(1.0, 1.0)});
    const auto s = komlos_select(family, space, 4096, 64);
    const LimitParams params;
    const auto full = limit_profile(s.window, params);
    const std::size_t span = params.span_for(s.window.length());
    const auto idx = s.window.indices();
    for (std::size_t start : {std::size_t{0}, idx.size() / 8, idx.size() / 4}) {
        std::vector<std::uint64_t> sub(idx.begin() + static_cast<std::ptrdiff_t>(start), idx.end());
        if (sub.size() < 2 * span) continue;
        LimitParams fixed = params;
        fixed.stability_span = span;
        const auto p = limit_profile(SequenceWindow(family, sub, space), fixed);
        CHECK(p.finite_set == full.finite_set);
        for (auto label : full.finite_set)
            CHECK(std::abs(p.at(label).value - full.at(label).value) <= 2 * params.tol);
    }
}

TEST_CASE("final Cesaro mean is invariant under reordering the window") {
    std::mt19937_64 rng(2024);
    const auto space = AtomicSpace::uniform(3);
    const auto integer = SequenceWindow::prefix(
        per_atom_family({series::periodic({1.0, 4.0, 2.0}), series::power(1.0, 1.0), series::squares(1.0, 3.0)}), 1000,
        space);
    const auto values = evaluate_all(integer);
    std::vector<std::size_t> order(values.length());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const auto reference = row_rv(cesaro_all(values), values.length());
    CHECK(permuted_final_mean(values, order) == reference);
}

TEST_CASE("tightness via quantile envelopes") {
    const AtomicSpace space({0.5, 0.3, 0.2});
    const std::vector<double> eps{0.5, 0.1, 0.01};
    const SimpleRV x({1.0, 2.0, 3.0});
    const std::vector<SimpleRV> same(20, x);
    const auto t = tightness_check(same, space, eps);
    CHECK(t.tight);
    for (std::size_t e = 0; e < eps.size(); ++e) CHECK(t.envelope[e] == upper_quantile(space, x, eps[e]));
    CHECK(upper_quantile(space, x, 0.5) == 1.0);
    CHECK(upper_quantile(space, x, 0.1) == 3.0);

    CoefficientFamily lin([](std::uint64_t n, AtomLabel) { return static_cast<double>(n); },
                          [](AtomLabel) -> AtomMeta { return Unbounded{}; }, "n");
    const AtomicSpace one({1.0});
    CHECK_FALSE(tightness_check(rows(evaluate_all(SequenceWindow::prefix(lin, 512, one))), one, eps).tight);

    const auto sampled = SequenceWindow::prefix(sampled_family(Distribution::uniform(0.0, 2.0), 5), 2048, space);
    CHECK(tightness_check(rows(cesaro_all(sampled)), space, eps).tight);
    CHECK_THROWS(tightness_check(std::vector<SimpleRV>{}, space, eps));
}

TEST_CASE("weak convergence on a grid") {
    const AtomicSpace space({0.5, 0.5});
    const std::vector<SimpleRV> same(16, SimpleRV({1.0, 3.0}));
    CHECK(weak_convergence_check(same, space).converges);

    const auto c = SequenceWindow::prefix(constant_family(2.5), 64, space);
    const auto r = weak_convergence_check(rows(cesaro_all(c)), space);
    CHECK(r.converges);
    CHECK(r.tail_distance == 0.0);

    std::vector<SimpleRV> drift;
    for (int k = 1; k <= 64; ++k) drift.push_back(SimpleRV({1.0, static_cast<double>(k * k)}));
    CHECK_FALSE(weak_convergence_check(drift, space).converges);
    CHECK_THROWS(weak_convergence_check(std::vector<SimpleRV>(4, SimpleRV({1.0, 1.0})), space));
}

TEST_CASE("convergent subsequences of bounded hull samples") {
    const AtomicSpace space({0.4, 0.3, 0.3});
    const auto w = SequenceWindow::prefix(per_atom_family({series::periodic({0.0, 2.0}), series::constant(1.0),
                                                           series::periodic({1.0, 1.0, 4.0})}),
                                          1024, space);
    const auto members = rows(evaluate_all(w));
    CHECK_FALSE(weak_convergence_check(members, space).converges);
    const auto picked = extract_convergent_subsequence(members, space);
    REQUIRE(picked.size() >= 8);
    std::vector<SimpleRV> sub;
    for (auto i : picked) sub.push_back(members[i]);
    CHECK(weak_convergence_check(sub, space).converges);
}

TEST_CASE("equivalence chains on declared families") {
    const AtomicSpace space({0.4, 0.3, 0.2, 0.1});
    const auto bounded = SequenceWindow::prefix(
        per_atom_family({series::constant(1.0), series::periodic({0.0, 2.0}), series::constant(3.0),
                         series::periodic({1.0, 2.0, 3.0, 4.0})}),
        4096, space);
    const auto finite = finite_limit_chain(bounded);
    CHECK(finite.all_true());
    CHECK(finite.broken_edges().empty());

    const auto mixed = SequenceWindow::prefix(
        per_atom_family({series::constant(1.0), series::power(1.0, 1.0), series::constant(3.0), series::constant(1.0)}),
        4096, space);
    const auto broken = finite_limit_chain(mixed);
    CHECK(broken.all_false());

    CoefficientFamily lin([](std::uint64_t n, AtomLabel m) { return static_cast<double>(n * m.value); },
                          [](AtomLabel) -> AtomMeta { return Unbounded{}; }, "n m");
    const auto infinite = infinite_limit_chain(SequenceWindow::prefix(lin, 4096, space));
    CHECK(infinite.all_true());
}

TEST_CASE("finite chain with an irregular bounded atom next to periodic ones") {
    // the extracted subsequence has a smaller maximum than the full sample set
    const AtomicSpace space({0.238162, 0.338142, 0.186017, 0.237679});
    const auto window = SequenceWindow::prefix(
        per_atom_family({series::constant(0.218), series::burst(3, 1, 0.634, 0.0, 0.481), series::abs_sine(0.435),
                         series::periodic({0.571, 1.17})}),
        4096, space);
    CHECK(finite_limit_chain(window).all_true());
}

TEST_CASE("a pinned grid keeps extraction and the convergence check aligned") {
    const AtomicSpace space({0.5, 0.5});
    std::vector<SimpleRV> samples;
    for (std::size_t i = 1; i <= 64; ++i) samples.push_back(SimpleRV({i % 2 == 0 ? 1.0 : 4.0, 0.5 + 1e-4 * (i % 7)}));
    WeakConvergenceParams params;
    params.grid_high = 4.2;
    const auto picked = extract_convergent_subsequence(samples, space, params);
    REQUIRE(picked.size() >= 8);
    std::vector<SimpleRV> sub;
    for (auto i : picked) sub.push_back(samples[i]);
    const auto report = weak_convergence_check(sub, space, params);
    CHECK(report.grid.back() == 4.2);
    CHECK(report.converges);
}
