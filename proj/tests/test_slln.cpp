#include "cesaro/errors.hpp"
#include "cesaro/growth.hpp"
#include "cesaro/slln.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

using namespace cesaro;

namespace {

GeneratorSpec iid(Distribution law, std::size_t length, std::size_t paths, std::uint64_t seed) {
    GeneratorSpec s;
    s.kind = IIDKind{law};
    s.length = length;
    s.paths = paths;
    s.seed = seed;
    return s;
}

GeneratorSpec correlated(CorrelationRule rule, std::size_t length, std::size_t paths, double c = 1.0) {
    GeneratorSpec s;
    s.kind = CorrelatedVarianceKind{1.0, 0.2, 0.0, rule, c};
    s.length = length;
    s.paths = paths;
    s.seed = 12;
    return s;
}

std::string spec_error(const GeneratorSpec& spec) {
    try {
        validate(spec);
    } catch (const SpecError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("distribution moments and quantiles") {
    CHECK(Distribution::exponential(2.0).mean() == 0.5);
    CHECK(std::isinf(Distribution::pareto(0.5).mean()));
    CHECK(Distribution::pareto(3.0, 2.0).mean() == doctest::Approx(3.0));
    CHECK(std::isinf(Distribution::pareto(1.5).variance()));
    CHECK(Distribution::uniform(0.0, 2.0).variance() == doctest::Approx(1.0 / 3.0));
    CHECK(Distribution::exponential(1.0).quantile(0.5) == doctest::Approx(std::log(2.0)));
    CHECK(Distribution::pareto(0.5).quantile(0.75) == doctest::Approx(16.0));
    CHECK_THROWS_AS(Distribution::exponential(0.0), SpecError);
    CHECK_THROWS_AS(Distribution::uniform(2.0, 1.0), SpecError);
    CHECK_THROWS_AS(Distribution::uniform(-1.0, 1.0), SpecError);
    CHECK_THROWS_AS(Distribution::pareto(-1.0), SpecError);
}

TEST_CASE("identical spec and seed give bit-identical trajectories") {
    const auto spec = iid(Distribution::exponential(1.0), 1000, 8, 42);
    const auto a = generate(spec, 1);
    const auto b = generate(spec, 1);
    const auto c = generate(spec, 4);
    CHECK(a.values == b.values);
    CHECK(a.values == c.values);
    auto other = spec;
    other.seed = 43;
    CHECK(generate(other).values != a.values);
}

TEST_CASE("every generator kind stays nonnegative") {
    std::vector<GeneratorSpec> specs{iid(Distribution::pareto(0.5), 2000, 4, 1),
                                     iid(Distribution::uniform(0.0, 3.0), 2000, 4, 2),
                                     correlated(CorrelationRule::Antithetic, 2000, 4),
                                     correlated(CorrelationRule::Independent, 2000, 4)};
    GeneratorSpec md;
    md.kind = MDependentKind{Distribution::exponential(1.0), 2, {1.0, 0.5, 0.25}};
    md.length = 2000;
    md.paths = 4;
    specs.push_back(md);
    for (const auto& s : specs) {
        const auto run = generate(s);
        CHECK(std::all_of(run.values.begin(), run.values.end(), [](double v) { return v >= 0.0 && std::isfinite(v); }));
    }
}

TEST_CASE("m-dependent means settle at the declared mean") {
    GeneratorSpec s;
    s.kind = MDependentKind{Distribution::uniform(0.0, 2.0), 2, {}};
    s.length = 20000;
    s.paths = 20;
    s.seed = 8;
    CHECK(s.declared_mean() == 1.0);
    const auto run = generate(s);
    // lag 2 moving average of three innovations: Var[mean] <= (lag+1) Var[eps] / n
    const double sd = std::sqrt(3.0 * (1.0 / 3.0) / static_cast<double>(s.length));
    int inside = 0;
    for (std::size_t p = 0; p < run.paths; ++p) inside += std::abs(run.final_cesaro(p) - 1.0) <= 5.0 * sd ? 1 : 0;
    CHECK(inside >= 19);
}

TEST_CASE("m-dependent terms decouple beyond the lag") {
    // Terms lag + 1 apart share no innovation, so their products average to the squared mean.
    GeneratorSpec s;
    s.kind = MDependentKind{Distribution::uniform(0.0, 2.0), 1, {}};
    s.length = 200000;
    s.paths = 1;
    s.seed = 2;
    const auto run = generate(s);
    double near = 0.0, far = 0.0;
    const std::size_t n = run.length - 2;
    for (std::size_t i = 1; i <= n; ++i) {
        near += run.at(0, i) * run.at(0, i + 1);
        far += run.at(0, i) * run.at(0, i + 2);
    }
    near /= static_cast<double>(n);
    far /= static_cast<double>(n);
    CHECK(far == doctest::Approx(1.0).epsilon(0.01));
    CHECK(near > far + 0.05);
}

TEST_CASE("exponential Cesaro means approach one") {
    int inside = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto run = generate(iid(Distribution::exponential(1.0), 100000, 1, seed));
        inside += std::abs(run.final_cesaro(0) - 1.0) < 0.02 ? 1 : 0;
    }
    CHECK(inside >= 19);
}

TEST_CASE("Pareto(0.5) Cesaro means diverge") {
    int fired = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto run = generate(iid(Distribution::pareto(0.5), 100000, 1, seed));
        fired += diverges(run.cesaro_path(0)) ? 1 : 0;
    }
    CHECK(fired >= 18);
}

TEST_CASE("generator specs are validated at construction") {
    auto neg = correlated(CorrelationRule::Antithetic, 100, 1);
    std::get<CorrelatedVarianceKind>(neg.kind).variance = -0.1;
    CHECK(spec_error(neg).find("variance") == 0);

    const auto full = correlated(CorrelationRule::FullyCorrelated, 100, 1);
    CHECK(spec_error(full).find("rule") == 0);
    CHECK_THROWS_AS(generate(full), SpecError);

    auto wide = correlated(CorrelationRule::Independent, 100, 1);
    std::get<CorrelatedVarianceKind>(wide.kind).variance = 1.0;   // sqrt(3) > mean
    CHECK(spec_error(wide).find("variance") == 0);

    GeneratorSpec md;
    md.kind = MDependentKind{Distribution::exponential(1.0), 2, {1.0, 1.0}};
    md.length = 10;
    CHECK(spec_error(md).find("kernel") == 0);
    md.kind = MDependentKind{Distribution::pareto(0.5), 1, {}};
    CHECK(spec_error(md).find("innovation") == 0);
    md.kind = MDependentKind{Distribution::exponential(1.0), 0, {}};
    CHECK(spec_error(md).find("lag") == 0);

    auto empty = iid(Distribution::exponential(1.0), 0, 1, 0);
    CHECK(spec_error(empty).find("length") == 0);
}

TEST_CASE("analytic variance ratios") {
    CorrelatedVarianceKind k{1.0, 0.2, 0.0, CorrelationRule::Independent, 1.0};
    CHECK(analytic_variance_ratio(k, 64) == 1.0);
    k.rule = CorrelationRule::Antithetic;
    CHECK(analytic_variance_ratio(k, 64) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(analytic_variance_ratio(k, 65) <= 1.0);
    k.rule = CorrelationRule::FullyCorrelated;
    CHECK(analytic_variance_ratio(k, 64) == doctest::Approx(64.0));
}

TEST_CASE("empirical variance condition") {
    const auto independent = verify_variance_condition(generate(correlated(CorrelationRule::Independent, 1024, 400)), 1.0);
    CHECK(independent.holds);
    CHECK(independent.slack == doctest::Approx(3.0 / 20.0));
    for (const auto& row : independent.rows) CHECK(row.ratio == doctest::Approx(1.0).epsilon(0.3));

    const auto anti = verify_variance_condition(generate(correlated(CorrelationRule::Antithetic, 1024, 400)), 1.0);
    CHECK(anti.holds);
    for (const auto& row : anti.rows) CHECK(row.ratio <= 1.0 + anti.slack);
    CHECK(anti.rows.front().N == 1);
    CHECK(anti.rows.back().N == 1024);

    CHECK_THROWS(verify_variance_condition(generate(correlated(CorrelationRule::Independent, 64, 50)), 1.0));
}

TEST_CASE("regime checks on the two branches") {
    const auto exp_spec = iid(Distribution::exponential(1.0), 20000, 40, 3);
    const auto finite = slln_regime_check(exp_spec, generate(exp_spec));
    CHECK(finite.verdict == RegimeVerdict::FiniteBranchHolds);
    CHECK(finite.hull_bounded);
    CHECK(finite.cesaro_hull_bounded);

    const auto par_spec = iid(Distribution::pareto(0.5), 20000, 40, 3);
    const auto infinite = slln_regime_check(par_spec, generate(par_spec));
    CHECK(infinite.verdict == RegimeVerdict::InfiniteBranchHolds);
    CHECK_FALSE(infinite.hull_bounded);
    CHECK_FALSE(infinite.cesaro_hull_bounded);

    const auto const_spec = iid(Distribution::constant(2.0), 2000, 20, 3);
    CHECK(slln_regime_check(const_spec, generate(const_spec)).verdict == RegimeVerdict::FiniteBranchHolds);

    const auto few = iid(Distribution::exponential(1.0), 100, 5, 1);
    CHECK_THROWS(slln_regime_check(few, generate(few)));
}

TEST_CASE("runs as families on the empirical space") {
    const auto spec = iid(Distribution::uniform(0.0, 1.0), 50, 4, 9);
    const auto run = generate(spec);
    const auto space = path_space(4);
    CHECK(space.mass(0) == 0.25);
    const auto family = run_family(run);
    CHECK(family.coefficient(7, AtomLabel(3)) == run.at(2, 7));
    const auto c = run.cesaro_path(1);
    CHECK(c.back() == doctest::Approx(std::accumulate(run.path(1).begin(), run.path(1).end(), 0.0) / 50.0));
}
