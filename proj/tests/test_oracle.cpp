#include "cesaro/errors.hpp"
#include "cesaro/growth.hpp"
#include "cesaro/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace cesaro;

TEST_CASE("dyadic block maxima") {
    const std::vector<double> x{1, 5, 2, 7, 3, 4, 9, 1, 0, 0};
    // blocks [1,2) [2,4) [4,8) [8,16) on 1-based positions
    CHECK(dyadic_block_maxima(x) == std::vector<double>{1, 5, 9, 1});
}

TEST_CASE("divergence classifier") {
    std::vector<double> linear, root, constant, wave, logs;
    for (int n = 1; n <= 4096; ++n) {
        linear.push_back(n);
        root.push_back(std::sqrt(n));
        constant.push_back(3.0);
        wave.push_back(2.0 * std::abs(std::sin(n)));
        logs.push_back(std::log(n));
    }
    CHECK(diverges(linear));
    CHECK(diverges(root));
    CHECK_FALSE(diverges(constant));
    CHECK_FALSE(diverges(wave));
    CHECK_FALSE(diverges(std::vector<double>{}));
    CHECK_FALSE(diverges(std::vector<double>(100, 0.0)));
    const auto probe = probe_growth(wave);
    CHECK_FALSE(probe.unbounded);
    CHECK(probe.observed_max <= 2.0);
    CHECK(probe.bound == doctest::Approx(probe.observed_max * 1.1));
    CHECK(probe_growth(linear).unbounded);
    (void)logs;
}

TEST_CASE("oracle on a constant variable") {
    const auto space = AtomicSpace::uniform(2);
    const std::vector<SimpleRV> rvs{SimpleRV({1.0, 1.0})};
    const auto d = brute_force_boundedness_oracle(rvs, space, 0.1, {0.5, 2.0});
    CHECK(d.bounded);
    CHECK(d.M == 2.0);
}

TEST_CASE("oracle reports escape past the grid") {
    const AtomicSpace space({1.0});
    std::vector<SimpleRV> rvs;
    for (int n = 1; n <= 100; ++n) rvs.emplace_back(std::vector<double>{static_cast<double>(n)});
    const auto d = brute_force_boundedness_oracle(rvs, space, 0.5, linear_grid(0.0, 50.0, 64));
    CHECK_FALSE(d.bounded);
}

TEST_CASE("hull tail profile is nonincreasing in the level") {
    const AtomicSpace space({0.4, 0.35, 0.25});
    std::vector<SimpleRV> rvs;
    for (int n = 1; n <= 50; ++n) rvs.emplace_back(std::vector<double>{1.0 + (n % 3), 0.5 * n, std::abs(std::sin(n))});
    const HullTailProfile profile(rvs, space, linear_grid(0.0, 20.0, 64), {.samples = 300, .seed = 4, .jobs = 1});
    const auto tail = profile.sup_tail();
    for (std::size_t i = 1; i < tail.size(); ++i) CHECK(tail[i] <= tail[i - 1]);
    CHECK(tail.back() >= 0.35 - 1e-12);   // atom 2 passes 20 once n > 40
    REQUIRE(profile.least_level(0.5));
    CHECK_FALSE(profile.least_level(0.3));
}

TEST_CASE("oracle results do not depend on the number of jobs") {
    const AtomicSpace space({0.5, 0.3, 0.2});
    std::vector<SimpleRV> rvs;
    for (int n = 1; n <= 200; ++n) rvs.emplace_back(std::vector<double>{std::abs(std::cos(n)), 1.0, std::sqrt(n)});
    const auto grid = linear_grid(0.0, 10.0, 64);
    const HullTailProfile one(rvs, space, grid, {.samples = 500, .seed = 99, .jobs = 1});
    const HullTailProfile four(rvs, space, grid, {.samples = 500, .seed = 99, .jobs = 4});
    CHECK(std::vector<double>(one.sup_tail().begin(), one.sup_tail().end()) ==
          std::vector<double>(four.sup_tail().begin(), four.sup_tail().end()));
}

TEST_CASE("oracle argument validation") {
    const auto space = AtomicSpace::uniform(2);
    const std::vector<SimpleRV> rvs{SimpleRV({1.0, 1.0})};
    CHECK_THROWS(brute_force_boundedness_oracle(rvs, space, 0.1, {}));
    CHECK_THROWS(brute_force_boundedness_oracle(std::vector<SimpleRV>{}, space, 0.1, {1.0}));
    CHECK_THROWS(brute_force_boundedness_oracle(rvs, space, 1.5, {1.0}));
    CHECK(linear_grid(0.0, 1.0, 5) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    const auto g = geometric_grid(1.0, 1000.0, 4);
    CHECK(g.front() == 1.0);
    CHECK(g[1] == doctest::Approx(10.0));
    CHECK(g.back() == doctest::Approx(1000.0));
}
