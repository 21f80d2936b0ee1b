#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bubbles/standard_bubble.hpp"
#include "support.hpp"

using namespace bubbles;
using testsupport::rel_diff;

TEST_CASE("equilibrium residual basics", "[standard]") {
    const auto d = density_f2();

    // Single volume centered: f'(-V/2) + f'(V/2) = 0 by oddness.
    CHECK(equilibrium_residual(d, -50.0, {100.0}) == 0.0);

    // All boundary points at or left of the origin: strictly negative.
    CHECK(equilibrium_residual(d, -605.0, {100.0, 5.0, 500.0}) < 0.0);

    CHECK_THROWS_AS(equilibrium_residual(d, 0.0, std::span<const double>{}),
                    std::invalid_argument);
}

TEST_CASE("solve_standard centers a single bubble exactly", "[standard]") {
    for (const auto& d : {density_f1(), density_f2(), builtin_family(0.7)}) {
        const auto b = solve_standard(d, {123.0});
        CHECK(b.left_boundary == -61.5);
        CHECK(b.boundary_points[0] == -61.5);
        CHECK(b.boundary_points[1] == 61.5);
        CHECK(b.residual == 0.0);
        CHECK(b.perimeter == Catch::Approx(2.0 * d.value(61.5)).epsilon(1e-15));
    }
}

TEST_CASE("solve_standard residual and bracket", "[standard]") {
    const auto d = density_f2();
    const auto b = solve_standard(d, {5.0, 40.0});
    CHECK(std::fabs(b.residual) < 1e-9);
    CHECK(b.left_boundary >= -45.0);
    CHECK(b.left_boundary <= 0.0);
    CHECK(b.boundary_points.size() == 3);
    CHECK(std::is_sorted(b.boundary_points.begin(), b.boundary_points.end()));
    CHECK(equilibrium_residual(d, b.left_boundary, {5.0, 40.0}) == Catch::Approx(b.residual));
}

TEST_CASE("reference standard 3-bubble perimeter", "[standard][golden]") {
    // Arrangement | 100 | 5 | 500 | under f2.
    const auto b = solve_standard(density_f2(), {100.0, 5.0, 500.0});
    CHECK(b.perimeter == Catch::Approx(1479.6294773).margin(1e-3));
}

TEST_CASE("solve_standard agrees with a translation grid search", "[standard][oracle]") {
    // Independent 1-dof check: minimize g(w) = f(w) + f(w+5) + f(w+45) by
    // scanning translations and refining, then compare perimeters.
    const auto d = density_f2();
    const auto b = solve_standard(d, {5.0, 40.0});

    auto g = [&](double w) { return d.value(w) + d.value(w + 5.0) + d.value(w + 45.0); };
    double lo = -90.0, hi = 45.0;
    double best_w = 0.0, best = std::numeric_limits<double>::infinity();
    for (int round = 0; round < 8; ++round) {
        const int n = 2000;
        for (int i = 0; i <= n; ++i) {
            const double w = lo + (hi - lo) * i / n;
            const double val = g(w);
            if (val < best) { best = val; best_w = w; }
        }
        const double cell = (hi - lo) / n;
        lo = best_w - cell;
        hi = best_w + cell;
    }
    CHECK(b.perimeter == Catch::Approx(best).epsilon(1e-10));
    CHECK(b.left_boundary == Catch::Approx(best_w).margin(1e-6));
}

TEST_CASE("reflection symmetry of the solver", "[standard][property]") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> size(1, 5);
    std::uniform_real_distribution<double> vol(std::log(0.01), std::log(2000.0));
    const auto d = density_f2();
    for (int trial = 0; trial < 100; ++trial) {
        const int n = size(rng);
        std::vector<double> v(n);
        for (auto& x : v) x = std::exp(vol(rng));
        std::vector<double> r(v.rbegin(), v.rend());

        const auto fwd = solve_standard(d, std::span<const double>(v));
        const auto rev = solve_standard(d, std::span<const double>(r));
        REQUIRE(rel_diff(fwd.perimeter, rev.perimeter) < 1e-10);
        // Compare relative to the configuration span; a boundary point can
        // land arbitrarily close to the origin.
        const double scale = std::max(std::fabs(fwd.boundary_points.front()),
                                      std::fabs(fwd.boundary_points.back()));
        for (int j = 0; j <= n; ++j) {
            const double mirrored = -rev.boundary_points[n - j];
            REQUIRE(std::fabs(fwd.boundary_points[j] - mirrored) / scale < 1e-10);
        }
    }
}

TEST_CASE("residual is monotone in the left boundary", "[standard][property]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> left(-1000.0, 400.0);
    const auto d = density_f1();
    const std::vector<double> volumes{3.0, 17.0, 120.0};
    for (int trial = 0; trial < 500; ++trial) {
        double a = left(rng), b = left(rng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        REQUIRE(equilibrium_residual(d, a, std::span<const double>(volumes)) <
                equilibrium_residual(d, b, std::span<const double>(volumes)));
    }
}

TEST_CASE("solver rejects bad inputs", "[standard]") {
    const auto d = density_f2();
    CHECK_THROWS_AS(solve_standard(d, {1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(solve_standard(d, {-2.0}), std::invalid_argument);
    CHECK_THROWS_AS(solve_standard(d, {1.0}, 0.0), std::invalid_argument);

    const DensityProfile flat("flat", [](double) { return 1.0; }, [](double) { return 0.0; },
                              false, false);
    CHECK_THROWS_AS(solve_standard(flat, {1.0}), std::invalid_argument);
}
