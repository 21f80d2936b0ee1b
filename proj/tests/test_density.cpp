#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bubbles/density.hpp"
#include "support.hpp"

using namespace bubbles;

TEST_CASE("builtin family closed form", "[density]") {
    CHECK(density_f1().value(0.0) == 1.0);
    CHECK(density_f2().derivative(0.0) == 0.0);
    CHECK(builtin_family(2.5).value(0.0) == 2.5);

    // f(1) = sqrt(log 2) + c
    CHECK(density_f1().value(1.0) == Catch::Approx(std::sqrt(std::log(2.0)) + 1.0).epsilon(1e-15));

    CHECK(density_f1().name() == "f1");
    CHECK(density_f2().name() == "f2");
    CHECK(builtin_family(2.5).name() == "fam:2.5");

    CHECK_THROWS_AS(builtin_family(0.0), std::invalid_argument);
    CHECK_THROWS_AS(builtin_family(-1.0), std::invalid_argument);
}

TEST_CASE("derivative matches central finite differences", "[density]") {
    const auto d = density_f2();
    const double h = 1e-6;
    for (double v : {0.5, 1.0, 7.0, 100.0, 2500.0}) {
        const double fd = (d.value(v + h) - d.value(v - h)) / (2.0 * h);
        CHECK(d.derivative(v) == Catch::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("evaluation is symmetric bit-exactly", "[density]") {
    const auto fam = builtin_family(0.3);
    const auto profile = DensityProfile::from(density_f1());
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(-5000.0, 5000.0);
    for (int i = 0; i < 2000; ++i) {
        const double v = u(rng);
        CHECK(fam.value(-v) == fam.value(v));
        CHECK(fam.derivative(-v) == -fam.derivative(v));
        CHECK(profile.value(-v) == profile.value(v));
        CHECK(profile.derivative(-v) == -profile.derivative(v));
    }
    CHECK(fam.derivative(-0.0) == 0.0);
}

TEST_CASE("validate_density on the built-ins", "[density]") {
    const auto report = validate_density(density_f2(), 64);
    for (const auto& check : report.checks) {
        INFO(check.name << ": " << check.detail);
        CHECK(check.passed);
    }
    CHECK(report.all_passed());
}

TEST_CASE("validate_density flags a constant density", "[density]") {
    const DensityProfile constant("const1", [](double) { return 1.0; },
                                  [](double) { return 0.0; }, false, false);
    const auto report = validate_density(constant, 32);
    CHECK_FALSE(report.passed("min_at_origin"));
    CHECK(report.passed("positive"));
    CHECK(report.passed("symmetric"));
    CHECK(report.passed("derivative_monotone"));
    CHECK_FALSE(report.passed("strictly_convex"));
}

TEST_CASE("validate_density on |V|+1", "[density]") {
    // The density e^{|x|} in volume coordinates: convex but not strictly.
    const DensityProfile vabs("expabs", [](double v) { return v + 1.0; },
                              [](double) { return 1.0; }, false, true);
    const auto report = validate_density(vabs, 32);
    CHECK(report.passed("min_at_origin"));
    CHECK(report.passed("derivative_monotone"));
    CHECK_FALSE(report.passed("strictly_convex"));
    CHECK(report.passed("derivative_matches_fd"));
}

TEST_CASE("validate_density rejects tiny sample counts", "[density]") {
    CHECK_THROWS_AS(validate_density(density_f1(), 2), std::invalid_argument);
}

TEST_CASE("interval squeezing", "[density][property]") {
    // For positive f nonincreasing then nondecreasing: with x_0 <= ... <= x_n
    // and y_i in [x_{i-1}, x_i], sum f(x_i) strictly exceeds sum f(y_i).
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> span(-400.0, 400.0);
    std::uniform_int_distribution<int> size(0, 6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto d = density_f2();
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = size(rng);
        std::vector<double> x(n + 1);
        for (auto& xi : x) xi = span(rng);
        std::sort(x.begin(), x.end());
        double lhs = 0.0, rhs = 0.0;
        for (int i = 0; i <= n; ++i) lhs += d.value(x[i]);
        for (int i = 1; i <= n; ++i) rhs += d.value(x[i - 1] + unit(rng) * (x[i] - x[i - 1]));
        REQUIRE(lhs > rhs);
    }
}

TEST_CASE("positive derivative sum forces nonnegative volume sum", "[density][property]") {
    std::mt19937_64 rng(515);
    std::uniform_real_distribution<double> span(-2000.0, 2000.0);
    for (const auto& d : {density_f1(), density_f2()}) {
        for (int trial = 0; trial < 2000; ++trial) {
            const double v1 = span(rng), v2 = span(rng);
            if (d.derivative(v1) + d.derivative(v2) > 0.0) REQUIRE(v1 + v2 >= 0.0);
        }
    }
}
