#ifndef BUBBLES_TESTS_SUPPORT_HPP
#define BUBBLES_TESTS_SUPPORT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

namespace testsupport {

/// Sorted triple with each volume log-uniform in [lo, hi].
inline std::array<double, 3> log_uniform_triple(std::mt19937_64& rng, double lo = 0.01,
                                                double hi = 3000.0) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    std::array<double, 3> v{std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng))};
    std::sort(v.begin(), v.end());
    return v;
}

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::fabs(a), std::fabs(b));
    return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

}  // namespace testsupport

#endif
