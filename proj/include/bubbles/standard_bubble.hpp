#ifndef BUBBLES_STANDARD_BUBBLE_HPP
#define BUBBLES_STANDARD_BUBBLE_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "bubbles/density.hpp"

namespace bubbles {

/// A contiguous block of n bubbles in equilibrium, one component per bubble.
/// Boundary points are w_j = left_boundary + S_j where S_j is the j-th prefix
/// sum of the volumes (S_0 = 0), the perimeter is sum_j f(w_j), and the
/// residual sum_j f'(w_j) vanishes to solver tolerance.
struct StandardBubble {
    std::vector<double> volumes;         // left-to-right, as passed to the solver
    double left_boundary = 0.0;
    std::vector<double> boundary_points; // n+1 strictly increasing values
    double perimeter = 0.0;
    double residual = 0.0;
};

namespace detail {

inline void require_positive_volumes(std::span<const double> volumes, const char* who) {
    if (volumes.empty()) throw std::invalid_argument(std::string(who) + ": volumes must be non-empty");
    for (double v : volumes)
        if (!(v > 0.0)) throw std::invalid_argument(std::string(who) + ": volumes must be positive");
}

}  // namespace detail

/// Sum of density derivatives over the n+1 boundary points of the block
/// [left, left + sum(volumes)] partitioned by the given volumes. Equilibria
/// are the zeros of this function; it is strictly increasing in `left` for
/// strictly convex densities.
template <Density D>
double equilibrium_residual(const D& d, double left, std::span<const double> volumes) {
    detail::require_positive_volumes(volumes, "equilibrium_residual");
    double r = d.derivative(left);
    double s = 0.0;
    for (double v : volumes) {
        s += v;
        r += d.derivative(left + s);
    }
    return r;
}

/// Solves for the unique standard n-bubble with the given left-to-right
/// volumes by bisecting the residual over [-sum(volumes), 0], where it changes
/// sign. Converged when the bracket width is at most tol * sum(volumes) and
/// |residual| is at most tol * max_j |f'(w_j)|; bisection continues past the
/// width target until the residual target is met or the bracket hits the
/// floating-point floor.
template <Density D>
StandardBubble solve_standard(const D& d, std::span<const double> volumes, double tol = 1e-12) {
    if (!d.strictly_convex() || !d.min_at_origin())
        throw std::invalid_argument(
            "solve_standard: density must be strictly convex and minimized at the origin");
    detail::require_positive_volumes(volumes, "solve_standard");
    if (!(tol > 0.0)) throw std::invalid_argument("solve_standard: tol must be positive");

    const std::size_t n = volumes.size();
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) prefix[j + 1] = prefix[j] + volumes[j];
    const double total = prefix[n];

    auto probe = [&](double left, double& max_deriv) {
        double r = 0.0;
        max_deriv = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            const double fp = d.derivative(left + prefix[j]);
            r += fp;
            max_deriv = std::max(max_deriv, std::fabs(fp));
        }
        return r;
    };

    auto finish = [&](double left, double r, double max_deriv) {
        StandardBubble b;
        b.volumes.assign(volumes.begin(), volumes.end());
        b.left_boundary = left;
        b.boundary_points.resize(n + 1);
        double perim = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            b.boundary_points[j] = left + prefix[j];
            perim += d.value(b.boundary_points[j]);
        }
        b.perimeter = perim;
        b.residual = r;
        (void)max_deriv;
        return b;
    };

    double lo = -total, hi = 0.0;
    const int max_iterations = 200;
    for (int iter = 0; iter < max_iterations; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            // Bracket has collapsed to adjacent doubles; the midpoint is as
            // good as bisection can produce.
            double max_deriv;
            const double r = probe(mid, max_deriv);
            return finish(mid, r, max_deriv);
        }
        double max_deriv;
        const double r = probe(mid, max_deriv);
        if (r == 0.0) return finish(mid, r, max_deriv);
        if ((hi - lo) <= tol * total && std::fabs(r) <= tol * max_deriv)
            return finish(mid, r, max_deriv);
        if (r < 0.0) lo = mid;
        else hi = mid;
    }
    throw std::runtime_error("solve_standard: iteration budget exceeded");
}

template <Density D>
StandardBubble solve_standard(const D& d, std::initializer_list<double> volumes, double tol = 1e-12) {
    return solve_standard(d, std::span<const double>(volumes.begin(), volumes.size()), tol);
}

template <Density D>
double equilibrium_residual(const D& d, double left, std::initializer_list<double> volumes) {
    return equilibrium_residual(d, left, std::span<const double>(volumes.begin(), volumes.size()));
}

}  // namespace bubbles

#endif  // BUBBLES_STANDARD_BUBBLE_HPP
