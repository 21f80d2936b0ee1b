#ifndef BUBBLES_TRANSFORM_HPP
#define BUBBLES_TRANSFORM_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "bubbles/density.hpp"

namespace bubbles {

/// A density given in the positional coordinate x, assumed symmetric and
/// continuous; both callbacks are folded through |x| so the symmetry is
/// structural. log_derivative (d/dx of log of the density) is optional — when
/// absent the transformed derivative falls back to finite differences.
struct PositionalDensity {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> log_derivative;  // may be empty

    double value_at(double x) const {
        const double v = value(std::fabs(x));
        if (!(v > 0.0))
            throw std::domain_error("positional density '" + name + "' non-positive at x=" +
                                    std::to_string(x));
        return v;
    }

    double log_derivative_at(double x) const {
        const double s = detail::sign_of(x);
        return s == 0.0 ? 0.0 : s * log_derivative(std::fabs(x));
    }
};

/// The named positional densities the CLI knows about.
inline PositionalDensity named_positional(const std::string& name) {
    if (name == "const")
        return {"const", [](double) { return 1.0; }, [](double) { return 0.0; }};
    if (name == "expabs")
        return {"expabs", [](double x) { return std::exp(x); }, [](double) { return 1.0; }};
    if (name == "borell")
        return {"borell", [](double x) { return std::exp(x * x); }, [](double x) { return 2.0 * x; }};
    throw std::invalid_argument("unknown positional density '" + name +
                                "' (known: const, expabs, borell)");
}

namespace detail {

// Adaptive Simpson with absolute tolerance, straight out of the textbook.
template <class F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    if (depth <= 0)
        throw std::runtime_error("to_volume_coords: quadrature tolerance not reached");
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double eps) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, eps, 48);
}

}  // namespace detail

/// Maps between the positional coordinate x and the volume coordinate
/// V(x) = integral of the density from 0 to x. The cumulative integral uses
/// adaptive Simpson quadrature at tolerance tol/10; the inverse is found by
/// bisection inside an exponentially expanded bracket, accurate to tol in V.
class VolumeMap {
public:
    VolumeMap(PositionalDensity density, double tol)
        : p_(std::move(density)), tol_(tol) {
        if (!p_.value) throw std::invalid_argument("VolumeMap: density value required");
        if (!(tol > 0.0)) throw std::invalid_argument("VolumeMap: tol must be positive");
    }

    double volume_at(double x) const {
        const double a = std::fabs(x);
        if (a == 0.0) return 0.0;
        const double v = detail::adaptive_simpson([this](double t) { return p_.value_at(t); },
                                                  0.0, a, tol_ / 10.0);
        return x < 0.0 ? -v : v;
    }

    double position_at(double volume) const {
        const double v = std::fabs(volume);
        if (v == 0.0) return 0.0;
        double hi = 1.0;
        int budget = 200;
        while (volume_at(hi) < v) {
            hi *= 2.0;
            if (--budget == 0)
                throw std::runtime_error("position_at: bracket expansion budget exceeded");
        }
        double lo = 0.0;
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;  // bracket exhausted
            const double vm = volume_at(mid);
            if (std::fabs(vm - v) <= tol_) return volume < 0.0 ? -mid : mid;
            if (vm < v) lo = mid;
            else hi = mid;
        }
        throw std::runtime_error("position_at: tolerance not reached within iteration budget");
    }

    const PositionalDensity& positional() const { return p_; }
    double tol() const { return tol_; }

    /// The density as a function of the volume coordinate. The derivative
    /// comes from the positional log-derivative when available (the two agree
    /// under the change of coordinates), else from central differences of the
    /// transformed value. Structural flags default to false; callers who know
    /// better may assert them.
    DensityProfile to_profile(bool assert_strictly_convex = false,
                              bool assert_min_at_origin = false) const {
        // Copy by value so the profile owns an independent map.
        VolumeMap self = *this;
        DensityProfile::HalfFn half_value = [self](double v) {
            return self.p_.value_at(self.position_at(v));
        };
        DensityProfile::HalfFn half_derivative;
        if (p_.log_derivative) {
            half_derivative = [self](double v) {
                return self.p_.log_derivative_at(self.position_at(v));
            };
        } else {
            half_derivative = [self](double v) {
                const double h = 1e-5 * std::max(1.0, v);
                const double fp = self.p_.value_at(self.position_at(v + h));
                const double fm = self.p_.value_at(self.position_at(std::fabs(v - h)));
                return (fp - fm) / (2.0 * h);
            };
        }
        return DensityProfile(p_.name, std::move(half_value), std::move(half_derivative),
                              assert_strictly_convex, assert_min_at_origin);
    }

private:
    PositionalDensity p_;
    double tol_;
};

/// Convenience wrapper: positional density straight to a volume-coordinate
/// profile.
inline DensityProfile to_volume_coords(PositionalDensity density, double tol,
                                       bool assert_strictly_convex = false,
                                       bool assert_min_at_origin = false) {
    return VolumeMap(std::move(density), tol)
        .to_profile(assert_strictly_convex, assert_min_at_origin);
}

}  // namespace bubbles

#endif  // BUBBLES_TRANSFORM_HPP
