#ifndef BUBBLES_DENSITY_HPP
#define BUBBLES_DENSITY_HPP

#include <cmath>
#include <concepts>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bubbles {

/// A density expressed in volume coordinates V (the cumulative integral of
/// the positional density from the origin). Log-convexity in position is
/// ordinary convexity in V, so every solver in this library only ever deals
/// with convex profiles of one real variable.
///
/// Requirements beyond the signatures: f(V) > 0 everywhere, f(-V) = f(V) and
/// f'(-V) = -f'(V) bit-exactly (implementations evaluate at |V| and fold the
/// sign), and f' nondecreasing (strictly when strictly_convex() is true).
template <class D>
concept Density = requires(const D& d, double v) {
    { d.value(v) } -> std::convertible_to<double>;
    { d.derivative(v) } -> std::convertible_to<double>;
    { d.strictly_convex() } -> std::convertible_to<bool>;
    { d.min_at_origin() } -> std::convertible_to<bool>;
    { d.name() } -> std::convertible_to<std::string>;
};

namespace detail {

inline double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

inline std::string format_parameter(double c) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", c);
    return buf;
}

}  // namespace detail

/// The built-in family f_c(V) = |V| sqrt(log(|V|+1)) + c, c > 0.
///
/// Strictly convex, C^1, uniquely minimized at the origin, with derivative
///   f_c'(V) = sign(V) [ sqrt(L) + |V| / (2 (|V|+1) sqrt(L)) ],  L = log(|V|+1)
/// and f_c'(0) = 0. The derivative behaves like (3/2) sqrt(|V|) near the
/// origin, so the closed form stays finite without special-casing.
class BuiltinFamily {
public:
    explicit BuiltinFamily(double c) : c_(c) {
        if (!(c > 0.0)) throw std::invalid_argument("builtin_family: parameter c must be positive");
        if (c == 1.0) name_ = "f1";
        else if (c == 0.01) name_ = "f2";
        else name_ = "fam:" + detail::format_parameter(c);
    }

    double value(double v) const {
        const double a = std::fabs(v);
        return a * std::sqrt(std::log1p(a)) + c_;
    }

    double derivative(double v) const {
        const double a = std::fabs(v);
        if (a == 0.0) return 0.0;
        const double s = std::sqrt(std::log1p(a));
        const double t = s + a / (2.0 * (a + 1.0) * s);
        return v > 0.0 ? t : -t;
    }

    bool strictly_convex() const { return true; }
    bool min_at_origin() const { return true; }
    const std::string& name() const { return name_; }
    double parameter() const { return c_; }

private:
    double c_;
    std::string name_;
};

inline BuiltinFamily builtin_family(double c) { return BuiltinFamily(c); }
inline BuiltinFamily density_f1() { return BuiltinFamily(1.0); }
inline BuiltinFamily density_f2() { return BuiltinFamily(0.01); }

/// Type-erased density profile. Callers register the value and derivative on
/// the half-line V >= 0; evaluation folds the argument through |V| and applies
/// the sign, which makes f(-V) == f(V) and f'(-V) == -f'(V) hold bit-exactly.
///
/// The structural flags are claims by the caller, not verified facts; run
/// validate_density to probe them numerically. Profiles are immutable after
/// construction and safe to share across threads.
class DensityProfile {
public:
    using HalfFn = std::function<double(double)>;

    DensityProfile(std::string name, HalfFn half_value, HalfFn half_derivative,
                   bool strictly_convex, bool min_at_origin)
        : name_(std::move(name)),
          half_value_(std::move(half_value)),
          half_derivative_(std::move(half_derivative)),
          strictly_convex_(strictly_convex),
          min_at_origin_(min_at_origin) {
        if (!half_value_ || !half_derivative_)
            throw std::invalid_argument("DensityProfile: value and derivative are required");
    }

    template <Density D>
    static DensityProfile from(const D& d) {
        return DensityProfile(d.name(),
                              [d](double v) { return d.value(v); },
                              [d](double v) { return d.derivative(v); },
                              d.strictly_convex(), d.min_at_origin());
    }

    double value(double v) const { return half_value_(std::fabs(v)); }

    double derivative(double v) const {
        const double s = detail::sign_of(v);
        return s == 0.0 ? 0.0 : s * half_derivative_(std::fabs(v));
    }

    bool strictly_convex() const { return strictly_convex_; }
    bool min_at_origin() const { return min_at_origin_; }
    const std::string& name() const { return name_; }

private:
    std::string name_;
    HalfFn half_value_;
    HalfFn half_derivative_;
    bool strictly_convex_;
    bool min_at_origin_;
};

/// Outcome of one numeric probe of a density profile.
struct ValidationCheck {
    std::string name;
    bool passed;
    std::string detail;  // empty when passed
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }

    bool passed(const std::string& check_name) const {
        for (const auto& c : checks)
            if (c.name == check_name) return c.passed;
        throw std::invalid_argument("ValidationReport: unknown check " + check_name);
    }
};

namespace detail {

inline std::string describe_sample(double v, double got, double want) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "at V=%.6g: got %.12g, expected %.12g", v, got, want);
    return buf;
}

}  // namespace detail

/// Numerically probes a profile on a log-spaced grid over [1e-4, 1e4].
/// Reports observed properties; failures are recorded, never thrown. The
/// derivative_monotone check is strict only when the profile claims strict
/// convexity, while the strictly_convex check always reports the observed
/// strictness so mislabeled profiles are visible.
template <Density D>
ValidationReport validate_density(const D& d, int samples) {
    if (samples < 3) throw std::invalid_argument("validate_density: samples must be >= 3");

    std::vector<double> grid(samples);
    const double lo = 1e-4, hi = 1e4;
    for (int i = 0; i < samples; ++i)
        grid[i] = lo * std::pow(hi / lo, double(i) / double(samples - 1));

    ValidationReport report;
    auto add = [&](const std::string& name, bool ok, const std::string& why) {
        report.checks.push_back({name, ok, ok ? std::string() : why});
    };

    bool positive = d.value(0.0) > 0.0;
    std::string positive_why = positive ? "" : "f(0) <= 0";
    bool symmetric = true;
    std::string symmetric_why;
    bool odd = d.derivative(0.0) == 0.0;
    std::string odd_why = odd ? "" : "f'(0) != 0";
    for (double v : grid) {
        if (!(d.value(v) > 0.0) || !(d.value(-v) > 0.0)) {
            if (positive) positive_why = detail::describe_sample(v, d.value(v), 0.0);
            positive = false;
        }
        if (d.value(-v) != d.value(v)) {
            if (symmetric) symmetric_why = detail::describe_sample(-v, d.value(-v), d.value(v));
            symmetric = false;
        }
        if (d.derivative(-v) != -d.derivative(v)) {
            if (odd) odd_why = detail::describe_sample(-v, d.derivative(-v), -d.derivative(v));
            odd = false;
        }
    }
    add("positive", positive, positive_why);
    add("symmetric", symmetric, symmetric_why);
    add("derivative_odd", odd, odd_why);

    // Monotonicity over the full signed grid, crossing the origin.
    std::vector<double> signed_grid;
    signed_grid.reserve(2 * samples + 1);
    for (int i = samples - 1; i >= 0; --i) signed_grid.push_back(-grid[i]);
    signed_grid.push_back(0.0);
    for (int i = 0; i < samples; ++i) signed_grid.push_back(grid[i]);

    bool monotone = true, strict = true;
    std::string monotone_why, strict_why;
    for (std::size_t i = 0; i + 1 < signed_grid.size(); ++i) {
        const double a = d.derivative(signed_grid[i]);
        const double b = d.derivative(signed_grid[i + 1]);
        if (a > b) {
            if (monotone) monotone_why = detail::describe_sample(signed_grid[i], a, b);
            monotone = false;
        }
        if (a >= b) {
            if (strict) strict_why = detail::describe_sample(signed_grid[i], a, b);
            strict = false;
        }
    }
    add("derivative_monotone", d.strictly_convex() ? strict : monotone,
        d.strictly_convex() ? strict_why : monotone_why);
    add("strictly_convex", strict, strict_why);

    bool fd_ok = true;
    std::string fd_why;
    for (double v : grid) {
        const double h = 1e-6 * std::max(1.0, v);
        const double fd = (d.value(v + h) - d.value(v - h)) / (2.0 * h);
        const double dv = d.derivative(v);
        if (std::fabs(dv - fd) > 1e-4 * std::max(1.0, std::fabs(fd))) {
            if (fd_ok) fd_why = detail::describe_sample(v, dv, fd);
            fd_ok = false;
        }
    }
    add("derivative_matches_fd", fd_ok, fd_why);

    bool min_origin = d.derivative(0.0) == 0.0;
    std::string min_why = min_origin ? "" : "f'(0) != 0";
    for (double v : grid) {
        if (!(d.derivative(v) > 0.0)) {
            if (min_origin) min_why = detail::describe_sample(v, d.derivative(v), 0.0);
            min_origin = false;
        }
    }
    add("min_at_origin", min_origin, min_why);

    return report;
}

}  // namespace bubbles

#endif  // BUBBLES_DENSITY_HPP
