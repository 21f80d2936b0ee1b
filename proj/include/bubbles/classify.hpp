#ifndef BUBBLES_CLASSIFY_HPP
#define BUBBLES_CLASSIFY_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "bubbles/nested.hpp"

namespace bubbles {

/// Default threshold below which two types are considered tied: a winner is
/// decisive only if its perimeter beats every other type by more than this.
inline constexpr double kDefaultTieThreshold = 1e-4;

/// Per-type perimeters and the winning type for one volume triple. The
/// winner always holds the strictly smallest finite perimeter; `decisive`
/// is false when the margin over the runner-up does not exceed the tie
/// threshold. `borderline` flags triples whose 2313 existence inequality sits
/// within 1e-12 of equality.
struct TripleClassification {
    std::optional<double> p213, p3123, p2313, p32123;
    BubbleType winner = BubbleType::T213;
    BubbleType runner_up = BubbleType::T213;
    double margin = 0.0;
    bool decisive = false;
    bool borderline = false;

    std::optional<double> perimeter_of(BubbleType t) const {
        switch (t) {
            case BubbleType::T213: return p213;
            case BubbleType::T3123: return p3123;
            case BubbleType::T2313: return p2313;
            case BubbleType::T32123: return p32123;
            default: return std::nullopt;
        }
    }

    static const std::vector<BubbleType>& triple_types() {
        static const std::vector<BubbleType> types{BubbleType::T213, BubbleType::T3123,
                                                   BubbleType::T2313, BubbleType::T32123};
        return types;
    }
};

/// Builds all four admissible types (2313 only when it exists) and picks the
/// one with the smallest perimeter.
template <Density D>
TripleClassification classify_triple(const D& d, double v1, double v2, double v3,
                                     double tol = 1e-12,
                                     double tie_threshold = kDefaultTieThreshold) {
    detail::require_triple(v1, v2, v3, "classify_triple");
    if (!(tie_threshold >= 0.0))
        throw std::invalid_argument("classify_triple: tie threshold must be >= 0");

    TripleClassification c;
    c.p213 = build_213(d, v1, v2, v3, tol).perimeter;
    c.p3123 = build_3123(d, v1, v2, v3, tol).perimeter;
    if (auto nb = build_2313(d, v1, v2, v3, tol)) c.p2313 = nb->perimeter;
    c.p32123 = build_32123(d, v1, v2, v3, tol).perimeter;
    c.borderline = borderline_2313(d, v1, v2, v3);

    bool first = true;
    double best = 0.0, second = 0.0;
    for (BubbleType t : TripleClassification::triple_types()) {
        const auto p = c.perimeter_of(t);
        if (!p) continue;
        if (first || *p < best) {
            if (!first) { second = best; c.runner_up = c.winner; }
            best = *p;
            c.winner = t;
            first = false;
        } else if (c.runner_up == c.winner || *p < second) {
            second = *p;
            c.runner_up = t;
        }
    }
    c.margin = second - best;
    c.decisive = c.margin > tie_threshold;
    return c;
}

/// Winner among the two double-bubble shapes. Both always exist.
struct DoubleClassification {
    double p12 = 0.0, p212 = 0.0;
    BubbleType winner = BubbleType::D12;
    double margin = 0.0;
    bool decisive = false;
};

template <Density D>
DoubleClassification classify_double(const D& d, double v1, double v2, double tol = 1e-12,
                                     double tie_threshold = kDefaultTieThreshold) {
    detail::require_pair(v1, v2, "classify_double");
    if (!(tie_threshold >= 0.0))
        throw std::invalid_argument("classify_double: tie threshold must be >= 0");
    DoubleClassification c;
    c.p12 = build_double(d, v1, v2, BubbleType::D12, tol).perimeter;
    c.p212 = build_double(d, v1, v2, BubbleType::D212, tol).perimeter;
    c.winner = c.p12 < c.p212 ? BubbleType::D12 : BubbleType::D212;
    c.margin = std::fabs(c.p12 - c.p212);
    c.decisive = c.margin > tie_threshold;
    return c;
}

}  // namespace bubbles

#endif  // BUBBLES_CLASSIFY_HPP
