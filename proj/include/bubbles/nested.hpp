#ifndef BUBBLES_NESTED_HPP
#define BUBBLES_NESTED_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bubbles/standard_bubble.hpp"

namespace bubbles {

/// Shape labels. The four triple types are named by their left-to-right
/// bubble-index signature; the two double types likewise.
enum class BubbleType { T213, T3123, T2313, T32123, D12, D212, GENERIC };

inline std::string to_string(BubbleType t) {
    switch (t) {
        case BubbleType::T213: return "213";
        case BubbleType::T3123: return "3123";
        case BubbleType::T2313: return "2313";
        case BubbleType::T32123: return "32123";
        case BubbleType::D12: return "12";
        case BubbleType::D212: return "212";
        case BubbleType::GENERIC: return "generic";
    }
    return "?";
}

enum class ComponentPart { whole, left, right };

/// Identifies which prescribed bubble an interval belongs to, and whether it
/// is that bubble's only component or the left/right half of a split bubble.
struct ComponentLabel {
    int bubble = 0;
    ComponentPart part = ComponentPart::whole;

    std::string str() const {
        std::string s = std::to_string(bubble);
        if (part == ComponentPart::left) s += "ℓ";   // ℓ
        if (part == ComponentPart::right) s += "ʳ";  // ʳ
        return s;
    }

    friend bool operator==(const ComponentLabel&, const ComponentLabel&) = default;
};

inline std::string to_string(const std::vector<ComponentLabel>& labels) {
    std::string s;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) s += ',';
        s += labels[i].str();
    }
    return s;
}

/// Recipe for a nested construction: standard k-bubbles from outermost to
/// innermost. Each part lists its left-to-right volumes together with the
/// prescribed bubble index that owns each component.
struct NestingPlan {
    struct Part {
        std::vector<double> volumes;
        std::vector<int> bubble_ids;
    };
    std::vector<Part> parts;
};

/// A composition of standard bubbles: every inner block lies strictly inside
/// one component of the block before it, boundary point sets are pairwise
/// disjoint, and the hosting component's volume is split into a left and a
/// right interval around the inner block.
struct NestedBubble {
    BubbleType type_label = BubbleType::GENERIC;
    std::vector<StandardBubble> constituents;     // outermost first
    std::vector<double> boundary_points;          // merged, strictly increasing
    std::vector<ComponentLabel> assignment;       // one label per interval
    double perimeter = 0.0;

    /// Total width assigned to one prescribed bubble index.
    double assigned_volume(int bubble) const {
        double w = 0.0;
        for (std::size_t i = 0; i < assignment.size(); ++i)
            if (assignment[i].bubble == bubble)
                w += boundary_points[i + 1] - boundary_points[i];
        return w;
    }
};

namespace detail {

inline void check_plan(const NestingPlan& plan) {
    if (plan.parts.empty()) throw std::invalid_argument("compose_nested: empty plan");
    for (const auto& part : plan.parts) {
        if (part.volumes.empty() || part.volumes.size() != part.bubble_ids.size())
            throw std::invalid_argument("compose_nested: malformed plan part");
    }
}

}  // namespace detail

/// Builds a nested bubble from a plan by solving each part independently and
/// verifying strict containment. Throws std::runtime_error if any part fails
/// to nest; the preset builders below only call this in situations where
/// nesting is guaranteed, so such a failure indicates an internal error.
template <Density D>
NestedBubble compose_nested(const D& d, const NestingPlan& plan, double tol,
                            BubbleType label = BubbleType::GENERIC) {
    detail::check_plan(plan);

    const std::size_t m = plan.parts.size();
    std::vector<StandardBubble> solved(m);
    for (std::size_t i = 0; i < m; ++i)
        solved[i] = solve_standard(d, std::span<const double>(plan.parts[i].volumes), tol);

    // Inner blocks must nest strictly inside a single component of the block
    // immediately outside them.
    std::vector<std::size_t> host_component(m, 0);
    for (std::size_t i = 1; i < m; ++i) {
        const double span_lo = solved[i].boundary_points.front();
        const double span_hi = solved[i].boundary_points.back();
        const auto& outer = solved[i - 1].boundary_points;
        bool found = false;
        for (std::size_t j = 0; j + 1 < outer.size(); ++j) {
            if (outer[j] < span_lo && span_hi < outer[j + 1]) {
                host_component[i] = j;
                found = true;
                break;
            }
        }
        if (!found)
            throw std::runtime_error("compose_nested: constituent bubbles do not nest");
        const double host_width = outer[host_component[i] + 1] - outer[host_component[i]];
        const double inner_width = span_hi - span_lo;
        if (!(inner_width < host_width))
            throw std::runtime_error("compose_nested: inner volume not smaller than host component");
    }

    // Assemble intervals outermost-in: a hosting component contributes the
    // slices left and right of its inner block.
    struct Piece { double lo, hi; ComponentLabel label; };
    std::vector<Piece> pieces;
    auto emit = [&](auto&& self, std::size_t i) -> void {
        const auto& part = plan.parts[i];
        const auto& pts = solved[i].boundary_points;
        for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
            const bool hosts = (i + 1 < m) && host_component[i + 1] == j;
            if (!hosts) {
                pieces.push_back({pts[j], pts[j + 1], {part.bubble_ids[j], ComponentPart::whole}});
                continue;
            }
            const double inner_lo = solved[i + 1].boundary_points.front();
            const double inner_hi = solved[i + 1].boundary_points.back();
            pieces.push_back({pts[j], inner_lo, {part.bubble_ids[j], ComponentPart::left}});
            self(self, i + 1);
            pieces.push_back({inner_hi, pts[j + 1], {part.bubble_ids[j], ComponentPart::right}});
        }
    };
    emit(emit, 0);

    NestedBubble nb;
    nb.type_label = label;
    nb.constituents = std::move(solved);
    nb.boundary_points.reserve(pieces.size() + 1);
    nb.assignment.reserve(pieces.size());
    nb.boundary_points.push_back(pieces.front().lo);
    for (const auto& p : pieces) {
        nb.boundary_points.push_back(p.hi);
        nb.assignment.push_back(p.label);
    }
    for (std::size_t i = 0; i + 1 < nb.boundary_points.size(); ++i)
        if (!(nb.boundary_points[i] < nb.boundary_points[i + 1]))
            throw std::runtime_error("compose_nested: boundary points not strictly increasing");

    double perim = 0.0;
    for (double w : nb.boundary_points) perim += d.value(w);
    nb.perimeter = perim;
    return nb;
}

namespace detail {

inline void require_triple(double v1, double v2, double v3, const char* who) {
    if (!(v1 > 0.0 && v1 <= v2 && v2 <= v3))
        throw std::invalid_argument(std::string(who) + ": volumes must satisfy 0 < V1 <= V2 <= V3");
}

inline void require_pair(double v1, double v2, const char* who) {
    if (!(v1 > 0.0 && v1 <= v2))
        throw std::invalid_argument(std::string(who) + ": volumes must satisfy 0 < V1 <= V2");
}

template <Density D>
void check_assigned_volumes(const D&, const NestedBubble& nb, std::span<const double> prescribed) {
    for (std::size_t a = 0; a < prescribed.size(); ++a) {
        const double got = nb.assigned_volume(int(a) + 1);
        if (std::fabs(got - prescribed[a]) > 1e-9 * prescribed[a])
            throw std::runtime_error("nested builder: component widths do not reproduce volume " +
                                     std::to_string(a + 1));
    }
}

}  // namespace detail

/// | R2 | R1 | R3 | — a single standard 3-bubble with the middle (smallest)
/// volume flanked by the larger two. Exists for all admissible volumes. The
/// reflected | R3 | R1 | R2 | arrangement has equal perimeter and is not
/// enumerated separately.
template <Density D>
NestedBubble build_213(const D& d, double v1, double v2, double v3, double tol = 1e-12) {
    detail::require_triple(v1, v2, v3, "build_213");
    NestingPlan plan{{{{v2, v1, v3}, {2, 1, 3}}}};
    NestedBubble nb = compose_nested(d, plan, tol, BubbleType::T213);
    detail::check_assigned_volumes(d, nb, std::array{v1, v2, v3});
    return nb;
}

/// | R3ℓ | R1 | R2 | R3ʳ | — bubble 3 split around an inner standard
/// 2-bubble holding volumes (V1, V2). The outer 1-bubble of volume
/// V1+V2+V3 is centered at the origin, so its boundary is exactly
/// ±(V1+V2+V3)/2. Exists for all admissible volumes.
template <Density D>
NestedBubble build_3123(const D& d, double v1, double v2, double v3, double tol = 1e-12) {
    detail::require_triple(v1, v2, v3, "build_3123");
    const double total = v1 + v2 + v3;
    NestingPlan plan{{{{total}, {3}}, {{v1, v2}, {1, 2}}}};
    NestedBubble nb = compose_nested(d, plan, tol, BubbleType::T3123);
    detail::check_assigned_volumes(d, nb, std::array{v1, v2, v3});
    return nb;
}

/// Existence test for type 2313. The type exists iff, in volume coordinates,
///   f'(V3 + V1/2) > f'(V2 + V1/2) + f'(V1/2),
/// which is exactly the condition that the solved outer 2-bubble leaves room
/// for the centered inner bubble: u + V2 < -V1/2 with u the outer left
/// boundary. Uses exact floating comparison; see borderline_2313 for ties.
template <Density D>
bool exists_2313(const D& d, double v1, double v2, double v3) {
    detail::require_triple(v1, v2, v3, "exists_2313");
    const double half = 0.5 * v1;
    return d.derivative(v3 + half) > d.derivative(v2 + half) + d.derivative(half);
}

/// True when the existence inequality for 2313 is within 1e-12 of equality,
/// i.e. too close to call at floating-point resolution.
template <Density D>
bool borderline_2313(const D& d, double v1, double v2, double v3) {
    detail::require_triple(v1, v2, v3, "borderline_2313");
    const double half = 0.5 * v1;
    const double lhs = d.derivative(v3 + half);
    const double rhs = d.derivative(v2 + half) + d.derivative(half);
    return std::fabs(lhs - rhs) <= 1e-12;
}

/// | R2 | R3ℓ | R1 | R3ʳ | — outer standard 2-bubble with volumes
/// (V2, V1+V3) around a centered inner 1-bubble of volume V1 (boundary
/// exactly ±V1/2). Returns nullopt when the type does not exist. Nesting
/// disagreeing with exists_2313 indicates an internal error and throws.
template <Density D>
std::optional<NestedBubble> build_2313(const D& d, double v1, double v2, double v3,
                                       double tol = 1e-12) {
    detail::require_triple(v1, v2, v3, "build_2313");
    if (!exists_2313(d, v1, v2, v3)) return std::nullopt;
    NestingPlan plan{{{{v2, v1 + v3}, {2, 3}}, {{v1}, {1}}}};
    NestedBubble nb = compose_nested(d, plan, tol, BubbleType::T2313);
    const std::vector<ComponentLabel> want{{2, ComponentPart::whole},
                                           {3, ComponentPart::left},
                                           {1, ComponentPart::whole},
                                           {3, ComponentPart::right}};
    if (nb.assignment != want)
        throw std::runtime_error("build_2313: nesting disagrees with existence test");
    detail::check_assigned_volumes(d, nb, std::array{v1, v2, v3});
    return nb;
}

/// | R3ℓ | R2ℓ | R1 | R2ʳ | R3ʳ | — three concentric 1-bubbles of volumes
/// V1, V1+V2, V1+V2+V3, all centered, with boundary points exactly ±V1/2,
/// ±(V1+V2)/2, ±(V1+V2+V3)/2. Exists for all admissible volumes.
template <Density D>
NestedBubble build_32123(const D& d, double v1, double v2, double v3, double tol = 1e-12) {
    detail::require_triple(v1, v2, v3, "build_32123");
    NestingPlan plan{{{{v1 + v2 + v3}, {3}}, {{v1 + v2}, {2}}, {{v1}, {1}}}};
    NestedBubble nb = compose_nested(d, plan, tol, BubbleType::T32123);
    detail::check_assigned_volumes(d, nb, std::array{v1, v2, v3});
    return nb;
}

/// The two double-bubble shapes: | R1 | R2 | (a standard 2-bubble) and
/// | R2ℓ | R1 | R2ʳ | (concentric 1-bubbles of volumes V1 and V1+V2). Both
/// exist unconditionally for 0 < V1 <= V2.
template <Density D>
NestedBubble build_double(const D& d, double v1, double v2, BubbleType kind,
                          double tol = 1e-12) {
    detail::require_pair(v1, v2, "build_double");
    if (kind == BubbleType::D12) {
        NestingPlan plan{{{{v1, v2}, {1, 2}}}};
        NestedBubble nb = compose_nested(d, plan, tol, BubbleType::D12);
        detail::check_assigned_volumes(d, nb, std::array{v1, v2});
        return nb;
    }
    if (kind == BubbleType::D212) {
        NestingPlan plan{{{{v1 + v2}, {2}}, {{v1}, {1}}}};
        NestedBubble nb = compose_nested(d, plan, tol, BubbleType::D212);
        detail::check_assigned_volumes(d, nb, std::array{v1, v2});
        return nb;
    }
    throw std::invalid_argument("build_double: kind must be D12 or D212");
}

}  // namespace bubbles

#endif  // BUBBLES_NESTED_HPP
