#ifndef BUBBLES_ORACLE_HPP
#define BUBBLES_ORACLE_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bubbles/nested.hpp"

namespace bubbles {

/// One candidate left-to-right arrangement of the three bubbles' components.
/// Free parameters of the induced minimization: the translation of the whole
/// cluster, plus one volume-split fraction per split bubble.
struct Ordering {
    std::vector<ComponentLabel> components;

    std::string label() const { return to_string(components); }

    /// Split bubbles in order of appearance of their left halves.
    std::vector<int> split_bubbles() const {
        std::vector<int> out;
        for (const auto& c : components)
            if (c.part == ComponentPart::left) out.push_back(c.bubble);
        return out;
    }

    int degrees_of_freedom() const { return 1 + int(split_bubbles().size()); }

    /// Consistency with a standard nested shape: every bubble in {1,2,3}
    /// appears either once whole or as a left/right pair with at least one
    /// component between the halves, and any two split bubbles nest.
    bool valid() const {
        std::array<int, 4> whole_at{}, left_at{}, right_at{};
        whole_at.fill(-1); left_at.fill(-1); right_at.fill(-1);
        for (int i = 0; i < int(components.size()); ++i) {
            const auto& c = components[i];
            if (c.bubble < 1 || c.bubble > 3) return false;
            auto& slot = c.part == ComponentPart::whole ? whole_at
                       : c.part == ComponentPart::left ? left_at : right_at;
            if (slot[c.bubble] >= 0) return false;  // duplicate
            slot[c.bubble] = i;
        }
        std::vector<std::pair<int, int>> spans;
        for (int b = 1; b <= 3; ++b) {
            const bool whole = whole_at[b] >= 0;
            const bool split = left_at[b] >= 0 || right_at[b] >= 0;
            if (whole == split) return false;  // absent, or both whole and split
            if (split) {
                if (left_at[b] < 0 || right_at[b] < 0) return false;
                if (right_at[b] <= left_at[b] + 1) return false;  // adjacent halves collapse
                spans.emplace_back(left_at[b], right_at[b]);
            }
        }
        for (std::size_t i = 0; i < spans.size(); ++i)
            for (std::size_t j = i + 1; j < spans.size(); ++j) {
                const auto& [al, ar] = spans[i];
                const auto& [bl, br] = spans[j];
                const bool a_inside_b = bl < al && ar < br;
                const bool b_inside_a = al < bl && br < ar;
                if (!a_inside_b && !b_inside_a) return false;
            }
        return true;
    }

    /// The shape label when this ordering is one of the four admissible
    /// arrangements, nullopt for the other six candidates.
    std::optional<BubbleType> admissible_type() const;

    friend bool operator==(const Ordering&, const Ordering&) = default;
};

namespace detail {

inline Ordering make_ordering(std::initializer_list<ComponentLabel> comps) {
    return Ordering{std::vector<ComponentLabel>(comps)};
}

constexpr ComponentPart W = ComponentPart::whole;
constexpr ComponentPart L = ComponentPart::left;
constexpr ComponentPart R = ComponentPart::right;

}  // namespace detail

/// The ten candidate arrangements a perimeter-minimizing triple can take, up
/// to reflection, for a symmetric density nondecreasing away from the origin.
/// Listed three-component forms first, then four, then five.
inline const std::vector<Ordering>& ten_orderings() {
    using detail::W; using detail::L; using detail::R;
    using detail::make_ordering;
    static const std::vector<Ordering> all{
        make_ordering({{2, W}, {1, W}, {3, W}}),
        make_ordering({{1, W}, {2, W}, {3, W}}),
        make_ordering({{1, W}, {3, W}, {2, W}}),
        make_ordering({{3, L}, {1, W}, {2, W}, {3, R}}),
        make_ordering({{2, L}, {1, W}, {3, W}, {2, R}}),
        make_ordering({{2, W}, {3, L}, {1, W}, {3, R}}),
        make_ordering({{1, W}, {3, L}, {2, W}, {3, R}}),
        make_ordering({{3, W}, {2, L}, {1, W}, {2, R}}),
        make_ordering({{3, L}, {2, L}, {1, W}, {2, R}, {3, R}}),
        make_ordering({{2, L}, {3, L}, {1, W}, {3, R}, {2, R}}),
    };
    return all;
}

inline std::optional<BubbleType> Ordering::admissible_type() const {
    const auto& all = ten_orderings();
    if (*this == all[0]) return BubbleType::T213;
    if (*this == all[3]) return BubbleType::T3123;
    if (*this == all[5]) return BubbleType::T2313;
    if (*this == all[8]) return BubbleType::T32123;
    return std::nullopt;
}

/// Result of the constrained direct minimization over one ordering.
struct OrderingMinimum {
    double perimeter = std::numeric_limits<double>::infinity();
    std::vector<double> boundary_points;
    double translation = 0.0;                  // leftmost boundary point
    std::vector<double> split_fractions;       // per split bubble, ℓ-appearance order
    std::vector<double> round_minima;          // best-so-far after coarse + each refinement
};

namespace detail {

// Boundary-point offsets relative to the translation parameter. Offset of
// point j is k + sum of u_dim over the mask bits, where u_dim is the split
// dim's left-half width. For standard nested shapes masks are prefixes of the
// dim order, so points bucket cleanly by their highest dim.
struct ScanPoint {
    double k = 0.0;
    unsigned mask = 0;
};

struct ScanPlan {
    double total = 0.0;
    int n_splits = 0;
    std::array<double, 2> split_volume{0.0, 0.0};
    std::vector<ScanPoint> level[3];  // bucketed by highest dim (0: none)
};

inline ScanPlan make_scan_plan(const Ordering& ordering, double v1, double v2, double v3) {
    const std::array<double, 4> vol{0.0, v1, v2, v3};
    const auto splits = ordering.split_bubbles();
    if (splits.size() > 2)
        throw std::invalid_argument("minimize_ordering: more than two split bubbles unsupported");

    ScanPlan plan;
    plan.n_splits = int(splits.size());
    for (std::size_t i = 0; i < splits.size(); ++i) plan.split_volume[i] = vol[splits[i]];

    auto dim_of = [&](int bubble) {
        for (std::size_t i = 0; i < splits.size(); ++i)
            if (splits[i] == bubble) return int(i);
        throw std::logic_error("minimize_ordering: split bubble without dim");
    };

    double k = 0.0;
    unsigned mask = 0;
    std::vector<ScanPoint> pts{{0.0, 0u}};
    for (const auto& c : ordering.components) {
        switch (c.part) {
            case ComponentPart::whole:
                k += vol[c.bubble];
                break;
            case ComponentPart::left:
                mask |= 1u << dim_of(c.bubble);
                break;
            case ComponentPart::right:
                k += vol[c.bubble];
                mask &= ~(1u << dim_of(c.bubble));
                break;
        }
        pts.push_back({k, mask});
    }
    plan.total = v1 + v2 + v3;
    for (const auto& p : pts) {
        int lvl = 0;
        if (p.mask & 2u) lvl = 2;
        else if (p.mask & 1u) lvl = 1;
        // Nested shapes never produce a dim-1 contribution without dim-0.
        if (lvl == 2 && !(p.mask & 1u))
            throw std::logic_error("minimize_ordering: non-nested split masks");
        plan.level[lvl].push_back(p);
    }
    return plan;
}

struct ScanBest {
    double value = std::numeric_limits<double>::infinity();
    std::array<int, 3> index{0, 0, 0};
};

// Exhaustive scan over the sample cross-product, hoisting each boundary
// point's density evaluation into the outermost loop whose dims it uses.
// First strictly-smaller value wins, so the result is independent of how the
// translation range is chunked across workers.
template <Density D>
void scan_samples(const D& d, const ScanPlan& plan,
                  std::span<const double> t_samples, int t_begin, int t_end,
                  std::span<const double> s1_samples, std::span<const double> s2_samples,
                  ScanBest& best) {
    const auto& lvl0 = plan.level[0];
    const auto& lvl1 = plan.level[1];
    const auto& lvl2 = plan.level[2];
    for (int it = t_begin; it < t_end; ++it) {
        const double t = t_samples[it];
        double sum0 = 0.0;
        for (const auto& p : lvl0) sum0 += d.value(t + p.k);
        if (plan.n_splits == 0) {
            if (sum0 < best.value) best = {sum0, {it, 0, 0}};
            continue;
        }
        for (int i1 = 0; i1 < int(s1_samples.size()); ++i1) {
            const double u1 = s1_samples[i1] * plan.split_volume[0];
            double sum1 = sum0;
            for (const auto& p : lvl1) sum1 += d.value(t + p.k + u1);
            if (plan.n_splits == 1) {
                if (sum1 < best.value) best = {sum1, {it, i1, 0}};
                continue;
            }
            for (int i2 = 0; i2 < int(s2_samples.size()); ++i2) {
                const double u12 = u1 + s2_samples[i2] * plan.split_volume[1];
                double val = sum1;
                for (const auto& p : lvl2) val += d.value(t + p.k + u12);
                if (val < best.value) best = {val, {it, i1, i2}};
            }
        }
    }
}

inline std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> out(count);
    if (count == 1) { out[0] = 0.5 * (lo + hi); return out; }
    for (int i = 0; i < count; ++i)
        out[i] = lo + (hi - lo) * double(i) / double(count - 1);
    out.front() = lo;
    out.back() = hi;
    return out;
}

template <Density D>
ScanBest scan_parallel(const D& d, const ScanPlan& plan,
                       std::span<const double> t_samples,
                       std::span<const double> s1_samples,
                       std::span<const double> s2_samples, int threads) {
    const int nt = int(t_samples.size());
    const int workers = std::max(1, std::min(threads, nt));
    if (workers == 1) {
        ScanBest best;
        scan_samples(d, plan, t_samples, 0, nt, s1_samples, s2_samples, best);
        return best;
    }
    std::vector<ScanBest> partial(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        const int begin = nt * w / workers;
        const int end = nt * (w + 1) / workers;
        pool.emplace_back([&, w, begin, end] {
            scan_samples(d, plan, t_samples, begin, end, s1_samples, s2_samples, partial[w]);
        });
    }
    for (auto& th : pool) th.join();
    // Merge in chunk order; strict comparison keeps the earliest chunk on
    // ties, matching the serial scan.
    ScanBest best = partial[0];
    for (int w = 1; w < workers; ++w)
        if (partial[w].value < best.value) best = partial[w];
    return best;
}

}  // namespace detail

/// Directly minimizes the perimeter sum over the ordering's free parameters:
/// an exhaustive coarse grid (`grid` cells per dimension; the translation
/// spans [-2T, T] with T the total volume, split fractions sit on an open
/// grid excluding 0 and 1 by half a cell) followed by three rounds of local
/// refinement, each re-scanning a window of one previous cell around the best
/// point at 10x finer resolution. Scanning order is deterministic and the
/// reported minimum is independent of `threads`.
template <Density D>
OrderingMinimum minimize_ordering(const D& d, const Ordering& ordering, double v1, double v2,
                                  double v3, int grid = 512, int threads = 1) {
    if (!ordering.valid()) throw std::invalid_argument("minimize_ordering: invalid ordering");
    if (grid < 16) throw std::invalid_argument("minimize_ordering: grid must be >= 16");
    if (!(v1 > 0.0 && v2 > 0.0 && v3 > 0.0))
        throw std::invalid_argument("minimize_ordering: volumes must be positive");

    const detail::ScanPlan plan = detail::make_scan_plan(ordering, v1, v2, v3);
    const double total = plan.total;
    const int n_splits = plan.n_splits;

    // Coarse pass.
    std::vector<double> t_samples = detail::linspace(-2.0 * total, total, grid + 1);
    std::vector<double> s_samples[2];
    for (int k = 0; k < n_splits; ++k) {
        s_samples[k].resize(grid);
        for (int j = 0; j < grid; ++j) s_samples[k][j] = (j + 0.5) / double(grid);
    }
    detail::ScanBest best =
        detail::scan_parallel(d, plan, t_samples, s_samples[0], s_samples[1], threads);

    OrderingMinimum result;
    result.round_minima.push_back(best.value);

    // Refinement window half-widths, in cells of the previous round. The
    // best lattice point can sit several cells from the true minimum along
    // the valley where a split fraction compensates a translation shift, so
    // each split dimension's window covers the misalignment of all coarser
    // dimensions: half their spans, measured in this dimension's volume.
    const int t_halfwidth = 3;
    std::array<int, 2> s_halfwidth{0, 0};
    {
        double coarser_span = 3.0 * total;
        for (int k = 0; k < n_splits; ++k) {
            const double cells = coarser_span / (2.0 * plan.split_volume[k]) + 1.0;
            s_halfwidth[k] = int(std::min(cells + 1.0, double(grid / 2)));
            coarser_span += plan.split_volume[k];
        }
    }

    double t_cell = 3.0 * total / double(grid);
    double s_cell = 1.0 / double(grid);
    double best_t = t_samples[best.index[0]];
    std::array<double, 2> best_s{0.0, 0.0};
    for (int k = 0; k < n_splits; ++k) best_s[k] = s_samples[k][best.index[1 + k]];

    for (int round = 1; round <= 3; ++round) {
        const double t_lo = std::max(-2.0 * total, best_t - t_halfwidth * t_cell);
        const double t_hi = std::min(total, best_t + t_halfwidth * t_cell);
        std::vector<double> rt = detail::linspace(t_lo, t_hi, 20 * t_halfwidth + 1);
        std::vector<double> rs[2];
        const double s_margin = 0.5 * s_cell / 10.0;
        for (int k = 0; k < n_splits; ++k) {
            const double lo = std::max(s_margin, best_s[k] - s_halfwidth[k] * s_cell);
            const double hi = std::min(1.0 - s_margin, best_s[k] + s_halfwidth[k] * s_cell);
            rs[k] = detail::linspace(lo, hi, 20 * s_halfwidth[k] + 1);
        }
        detail::ScanBest round_best =
            detail::scan_parallel(d, plan, rt, rs[0], rs[1], threads);
        if (round_best.value < best.value) {
            best.value = round_best.value;
            best_t = rt[round_best.index[0]];
            for (int k = 0; k < n_splits; ++k) best_s[k] = rs[k][round_best.index[1 + k]];
        }
        result.round_minima.push_back(best.value);
        t_cell /= 10.0;
        s_cell /= 10.0;
    }

    result.perimeter = best.value;
    result.translation = best_t;
    result.split_fractions.assign(best_s.begin(), best_s.begin() + n_splits);

    // Reconstruct the boundary points of the best configuration.
    const std::array<double, 4> vol{0.0, v1, v2, v3};
    const auto splits = ordering.split_bubbles();
    auto split_fraction = [&](int bubble) {
        for (std::size_t i = 0; i < splits.size(); ++i)
            if (splits[i] == bubble) return best_s[i];
        throw std::logic_error("minimize_ordering: missing split fraction");
    };
    result.boundary_points.push_back(best_t);
    double w = best_t;
    for (const auto& c : ordering.components) {
        double width = vol[c.bubble];
        if (c.part == ComponentPart::left) width = split_fraction(c.bubble) * vol[c.bubble];
        if (c.part == ComponentPart::right) width = (1.0 - split_fraction(c.bubble)) * vol[c.bubble];
        w += width;
        result.boundary_points.push_back(w);
    }
    return result;
}

/// Outcome of minimizing every candidate ordering.
struct BruteforceResult {
    std::size_t winner_index = 0;  // into orderings()
    std::vector<OrderingMinimum> minima;

    const OrderingMinimum& winning_minimum() const { return minima[winner_index]; }
};

/// Minimizes all ten candidate orderings and returns the global argmin
/// (earliest ordering wins exact ties). This is the finite-resolution
/// evidence that only the four admissible shapes ever win.
template <Density D>
BruteforceResult global_bruteforce(const D& d, double v1, double v2, double v3, int grid = 512,
                                   int threads = 1) {
    BruteforceResult result;
    const auto& all = ten_orderings();
    result.minima.reserve(all.size());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < all.size(); ++i) {
        result.minima.push_back(minimize_ordering(d, all[i], v1, v2, v3, grid, threads));
        if (result.minima.back().perimeter < best) {
            best = result.minima.back().perimeter;
            result.winner_index = i;
        }
    }
    return result;
}

}  // namespace bubbles

#endif  // BUBBLES_ORACLE_HPP
