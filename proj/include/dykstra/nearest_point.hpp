#pragma once

#include <cmath>
#include <numbers>
#include <optional>

#include "dykstra/sets.hpp"

namespace dykstra
{

// Brute-force search for the nearest point of A ∩ B. Uses only membership
// tests (and the line parameterisation when a line is involved); it never
// iterates projections, so it can stand as an independent reference for the
// iterative solvers.
template <typename Scalar>
struct NearestPointOptions
{
    Scalar window_scale = 8;  // half-width of the search window is window_scale * (1 + ||z||)
    int bisection_steps = 60;
    int initial_grid = 129;   // per axis, doubled until a feasible sample is found
    int max_grid = 2049;
    int line_samples = 1 << 14;
    int angles = 1024;
    int golden_steps = 90;
};

namespace detail
{

template <typename Scalar>
bool in_both(const SetDescriptor<Scalar> &a, const SetDescriptor<Scalar> &b, const Point<Scalar> &x)
{
    return contains(a, x, Scalar(0)) && contains(b, x, Scalar(0));
}

// Feasible parameters of a convex one-parameter family form an interval;
// locate it on a grid, sharpen both ends by bisection and clamp the
// unconstrained minimiser into it.
template <typename Scalar, typename Feasible>
std::optional<Scalar> nearest_parameter(Feasible feasible, Scalar target, Scalar lo, Scalar hi,
                                        const NearestPointOptions<Scalar> &opt)
{
    const int m = opt.line_samples;
    const Scalar h = (hi - lo) / Scalar(m - 1);
    auto at = [&](int i) { return i == m - 1 ? hi : lo + h * Scalar(i); };
    int first = -1, last = -1;
    for (int i = 0; i < m; ++i) {
        if (feasible(at(i))) {
            if (first < 0)
                first = i;
            last = i;
        }
    }
    if (first < 0)
        return std::nullopt;

    auto sharpen = [&](Scalar inside, Scalar outside) {
        for (int k = 0; k < opt.bisection_steps; ++k) {
            const Scalar mid = inside + (outside - inside) / 2;
            if (feasible(mid))
                inside = mid;
            else
                outside = mid;
        }
        return inside;
    };
    const Scalar left = first == 0 ? lo : sharpen(at(first), at(first - 1));
    const Scalar right = last == m - 1 ? hi : sharpen(at(last), at(last + 1));
    if (target <= left)
        return left;
    if (target >= right)
        return right;
    return target;
}

} // namespace detail

/// Nearest point of A ∩ B to z, by grid search over the window of half-width
/// window_scale * (1 + ||z||) centred at z followed by bisection refinement.
/// Throws InfeasibleError when no feasible point is found in the window.
template <typename Scalar>
Point<Scalar> nearest_point_oracle(const SetDescriptor<Scalar> &a, const SetDescriptor<Scalar> &b,
                                   const Point<Scalar> &z, const NearestPointOptions<Scalar> &opt = {})
{
    if (dimension(a) != dimension(b) || z.size() != dimension(a))
        throw UsageError("nearest_point_oracle: dimension mismatch");
    if (!all_finite(z))
        throw UsageError("nearest_point_oracle: z must be finite");
    if (detail::in_both(a, b, z))
        return z;

    const Scalar half = opt.window_scale * (1 + z.norm());

    if (z.size() == 1) {
        auto feasible = [&](Scalar t) { return detail::in_both(a, b, make_point(t)); };
        const auto t = detail::nearest_parameter<Scalar>(feasible, z(0), z(0) - half, z(0) + half, opt);
        if (!t)
            throw InfeasibleError("no feasible point in the search window");
        return make_point(*t);
    }

    const auto *line_a = std::get_if<Line<Scalar>>(&a);
    const auto *line_b = std::get_if<Line<Scalar>>(&b);
    const Vec2<Scalar> zz = as_vec2(z);

    if (line_a && line_b) {
        const Scalar det = detail::cross(line_a->v, line_b->v);
        if (std::abs(det) < Scalar(1e-14)) {
            if (std::abs((line_b->u - line_a->u).dot(line_a->v)) > Scalar(1e-12))
                throw InfeasibleError("parallel lines do not meet");
            const Vec2<Scalar> w(-line_a->v(1), line_a->v(0));
            return as_point<Scalar>(line_a->u + (zz - line_a->u).dot(w) * w);
        }
        // Solve <x, va> = <ua, va>, <x, vb> = <ub, vb>.
        Eigen::Matrix<Scalar, 2, 2> m;
        m.row(0) = line_a->v.transpose();
        m.row(1) = line_b->v.transpose();
        const Vec2<Scalar> rhs(line_a->u.dot(line_a->v), line_b->u.dot(line_b->v));
        return as_point<Scalar>(m.partialPivLu().solve(rhs));
    }

    if (line_a || line_b) {
        const Line<Scalar> &line = line_a ? *line_a : *line_b;
        const SetDescriptor<Scalar> &other = line_a ? b : a;
        const Vec2<Scalar> w(-line.v(1), line.v(0));
        auto at = [&](Scalar t) { return as_point<Scalar>(line.u + t * w); };
        auto feasible = [&](Scalar t) { return contains(other, at(t), Scalar(0)); };
        const Scalar target = (zz - line.u).dot(w);
        const Scalar reach = half * std::numbers::sqrt2_v<Scalar>;
        const auto t = detail::nearest_parameter<Scalar>(feasible, target, target - reach, target + reach, opt);
        if (!t)
            throw InfeasibleError("line does not meet the other set in the search window");
        return at(*t);
    }

    // Both sets are full-dimensional. Sample the window for feasible points;
    // their mean is feasible by convexity and serves as the anchor from which
    // the boundary is traced radially.
    const Vec2<Scalar> wlo = zz.array() - half;
    const Vec2<Scalar> whi = zz.array() + half;
    Vec2<Scalar> anchor = Vec2<Scalar>::Zero();
    long found = 0;
    for (int grid = opt.initial_grid; grid <= opt.max_grid && found == 0; grid = 2 * grid - 1) {
        const Scalar h = 2 * half / Scalar(grid - 1);
        for (int i = 0; i < grid; ++i) {
            for (int j = 0; j < grid; ++j) {
                const Point<Scalar> x = make_point(wlo(0) + h * Scalar(i), wlo(1) + h * Scalar(j));
                if (detail::in_both(a, b, x)) {
                    anchor += as_vec2(x);
                    ++found;
                }
            }
        }
    }
    if (found == 0)
        throw InfeasibleError("no feasible point in the search window");
    anchor /= Scalar(found);
    if (!detail::in_both(a, b, as_point<Scalar>(anchor)))
        throw InfeasibleError("feasible samples do not span a convex region");

    auto boundary = [&](Scalar theta) -> Vec2<Scalar> {
        const Vec2<Scalar> e(std::cos(theta), std::sin(theta));
        Scalar reach = std::numeric_limits<Scalar>::infinity();
        for (int k = 0; k < 2; ++k) {
            if (e(k) > 0)
                reach = std::min(reach, (whi(k) - anchor(k)) / e(k));
            else if (e(k) < 0)
                reach = std::min(reach, (wlo(k) - anchor(k)) / e(k));
        }
        if (detail::in_both(a, b, as_point<Scalar>(anchor + reach * e)))
            return anchor + reach * e;
        Scalar inside = 0, outside = reach;
        for (int k = 0; k < opt.bisection_steps; ++k) {
            const Scalar mid = inside + (outside - inside) / 2;
            if (detail::in_both(a, b, as_point<Scalar>(anchor + mid * e)))
                inside = mid;
            else
                outside = mid;
        }
        return anchor + inside * e;
    };
    auto cost = [&](Scalar theta) { return (boundary(theta) - zz).norm(); };

    const Scalar step = 2 * std::numbers::pi_v<Scalar> / Scalar(opt.angles);
    int best = 0;
    Scalar best_cost = cost(0);
    for (int k = 1; k < opt.angles; ++k) {
        const Scalar c = cost(step * Scalar(k));
        if (c < best_cost) {
            best_cost = c;
            best = k;
        }
    }

    // Golden-section search on the bracket around the best sample.
    const Scalar ratio = (std::sqrt(Scalar(5)) - 1) / 2;
    Scalar lo = step * Scalar(best - 1), hi = step * Scalar(best + 1);
    Scalar x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
    Scalar f1 = cost(x1), f2 = cost(x2);
    for (int k = 0; k < opt.golden_steps; ++k) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = cost(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = cost(x2);
        }
    }
    Scalar theta = f1 <= f2 ? x1 : x2;
    if (std::min(f1, f2) > best_cost)
        theta = step * Scalar(best);
    return as_point<Scalar>(boundary(theta));
}

} // namespace dykstra
