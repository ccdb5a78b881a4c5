#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "dykstra/sets.hpp"

namespace dykstra
{

// Closed-form behaviour of Dykstra's algorithm for a line A = u + {v}^perp
// against the square B = [-1, 1]^2, in the canonical pose
//   v(1) > 0, v(2) > 0, ||v|| = 1, u(2) = 1, -1 < u(1) <= 1.
// In this pose A leaves the square through the top edge at u and continues
// up and to the left; a_1 = P_A z decides the regime.

template <typename Scalar>
struct LineSquareProblem
{
    Vec2<Scalar> u;
    Vec2<Scalar> v;
    Vec2<Scalar> z;

    Line<Scalar> line() const { return {u, v}; }
};

namespace detail
{

template <typename Scalar>
void check_canonical(const Vec2<Scalar> &u, const Vec2<Scalar> &v)
{
    if (!all_finite(u) || !all_finite(v))
        throw PreconditionError("line-square data must be finite");
    if (std::abs(v.norm() - 1) > Scalar(1e-12))
        throw PreconditionError("v must be a unit vector");
    if (!(v(0) > 0 && v(1) > 0))
        throw PreconditionError("v must have two positive coordinates");
    if (u(1) != 1 || !(u(0) > -1 && u(0) <= 1))
        throw PreconditionError("u must lie on the top edge with -1 < u(1) <= 1");
}

template <typename Scalar>
Scalar stall_increment(const Vec2<Scalar> &u, const Vec2<Scalar> &v)
{
    return (u(0) + 1) * v(0) * v(0);
}

} // namespace detail

template <typename Scalar>
LineSquareProblem<Scalar> make_line_square_problem(const Vec2<Scalar> &u, const Vec2<Scalar> &v,
                                                   const Vec2<Scalar> &z)
{
    detail::check_canonical(u, v);
    if (!all_finite(z))
        throw UsageError("z must be finite");
    return {u, v, z};
}

template <typename Scalar>
Vec2<Scalar> first_a(const LineSquareProblem<Scalar> &problem)
{
    return as_vec2<Scalar>(project<Scalar>(problem.line(), as_point(problem.z)));
}

// ---------------------------------------------------------------------------
// Symmetries of the square
// ---------------------------------------------------------------------------

/// Element of the symmetry group of the square: optionally swap the
/// coordinates, then optionally negate coordinate 1 and/or coordinate 2.
struct SquareSymmetry
{
    bool swap = false;
    bool flip1 = false;
    bool flip2 = false;

    int reflections() const { return int(swap) + int(flip1) + int(flip2); }

    template <typename Scalar>
    Vec2<Scalar> apply(const Vec2<Scalar> &x) const
    {
        Vec2<Scalar> y = swap ? Vec2<Scalar>(x(1), x(0)) : x;
        if (flip1)
            y(0) = -y(0);
        if (flip2)
            y(1) = -y(1);
        return y;
    }

    template <typename Scalar>
    Vec2<Scalar> invert(const Vec2<Scalar> &y) const
    {
        Vec2<Scalar> x = y;
        if (flip1)
            x(0) = -x(0);
        if (flip2)
            x(1) = -x(1);
        return swap ? Vec2<Scalar>(x(1), x(0)) : x;
    }

    std::string describe() const
    {
        if (reflections() == 0)
            return "identity";
        std::string out;
        auto add = [&](std::string_view s) {
            if (!out.empty())
                out += "+";
            out += s;
        };
        if (swap)
            add("swap");
        if (flip1)
            add("flip1");
        if (flip2)
            add("flip2");
        return out;
    }

    bool operator==(const SquareSymmetry &) const = default;
};

/// All eight symmetries, in order of preference: fewest reflections first,
/// then a coordinate-2 flip before a coordinate-1 flip before a swap.
inline std::array<SquareSymmetry, 8> square_symmetries_by_preference()
{
    return {{{false, false, false},
             {false, false, true},
             {false, true, false},
             {true, false, false},
             {false, true, true},
             {true, false, true},
             {true, true, false},
             {true, true, true}}};
}

template <typename Scalar>
struct CanonicalPose
{
    LineSquareProblem<Scalar> problem;
    SquareSymmetry transform; // maps original coordinates to canonical ones
};

/// A = {x : x(axis) = alpha} with |alpha| <= 1 (axis 0 or 1).
template <typename Scalar>
struct ParallelCase
{
    int axis;
    Scalar alpha;
    Vec2<Scalar> z;

    Line<Scalar> line() const
    {
        Vec2<Scalar> u = Vec2<Scalar>::Zero(), v = Vec2<Scalar>::Zero();
        u(axis) = alpha;
        v(axis) = 1;
        return {u, v};
    }
};

template <typename Scalar>
using Normalization = std::variant<CanonicalPose<Scalar>, ParallelCase<Scalar>>;

/// Brings a line (through u with normal v), the square and z into canonical
/// pose using the symmetries of the square.
///
/// Among the symmetries that produce a canonical pose, the first (in
/// preference order) whose transformed a_1 = P_A z sits on the top-edge side
/// of u or on the segment A ∩ B is chosen; if none does, the first canonical
/// one is returned and classification reports OutOfScopeOrientation.
/// Lines parallel to a side give a ParallelCase instead.
///
/// Throws InfeasibleError if the line misses the square and DegenerateError
/// if it only touches a corner or runs through two opposite corners.
template <typename Scalar>
Normalization<Scalar> normalize_symmetry(const Vec2<Scalar> &u, const Vec2<Scalar> &v, const Vec2<Scalar> &z)
{
    if (!all_finite(z))
        throw UsageError("z must be finite");
    const Line<Scalar> line = make_line(u, v);
    const Vec2<Scalar> &n = line.v;
    const Scalar level = n.dot(line.u);
    const Scalar tiny = Scalar(1e-12);

    for (int axis = 0; axis < 2; ++axis) {
        if (std::abs(n(1 - axis)) <= tiny) {
            const Scalar alpha = level / n(axis);
            if (std::abs(alpha) > 1)
                throw InfeasibleError("line misses the square");
            return ParallelCase<Scalar>{axis, alpha, z};
        }
    }

    const Scalar support = std::abs(n(0)) + std::abs(n(1));
    const Scalar slack = Scalar(1e-14) * support;
    if (std::abs(level) > support + slack)
        throw InfeasibleError("line misses the square");
    if (std::abs(level) >= support - slack)
        throw DegenerateError("line touches the square only at a corner");

    const Vec2<Scalar> a1 = as_vec2<Scalar>(project<Scalar>(line, as_point(z)));
    std::optional<CanonicalPose<Scalar>> fallback;
    for (const SquareSymmetry &t : square_symmetries_by_preference()) {
        Vec2<Scalar> vt = t.apply(n);
        if (vt(0) * vt(1) <= 0)
            continue;
        if (vt(0) < 0)
            vt = -vt;
        const Scalar c = vt.dot(t.apply(line.u));
        const Scalar top = (c - vt(1)) / vt(0);
        if (!(top > -1 && top <= 1))
            continue;
        const Vec2<Scalar> ut(top, Scalar(1));
        const Vec2<Scalar> at = t.apply(a1);
        CanonicalPose<Scalar> pose{{ut, vt, t.apply(z)}, t};
        const bool upper_side = at(1) > 1;
        const bool on_segment = at(0) >= ut(0) && at(0) <= 1 && std::abs(at(1)) <= 1;
        if (upper_side || on_segment)
            return pose;
        if (!fallback)
            fallback = pose;
    }
    if (fallback)
        return *fallback;
    throw DegenerateError("line runs through two opposite corners; no canonical pose");
}

// ---------------------------------------------------------------------------
// Regions
// ---------------------------------------------------------------------------

enum class RegionKind
{
    RapidFinite,
    ParallelFinite,
    MapCoincident,
    Stalling,
    OutOfScopeOrientation
};

constexpr std::string_view region_name(RegionKind kind)
{
    switch (kind) {
    case RegionKind::RapidFinite:
        return "RapidFinite";
    case RegionKind::ParallelFinite:
        return "ParallelFinite";
    case RegionKind::MapCoincident:
        return "MapCoincident";
    case RegionKind::Stalling:
        return "Stalling";
    case RegionKind::OutOfScopeOrientation:
        return "OutOfScopeOrientation";
    }
    return "";
}

struct RegionClass
{
    RegionKind kind = RegionKind::OutOfScopeOrientation;
    Index predicted_stall = 0; // >= 1 exactly when kind == Stalling

    bool operator==(const RegionClass &) const = default;
};

/// Number n of sweeps with b_1 = ... = b_n = (-1, 1) before b_{n+1} leaves
/// the corner: n = 1 + floor((-1 - a_1(1)) / ((u(1) + 1) v(1)^2)).
///
/// The ratio is evaluated in floating point, so when it lies within an ulp of
/// an integer the floor may land on either side.
template <typename Scalar>
Index stall_length(const Vec2<Scalar> &a1, const Vec2<Scalar> &u, const Vec2<Scalar> &v)
{
    detail::check_canonical(u, v);
    if (!(a1(0) <= -1 && a1(1) > 1))
        throw PreconditionError("stall_length requires a_1(1) <= -1 and a_1(2) > 1");
    const Scalar ratio = (-1 - a1(0)) / detail::stall_increment(u, v);
    if (!(ratio < Scalar(4e18)))
        throw PreconditionError("stall length does not fit an integer");
    return 1 + static_cast<Index>(std::floor(ratio));
}

/// First coordinate of b_{n+1}, the first iterate off the corner:
/// a_1(1) + n (u(1) + 1) v(1)^2. Its second coordinate is 1.
template <typename Scalar>
Scalar break_free_abscissa(const Vec2<Scalar> &a1, const Vec2<Scalar> &u, const Vec2<Scalar> &v, Index n)
{
    if (n != stall_length(a1, u, v))
        throw PreconditionError("break_free_abscissa: n is not the stall length");
    return a1(0) + Scalar(n) * detail::stall_increment(u, v);
}

/// a_{n+1} = P_A b_n for b_n on the top edge left of u.
template <typename Scalar>
Vec2<Scalar> closed_form_a_next(const Vec2<Scalar> &b, const Vec2<Scalar> &u, const Vec2<Scalar> &v)
{
    detail::check_canonical(u, v);
    if (b(1) != 1 || !(b(0) <= u(0)))
        throw PreconditionError("closed_form_a_next requires b = (b(1), 1) with b(1) <= u(1)");
    return b + (u(0) - b(0)) * v(0) * v;
}

/// q_n while the iteration is stalled at the corner (1 <= n <= stall length).
template <typename Scalar>
Vec2<Scalar> closed_form_q(Index n, const Vec2<Scalar> &a1, const Vec2<Scalar> &u, const Vec2<Scalar> &v)
{
    if (n < 1 || n > stall_length(a1, u, v))
        throw PreconditionError("closed_form_q requires 1 <= n <= stall length");
    return Scalar(n - 1) * (u(0) + 1) * v(0) * v + a1 + Vec2<Scalar>(1, -1);
}

/// Whether b_{n+1} is still the corner (-1, 1), given b_1 = ... = b_n = (-1, 1):
/// n (u(1) + 1) v(1)^2 + a_1(1) <= -1.
template <typename Scalar>
bool stall_condition(Index n, const Vec2<Scalar> &a1, const Vec2<Scalar> &u, const Vec2<Scalar> &v)
{
    detail::check_canonical(u, v);
    if (n < 1)
        throw PreconditionError("stall_condition requires n >= 1");
    return Scalar(n) * detail::stall_increment(u, v) + a1(0) <= -1;
}

/// Hypotheses are tested in the order RapidFinite, MapCoincident, Stalling.
template <typename Scalar>
RegionClass classify_region(const LineSquareProblem<Scalar> &problem)
{
    detail::check_canonical(problem.u, problem.v);
    const Vec2<Scalar> a1 = first_a(problem);
    const Scalar u1 = problem.u(0);
    if (u1 <= a1(0) && a1(0) <= 1 && std::abs(a1(1)) <= 1)
        return {RegionKind::RapidFinite, 0};
    if (-1 < a1(0) && a1(0) < u1 && 1 < a1(1))
        return {RegionKind::MapCoincident, 0};
    if (a1(0) <= -1 && 1 < a1(1))
        return {RegionKind::Stalling, stall_length(a1, problem.u, problem.v)};
    return {RegionKind::OutOfScopeOrientation, 0};
}

template <typename Scalar>
RegionClass classify_region(const ParallelCase<Scalar> &)
{
    return {RegionKind::ParallelFinite, 0};
}

/// Limit of the main sequences (= P_{A∩B} z) in canonical coordinates.
template <typename Scalar>
Vec2<Scalar> analytic_limit(const LineSquareProblem<Scalar> &problem)
{
    switch (classify_region(problem).kind) {
    case RegionKind::RapidFinite:
        return first_a(problem);
    case RegionKind::MapCoincident:
    case RegionKind::Stalling:
        return problem.u;
    default:
        throw UnsupportedError("no closed-form limit for this orientation");
    }
}

/// P_B P_A z, which is the limit after a single sweep.
template <typename Scalar>
Vec2<Scalar> analytic_limit(const ParallelCase<Scalar> &parallel)
{
    const Point<Scalar> pa = project<Scalar>(parallel.line(), as_point(parallel.z));
    return as_vec2<Scalar>(project<Scalar>(unit_square<Scalar>(), pa));
}

/// Limit expressed in the caller's original coordinates.
template <typename Scalar>
Vec2<Scalar> analytic_limit(const Normalization<Scalar> &normalization)
{
    if (const auto *pose = std::get_if<CanonicalPose<Scalar>>(&normalization))
        return pose->transform.invert(analytic_limit(pose->problem));
    return analytic_limit(std::get<ParallelCase<Scalar>>(normalization));
}

template <typename Scalar>
RegionClass classify_region(const Normalization<Scalar> &normalization)
{
    return std::visit([](const auto &n) {
        if constexpr (std::is_same_v<std::decay_t<decltype(n)>, CanonicalPose<Scalar>>)
            return classify_region(n.problem);
        else
            return classify_region(n);
    }, normalization);
}

} // namespace dykstra
