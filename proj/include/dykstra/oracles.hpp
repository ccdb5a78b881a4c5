#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "dykstra/line_square.hpp"
#include "dykstra/sets.hpp"
#include "dykstra/solvers.hpp"

namespace dykstra
{

/// Closed-form Dykstra records for A = [0, +inf), B = [1, +inf) and a real
/// start z, for sweeps 0..last.
///
/// With n = -floor(z) (z < 1): a_k = 0, p_k = z + k - 1, b_k = 1, q_k = -k for
/// 1 <= k <= n; then a_{n+1} = z + n, p_{n+1} = 0, b_{n+1} = 1, q_{n+1} = z - 1;
/// afterwards a_k = b_k = 1 and p_k = 0. The auxiliary q_k stays at z - 1 for
/// every k >= n + 1: the recursion q_k = a_k + q_{k-1} - b_k never resets it,
/// so a zero value there would be wrong.
/// For z >= 1 every record is a_k = b_k = z with p_k = q_k = 0.
template <typename Scalar>
std::vector<DykstraState<Scalar>> two_interval_trace(const Interval<Scalar> &a, const Interval<Scalar> &b,
                                                     Scalar z, Index last)
{
    constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();
    if (!(a.lo == 0 && a.hi == inf && b.lo == 1 && b.hi == inf))
        throw UnsupportedError("two_interval_trace covers only A = [0, inf), B = [1, inf)");
    if (!std::isfinite(z))
        throw UsageError("z must be finite");
    if (last < 0)
        throw UsageError("last must be nonnegative");

    std::vector<DykstraState<Scalar>> out;
    out.reserve(static_cast<std::size_t>(last + 1));
    out.push_back(initial_dykstra_state(make_point(z)));
    auto push = [&](Index k, Scalar ak, Scalar pk, Scalar bk, Scalar qk) {
        out.push_back({k, make_point(ak), make_point(bk), make_point(pk), make_point(qk)});
    };

    if (z >= 1) {
        for (Index k = 1; k <= last; ++k)
            push(k, z, 0, z, 0);
        return out;
    }

    const Index n = -static_cast<Index>(std::floor(z));
    for (Index k = 1; k <= last; ++k) {
        if (k <= n)
            push(k, 0, z + Scalar(k - 1), 1, Scalar(-k));
        else if (k == n + 1)
            push(k, z + Scalar(n), 0, 1, z - 1);
        else
            push(k, 1, 0, 1, z - 1);
    }
    return out;
}

/// P_B P_K z for the nonnegative orthant K and a ball B centred at the origin;
/// this equals the nearest point of B ∩ K. The reverse composition P_K P_B
/// does not, in general.
template <typename Scalar>
Vec2<Scalar> cone_ball_projection(const Orthant<Scalar> &cone, const Ball<Scalar> &ball, const Vec2<Scalar> &z)
{
    if (ball.center != Vec2<Scalar>::Zero())
        throw UnsupportedError("cone_ball_projection needs a ball centred at the origin");
    const Point<Scalar> pk = project<Scalar>(cone, as_point(z));
    return as_vec2<Scalar>(project<Scalar>(ball, pk));
}

} // namespace dykstra
