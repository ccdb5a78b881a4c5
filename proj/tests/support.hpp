#pragma once

#include <cmath>
#include <random>

#include "dykstra/line_square.hpp"

namespace dykstra::testing
{

using Rng = std::mt19937_64;

inline double uniform(Rng &rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// u on the top edge, v a unit vector with positive coordinates.
struct CanonicalLine
{
    Vec2<double> u;
    Vec2<double> v;
};

inline CanonicalLine random_canonical_line(Rng &rng, double v1_lo = 0.05, double v1_hi = 0.95)
{
    const double u1 = uniform(rng, -1, 1);
    const double v1 = uniform(rng, v1_lo, v1_hi);
    Vec2<double> v(v1, std::sqrt(1 - v1 * v1));
    v.normalize();
    return {Vec2<double>(u1, 1), v};
}

// Point of the line with first coordinate x1.
inline Vec2<double> point_on_line(const CanonicalLine &line, double x1)
{
    const Vec2<double> w(-line.v(1), line.v(0));
    const double t = (line.u(0) - x1) / line.v(1);
    return line.u + t * w;
}

// A start z whose projection onto the line has first coordinate close to x1;
// `offset` moves z off the line along the normal.
inline Vec2<double> start_with_a1(const CanonicalLine &line, double x1, double offset)
{
    return point_on_line(line, x1) + offset * line.v;
}

} // namespace dykstra::testing
