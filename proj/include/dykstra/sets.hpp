#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string_view>
#include <type_traits>
#include <variant>

#include "dykstra/errors.hpp"

namespace dykstra
{

// A point of the plane, or of the real line for the interval sets. Storage is
// inline (at most two coefficients), so copies never allocate.
template <typename Scalar>
using Point = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, Eigen::ColMajor, 2, 1>;

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

using Index = long long;

template <typename Scalar>
Point<Scalar> make_point(Scalar x1, Scalar x2)
{
    Point<Scalar> p(2);
    p << x1, x2;
    return p;
}

template <typename Scalar>
Point<Scalar> make_point(Scalar x)
{
    Point<Scalar> p(1);
    p << x;
    return p;
}

template <typename Scalar>
Point<Scalar> as_point(const Vec2<Scalar> &x)
{
    return make_point(x(0), x(1));
}

template <typename Scalar>
Vec2<Scalar> as_vec2(const Point<Scalar> &x)
{
    if (x.size() != 2)
        throw UsageError("expected a point of the plane");
    return Vec2<Scalar>(x(0), x(1));
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived> &x)
{
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!std::isfinite(x(i)))
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Set zoo. Construct through the make_* functions, which enforce the
// invariants; the aggregates themselves are plain data.
// ---------------------------------------------------------------------------

// Axis-aligned box; bounds may be infinite, which makes the box a slab,
// a half-plane or a quadrant.
template <typename Scalar>
struct Box
{
    Vec2<Scalar> lo;
    Vec2<Scalar> hi;
};

// The line u + {v}^perp, with ||v|| = 1.
template <typename Scalar>
struct Line
{
    Vec2<Scalar> u;
    Vec2<Scalar> v;
};

// {x : <normal, x> <= offset}
template <typename Scalar>
struct Halfspace
{
    Vec2<Scalar> normal;
    Scalar offset;
};

template <typename Scalar>
struct Ball
{
    Vec2<Scalar> center;
    Scalar radius;
};

// The nonnegative quadrant of the plane.
template <typename Scalar>
struct Orthant
{
};

// Closed interval of the real line; either end may be infinite.
template <typename Scalar>
struct Interval
{
    Scalar lo;
    Scalar hi;
};

template <typename Scalar>
using SetDescriptor = std::variant<Box<Scalar>, Line<Scalar>, Halfspace<Scalar>,
                                   Ball<Scalar>, Orthant<Scalar>, Interval<Scalar>>;

template <typename Scalar>
Box<Scalar> make_box(const Vec2<Scalar> &lo, const Vec2<Scalar> &hi)
{
    for (int i = 0; i < 2; ++i) {
        if (std::isnan(lo(i)) || std::isnan(hi(i)))
            throw UsageError("box bounds must not be NaN");
        if (!(lo(i) <= hi(i)))
            throw UsageError("box requires lo <= hi in every coordinate");
        if (lo(i) == std::numeric_limits<Scalar>::infinity() ||
            hi(i) == -std::numeric_limits<Scalar>::infinity())
            throw UsageError("box would be empty");
    }
    return {lo, hi};
}

template <typename Scalar>
Box<Scalar> unit_square()
{
    return {Vec2<Scalar>(-1, -1), Vec2<Scalar>(1, 1)};
}

// Rejects ||v|| < 1e-12. A direction that is already unit length to within a
// few ulps is stored as given, so exactly representable unit normals such as
// (0.6, 0.8) are not perturbed by the division.
template <typename Scalar>
Line<Scalar> make_line(const Vec2<Scalar> &u, const Vec2<Scalar> &v)
{
    if (!all_finite(u) || !all_finite(v))
        throw UsageError("line data must be finite");
    const Scalar norm = v.norm();
    if (norm < Scalar(1e-12))
        throw UsageError("line normal must be nonzero");
    Vec2<Scalar> unit = v;
    if (std::abs(norm - Scalar(1)) > 4 * std::numeric_limits<Scalar>::epsilon())
        unit /= norm;
    return {u, unit};
}

// Line through two distinct points.
template <typename Scalar>
Line<Scalar> line_through(const Vec2<Scalar> &p, const Vec2<Scalar> &q)
{
    const Vec2<Scalar> d = q - p;
    return make_line<Scalar>(p, Vec2<Scalar>(-d(1), d(0)));
}

template <typename Scalar>
Halfspace<Scalar> make_halfspace(const Vec2<Scalar> &normal, Scalar offset)
{
    if (!all_finite(normal) || !std::isfinite(offset))
        throw UsageError("halfspace data must be finite");
    if (normal.norm() < Scalar(1e-12))
        throw UsageError("halfspace normal must be nonzero");
    return {normal, offset};
}

template <typename Scalar>
Ball<Scalar> make_ball(const Vec2<Scalar> &center, Scalar radius)
{
    if (!all_finite(center) || !std::isfinite(radius))
        throw UsageError("ball data must be finite");
    if (!(radius > 0))
        throw UsageError("ball radius must be positive");
    return {center, radius};
}

template <typename Scalar>
Interval<Scalar> make_interval(Scalar lo, Scalar hi)
{
    if (std::isnan(lo) || std::isnan(hi) || !(lo <= hi))
        throw UsageError("interval requires lo <= hi");
    if (lo == std::numeric_limits<Scalar>::infinity() ||
        hi == -std::numeric_limits<Scalar>::infinity())
        throw UsageError("interval would be empty");
    return {lo, hi};
}

// ---------------------------------------------------------------------------
// Queries on descriptors
// ---------------------------------------------------------------------------

template <typename Scalar>
int dimension(const SetDescriptor<Scalar> &set)
{
    return std::holds_alternative<Interval<Scalar>>(set) ? 1 : 2;
}

template <typename Scalar>
std::string_view kind_name(const SetDescriptor<Scalar> &set)
{
    constexpr std::string_view names[] = {"box", "line", "halfspace", "ball", "orthant", "interval"};
    return names[set.index()];
}

// Affine sets are those whose normal cone is the same subspace at every point.
template <typename Scalar>
bool is_affine(const SetDescriptor<Scalar> &set)
{
    constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();
    if (std::holds_alternative<Line<Scalar>>(set))
        return true;
    if (const auto *box = std::get_if<Box<Scalar>>(&set)) {
        for (int i = 0; i < 2; ++i) {
            const bool free = box->lo(i) == -inf && box->hi(i) == inf;
            const bool pinned = box->lo(i) == box->hi(i);
            if (!free && !pinned)
                return false;
        }
        return true;
    }
    if (const auto *iv = std::get_if<Interval<Scalar>>(&set))
        return (iv->lo == -inf && iv->hi == inf) || iv->lo == iv->hi;
    return false;
}

namespace detail
{

template <class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

template <typename Scalar>
void check_argument(const SetDescriptor<Scalar> &set, const Point<Scalar> &x)
{
    if (x.size() != dimension(set))
        throw UsageError("point dimension does not match the set");
    if (!all_finite(x))
        throw UsageError("point coordinates must be finite");
}

// Returns the stored bound itself when it is active.
template <typename Scalar>
Scalar clamp_exact(Scalar x, Scalar lo, Scalar hi)
{
    if (x < lo)
        return lo;
    if (x > hi)
        return hi;
    return x;
}

template <typename Scalar>
Scalar excess(Scalar x, Scalar lo, Scalar hi)
{
    if (x < lo)
        return lo - x;
    if (x > hi)
        return x - hi;
    return Scalar(0);
}

// Normal cone of [lo, hi] at x, one scalar test.
template <typename Scalar>
bool interval_normal(Scalar x, Scalar d, Scalar lo, Scalar hi, Scalar tol)
{
    if (d > tol && !(hi - x <= tol))
        return false;
    if (d < -tol && !(x - lo <= tol))
        return false;
    return true;
}

template <typename Scalar>
Scalar cross(const Vec2<Scalar> &a, const Vec2<Scalar> &b)
{
    return a(0) * b(1) - a(1) * b(0);
}

// dir is a nonnegative multiple of the unit vector w.
template <typename Scalar>
bool on_ray(const Vec2<Scalar> &w, const Vec2<Scalar> &dir, Scalar tol)
{
    return std::abs(cross(w, dir)) <= tol && w.dot(dir) >= -tol;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Projection, distance, membership, normal cones
// ---------------------------------------------------------------------------

/// Nearest point of `set` to `x`.
///
/// Clamp-based variants (box, orthant, interval) return the stored bound value
/// bit-exactly whenever it is active. Halfspace and ball results are nudged
/// inward by a few ulps when rounding would leave them outside, so the result
/// always passes the exact membership test.
template <typename Scalar>
Point<Scalar> project(const SetDescriptor<Scalar> &set, const Point<Scalar> &x)
{
    detail::check_argument(set, x);
    return std::visit(
        detail::overloaded{
            [&](const Box<Scalar> &s) -> Point<Scalar> {
                return make_point(detail::clamp_exact(x(0), s.lo(0), s.hi(0)),
                                  detail::clamp_exact(x(1), s.lo(1), s.hi(1)));
            },
            [&](const Line<Scalar> &s) -> Point<Scalar> {
                // Dividing by |v|^2 (1 up to rounding) keeps repeated
                // projections from drifting along v.
                const Vec2<Scalar> y = as_vec2(x);
                return as_point<Scalar>(y - ((y - s.u).dot(s.v) / s.v.squaredNorm()) * s.v);
            },
            [&](const Halfspace<Scalar> &s) -> Point<Scalar> {
                Vec2<Scalar> y = as_vec2(x);
                const Scalar slack = s.normal.dot(y) - s.offset;
                if (slack <= 0)
                    return x;
                const Scalar nn = s.normal.squaredNorm();
                y -= (slack / nn) * s.normal;
                Scalar step = std::numeric_limits<Scalar>::epsilon() *
                              (std::abs(s.offset) + s.normal.norm() * y.norm() + 1) / nn;
                while (s.normal.dot(y) > s.offset) {
                    y -= step * s.normal;
                    step *= 2;
                }
                return as_point<Scalar>(y);
            },
            [&](const Ball<Scalar> &s) -> Point<Scalar> {
                const Vec2<Scalar> w = as_vec2(x) - s.center;
                const Scalar r = w.norm();
                if (r <= s.radius)
                    return x;
                Scalar scale = s.radius / r;
                Vec2<Scalar> y = s.center + scale * w;
                while ((y - s.center).norm() > s.radius) {
                    scale *= 1 - 2 * std::numeric_limits<Scalar>::epsilon();
                    y = s.center + scale * w;
                }
                return as_point<Scalar>(y);
            },
            [&](const Orthant<Scalar> &) -> Point<Scalar> {
                return make_point(x(0) < 0 ? Scalar(0) : x(0), x(1) < 0 ? Scalar(0) : x(1));
            },
            [&](const Interval<Scalar> &s) -> Point<Scalar> {
                return make_point(detail::clamp_exact(x(0), s.lo, s.hi));
            },
        },
        set);
}

/// Euclidean distance from `x` to `set`; exactly zero for members of the
/// inequality-defined variants.
template <typename Scalar>
Scalar distance(const SetDescriptor<Scalar> &set, const Point<Scalar> &x)
{
    detail::check_argument(set, x);
    return std::visit(
        detail::overloaded{
            [&](const Box<Scalar> &s) {
                return Vec2<Scalar>(detail::excess(x(0), s.lo(0), s.hi(0)),
                                    detail::excess(x(1), s.lo(1), s.hi(1)))
                    .norm();
            },
            [&](const Line<Scalar> &s) { return std::abs((as_vec2(x) - s.u).dot(s.v)); },
            [&](const Halfspace<Scalar> &s) {
                const Scalar slack = s.normal.dot(as_vec2(x)) - s.offset;
                return slack <= 0 ? Scalar(0) : slack / s.normal.norm();
            },
            [&](const Ball<Scalar> &s) {
                const Scalar r = (as_vec2(x) - s.center).norm();
                return r <= s.radius ? Scalar(0) : r - s.radius;
            },
            [&](const Orthant<Scalar> &) {
                return Vec2<Scalar>(std::min(x(0), Scalar(0)), std::min(x(1), Scalar(0))).norm();
            },
            [&](const Interval<Scalar> &s) { return detail::excess(x(0), s.lo, s.hi); },
        },
        set);
}

/// distance(set, x) <= tol. With tol = 0 this is exact membership for every
/// variant except the line, where it is exact only for points that satisfy
/// the line equation in floating point.
template <typename Scalar>
bool contains(const SetDescriptor<Scalar> &set, const Point<Scalar> &x, Scalar tol = Scalar(0))
{
    if (!(tol >= 0) || !std::isfinite(tol))
        throw UsageError("tolerance must be finite and nonnegative");
    return distance(set, x) <= tol;
}

/// Whether `dir` lies in the normal cone of `set` at `point`, each scalar
/// test relaxed by `tol`.
template <typename Scalar>
bool normal_cone_contains(const SetDescriptor<Scalar> &set, const Point<Scalar> &point,
                          const Point<Scalar> &dir, Scalar tol = Scalar(1e-10))
{
    if (dir.size() != point.size())
        throw UsageError("direction dimension does not match the point");
    if (!all_finite(dir))
        throw UsageError("direction must be finite");
    if (!contains(set, point, tol))
        throw PreconditionError("normal cone queried at a point outside the set");

    return std::visit(
        detail::overloaded{
            [&](const Box<Scalar> &s) {
                return detail::interval_normal(point(0), dir(0), s.lo(0), s.hi(0), tol) &&
                       detail::interval_normal(point(1), dir(1), s.lo(1), s.hi(1), tol);
            },
            [&](const Line<Scalar> &s) {
                return std::abs(detail::cross(s.v, as_vec2(dir))) <= tol;
            },
            [&](const Halfspace<Scalar> &s) {
                const Scalar len = s.normal.norm();
                const Vec2<Scalar> w = s.normal / len;
                const Scalar slack = s.offset / len - w.dot(as_vec2(point));
                if (slack > tol)
                    return dir.cwiseAbs().maxCoeff() <= tol;
                return detail::on_ray(w, as_vec2(dir), tol);
            },
            [&](const Ball<Scalar> &s) {
                const Vec2<Scalar> w = as_vec2(point) - s.center;
                const Scalar r = w.norm();
                if (s.radius - r > tol || r == 0)
                    return dir.cwiseAbs().maxCoeff() <= tol;
                return detail::on_ray<Scalar>(w / r, as_vec2(dir), tol);
            },
            [&](const Orthant<Scalar> &) {
                constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();
                return detail::interval_normal(point(0), dir(0), Scalar(0), inf, tol) &&
                       detail::interval_normal(point(1), dir(1), Scalar(0), inf, tol);
            },
            [&](const Interval<Scalar> &s) {
                return detail::interval_normal(point(0), dir(0), s.lo, s.hi, tol);
            },
        },
        set);
}

} // namespace dykstra
