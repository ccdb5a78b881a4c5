#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "dykstra/sets.hpp"

namespace dykstra
{

/// One snapshot of Dykstra's iteration. At n = 0 only b (= z), p = 0 and
/// q = 0 are defined; `a` is empty.
template <typename Scalar>
struct DykstraState
{
    Index n = 0;
    std::optional<Point<Scalar>> a;
    Point<Scalar> b;
    Point<Scalar> p;
    Point<Scalar> q;
};

template <typename Scalar>
struct MapState
{
    Index n = 0;
    Point<Scalar> c;
};

template <typename Scalar>
DykstraState<Scalar> initial_dykstra_state(const Point<Scalar> &z)
{
    return {0, std::nullopt, z, Point<Scalar>::Zero(z.size()), Point<Scalar>::Zero(z.size())};
}

template <typename Scalar>
MapState<Scalar> initial_map_state(const Point<Scalar> &z)
{
    return {0, z};
}

enum class Termination
{
    Converged,
    FixpointDetected,
    MaxIterations
};

constexpr std::string_view termination_name(Termination t)
{
    switch (t) {
    case Termination::Converged:
        return "Converged";
    case Termination::FixpointDetected:
        return "FixpointDetected";
    case Termination::MaxIterations:
        return "MaxIterations";
    }
    return "";
}

template <typename Scalar>
struct StopRule
{
    Scalar tol = Scalar(1e-9);
    Index max_iter = 100000;
    // Tolerance of the finite-fixpoint tests. Zero makes them exact.
    Scalar fixpoint_tol = Scalar(1e-13);
};

// Records are contiguous in n starting at 0. For Dykstra the index n counts
// full sweeps; for MAP it counts single projections (c_n).
template <typename Scalar, typename Record>
struct BasicTrace
{
    Point<Scalar> z;
    std::array<SetDescriptor<Scalar>, 2> sets;
    std::vector<Record> records;
    Termination termination = Termination::MaxIterations;
    std::optional<Point<Scalar>> limit;
    int fixpoint_clause = 0; // 1 or 2 when termination == FixpointDetected
};

template <typename Scalar>
using DykstraTrace = BasicTrace<Scalar, DykstraState<Scalar>>;

template <typename Scalar>
using MapTrace = BasicTrace<Scalar, MapState<Scalar>>;

namespace detail
{

template <typename Scalar>
void check_pair(const SetDescriptor<Scalar> &a, const SetDescriptor<Scalar> &b, const Point<Scalar> &z)
{
    if (dimension(a) != dimension(b))
        throw UsageError("sets live in different dimensions");
    if (z.size() != dimension(a))
        throw UsageError("starting point dimension does not match the sets");
    if (!all_finite(z))
        throw UsageError("starting point must be finite");
}

template <typename Scalar>
void check_stop(const StopRule<Scalar> &stop)
{
    if (!(stop.tol >= 0) || !(stop.fixpoint_tol >= 0))
        throw UsageError("tolerances must be nonnegative");
    if (stop.max_iter < 1)
        throw UsageError("max_iter must be at least 1");
}

} // namespace detail

/// a = P_A(b + p), p' = b + p - a, b' = P_B(a + q), q' = a + q - b'.
template <typename Scalar>
DykstraState<Scalar> dykstra_step(const DykstraState<Scalar> &state, const SetDescriptor<Scalar> &a,
                                  const SetDescriptor<Scalar> &b)
{
    DykstraState<Scalar> next;
    next.n = state.n + 1;
    const Point<Scalar> shifted_b = state.b + state.p;
    next.a = project(a, shifted_b);
    next.p = shifted_b - *next.a;
    const Point<Scalar> shifted_a = *next.a + state.q;
    next.b = project(b, shifted_a);
    next.q = shifted_a - next.b;
    return next;
}

/// Moves to c_{n+1}: P_A on odd indices, P_B on even ones.
template <typename Scalar>
MapState<Scalar> map_step(const MapState<Scalar> &state, const SetDescriptor<Scalar> &a,
                          const SetDescriptor<Scalar> &b)
{
    const Index n = state.n + 1;
    return {n, project(n % 2 == 1 ? a : b, state.c)};
}

/// Which finite-termination clause fires between consecutive states:
/// 1 when b_n = a_n, 2 when a_{n+1} = b_n, 0 otherwise. Requires n >= 1 on
/// `prev`; at n = 0 neither clause implies termination.
template <typename Scalar>
int fixpoint_clause(const DykstraState<Scalar> &prev, const DykstraState<Scalar> &next, Scalar tol)
{
    if (next.n != prev.n + 1)
        throw PreconditionError("detect_finite_fixpoint: states are not consecutive");
    if (prev.n < 1)
        return 0;
    if ((prev.b - *prev.a).norm() <= tol)
        return 1;
    if ((*next.a - prev.b).norm() <= tol)
        return 2;
    return 0;
}

template <typename Scalar>
bool detect_finite_fixpoint(const DykstraState<Scalar> &prev, const DykstraState<Scalar> &next, Scalar tol)
{
    return fixpoint_clause(prev, next, tol) != 0;
}

/// Largest componentwise violation of the two conservation identities
/// a_n + p_n = b_{n-1} + p_{n-1} and b_n + q_n = a_n + q_{n-1}.
template <typename Scalar>
Scalar conservation_defect(const DykstraState<Scalar> &prev, const DykstraState<Scalar> &next)
{
    const Scalar first = ((*next.a + next.p) - (prev.b + prev.p)).cwiseAbs().maxCoeff();
    const Scalar second = ((next.b + next.q) - (*next.a + prev.q)).cwiseAbs().maxCoeff();
    return std::max(first, second);
}

/// Iterates Dykstra's algorithm, projecting onto A first.
///
/// Stops with FixpointDetected as soon as b_n = a_n, or a_{n+1} = b_n for
/// some n >= 1 (both up to stop.fixpoint_tol); with Converged once
/// ||b_n - a_n|| <= stop.tol; otherwise after stop.max_iter sweeps.
template <typename Scalar>
DykstraTrace<Scalar> run_dykstra(const SetDescriptor<Scalar> &a, const SetDescriptor<Scalar> &b,
                                 const Point<Scalar> &z, const StopRule<Scalar> &stop = {})
{
    detail::check_pair(a, b, z);
    detail::check_stop(stop);

    DykstraTrace<Scalar> trace{z, {a, b}, {}, Termination::MaxIterations, std::nullopt, 0};
    trace.records.push_back(initial_dykstra_state(z));
    while (trace.records.back().n < stop.max_iter) {
        DykstraState<Scalar> next = dykstra_step(trace.records.back(), a, b);
        const DykstraState<Scalar> &prev = trace.records.back();
        const Scalar gap = (next.b - *next.a).norm();
        if (prev.n >= 1 && (*next.a - prev.b).norm() <= stop.fixpoint_tol) {
            trace.termination = Termination::FixpointDetected;
            trace.fixpoint_clause = 2;
            trace.limit = prev.b;
        } else if (gap <= stop.fixpoint_tol) {
            trace.termination = Termination::FixpointDetected;
            trace.fixpoint_clause = 1;
            trace.limit = next.b;
        } else if (gap <= stop.tol) {
            trace.termination = Termination::Converged;
            trace.limit = next.b;
        }
        trace.records.push_back(std::move(next));
        if (trace.limit)
            break;
    }
    return trace;
}

/// Iterates MAP, P_A first. stop.max_iter bounds the number of sweeps (two
/// projections each). Fixpoint: c_{n+1} = c_n with n >= 1; convergence:
/// ||c_{2n} - c_{2n-1}|| <= stop.tol.
template <typename Scalar>
MapTrace<Scalar> run_map(const SetDescriptor<Scalar> &a, const SetDescriptor<Scalar> &b,
                         const Point<Scalar> &z, const StopRule<Scalar> &stop = {})
{
    detail::check_pair(a, b, z);
    detail::check_stop(stop);

    MapTrace<Scalar> trace{z, {a, b}, {}, Termination::MaxIterations, std::nullopt, 0};
    trace.records.push_back(initial_map_state(z));
    while (trace.records.back().n < 2 * stop.max_iter) {
        MapState<Scalar> next = map_step(trace.records.back(), a, b);
        const MapState<Scalar> &prev = trace.records.back();
        const Scalar move = (next.c - prev.c).norm();
        if (prev.n >= 1 && move <= stop.fixpoint_tol) {
            trace.termination = Termination::FixpointDetected;
            trace.limit = prev.c;
        } else if (next.n % 2 == 0 && move <= stop.tol) {
            trace.termination = Termination::Converged;
            trace.limit = next.c;
        }
        trace.records.push_back(std::move(next));
        if (trace.limit)
            break;
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Finite convergence and Dykstra/MAP coincidence
// ---------------------------------------------------------------------------

struct FiniteConvergence
{
    bool holds = false;
    int clause = 0; // 1: z - P_A z is normal to A at P_B P_A z;  2: A affine and P_B P_A z in A
};

/// Sufficient conditions under which P_{A∩B} z = P_B P_A z and Dykstra
/// terminates after one sweep.
template <typename Scalar>
FiniteConvergence finite_convergence_predicate(const SetDescriptor<Scalar> &a, const SetDescriptor<Scalar> &b,
                                               const Point<Scalar> &z, Scalar tol = Scalar(1e-10))
{
    detail::check_pair(a, b, z);
    const Point<Scalar> pa = project(a, z);
    const Point<Scalar> pbpa = project(b, pa);
    if (contains(a, pbpa, tol) && normal_cone_contains<Scalar>(a, pbpa, z - pa, tol))
        return {true, 1};
    if (is_affine(a) && contains(a, pbpa, tol))
        return {true, 2};
    return {false, 0};
}

template <typename Scalar>
struct CoincidenceReport
{
    bool sequences_coincide = true;     // c_{2n} = b_n and c_{2n+1} = a_{n+1} on the shared horizon
    bool lemma_criterion = true;        // b_n = P_B a_n for 2 <= n <= horizon (affine A only)
    bool lemma_applicable = false;
    bool constant = false;              // every compared iterate equals z
    Index horizon = 0;                  // largest Dykstra index compared
    std::optional<Index> first_divergence; // first MAP index k with c_k off the Dykstra sequence
    std::vector<Index> lemma_violations;
    std::vector<Scalar> deviation;      // per n = 1..horizon: max(|c_{2n-1} - a_n|, |c_{2n} - b_n|)
};

/// Compares a Dykstra trace and a MAP trace started from the same z.
///
/// For affine A the sequence comparison is equivalent to b_n = P_B a_n for all
/// n >= 2; both are evaluated on the same horizon and InternalConsistencyError
/// is thrown if they disagree.
template <typename Scalar>
CoincidenceReport<Scalar> coincidence_report(const DykstraTrace<Scalar> &dyk, const MapTrace<Scalar> &map,
                                             bool a_affine, Scalar tol)
{
    if (dyk.z.size() != map.z.size() || dyk.z != map.z)
        throw UsageError("coincidence_check: traces start from different points");
    if (!(tol >= 0))
        throw UsageError("coincidence_check: tolerance must be nonnegative");

    CoincidenceReport<Scalar> r;
    r.lemma_applicable = a_affine;
    const Index last_dyk = dyk.records.back().n;
    const Index last_map = map.records.back().n;
    r.horizon = std::min(last_dyk, last_map / 2);
    r.constant = true;

    auto close = [&](const Point<Scalar> &x, const Point<Scalar> &y) {
        return (x - y).cwiseAbs().maxCoeff() <= tol;
    };
    auto note = [&](Index k) {
        if (!r.first_divergence)
            r.first_divergence = k;
        r.sequences_coincide = false;
    };

    for (Index n = 0; n <= r.horizon; ++n) {
        const auto &d = dyk.records[static_cast<std::size_t>(n)];
        const Point<Scalar> &even = map.records[static_cast<std::size_t>(2 * n)].c;
        Scalar dev = (even - d.b).cwiseAbs().maxCoeff();
        if (n >= 1) {
            const Point<Scalar> &odd = map.records[static_cast<std::size_t>(2 * n - 1)].c;
            const Scalar odd_dev = (odd - *d.a).cwiseAbs().maxCoeff();
            if (odd_dev > tol)
                note(2 * n - 1);
            dev = std::max(dev, odd_dev);
            r.deviation.push_back(dev);
            if (!close(*d.a, dyk.z))
                r.constant = false;
        }
        if (!close(even, d.b))
            note(2 * n);
        if (!close(d.b, dyk.z))
            r.constant = false;
        if (a_affine && n >= 2 && !close(d.b, project(dyk.sets[1], *d.a)))
            r.lemma_violations.push_back(n);
    }
    r.lemma_criterion = r.lemma_violations.empty();
    if (a_affine && r.lemma_criterion != r.sequences_coincide)
        throw InternalConsistencyError("Dykstra/MAP coincidence criteria disagree");
    return r;
}

template <typename Scalar>
bool coincidence_check(const DykstraTrace<Scalar> &dyk, const MapTrace<Scalar> &map, bool a_affine, Scalar tol)
{
    return coincidence_report(dyk, map, a_affine, tol).sequences_coincide;
}

/// Index of the first record with ||b_n - a_n|| <= tol (Dykstra), or the
/// sweep count ceil(k / 2) of the first k >= 2 with ||c_k - c_{k-1}|| <= tol
/// (MAP).
template <typename Scalar>
std::optional<Index> sweeps_to_tolerance(const DykstraTrace<Scalar> &trace, Scalar tol)
{
    for (const auto &r : trace.records)
        if (r.n >= 1 && (r.b - *r.a).norm() <= tol)
            return r.n;
    return std::nullopt;
}

template <typename Scalar>
std::optional<Index> sweeps_to_tolerance(const MapTrace<Scalar> &trace, Scalar tol)
{
    for (std::size_t k = 2; k < trace.records.size(); ++k)
        if ((trace.records[k].c - trace.records[k - 1].c).norm() <= tol)
            return static_cast<Index>((k + 1) / 2);
    return std::nullopt;
}

} // namespace dykstra
