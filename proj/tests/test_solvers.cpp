#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "dykstra/nearest_point.hpp"
#include "dykstra/oracles.hpp"
#include "dykstra/solvers.hpp"
#include "support.hpp"

using namespace dykstra;

namespace
{

constexpr double inf = std::numeric_limits<double>::infinity();

Point<double> P(double x, double y) { return make_point(x, y); }
Point<double> P(double x) { return make_point(x); }

const SetDescriptor<double> kLower = make_box(Vec2<double>(-inf, -inf), Vec2<double>(inf, 0));
const SetDescriptor<double> kHalf = make_halfspace(Vec2<double>(1, 1), 0.0);
const SetDescriptor<double> kSquare = unit_square<double>();
const SetDescriptor<double> kTilted = make_line(Vec2<double>(0, 1), Vec2<double>(0.6, 0.8));
const SetDescriptor<double> kDiagonal = line_through(Vec2<double>(0, 1), Vec2<double>(1, 0));

void check_conservation(const DykstraTrace<double> &trace)
{
    for (std::size_t i = 1; i < trace.records.size(); ++i)
        REQUIRE(conservation_defect(trace.records[i - 1], trace.records[i]) <= 1e-12);
}

StopRule<double> fixed_sweeps(Index n)
{
    StopRule<double> stop;
    stop.tol = 0;
    stop.fixpoint_tol = 0;
    stop.max_iter = n;
    return stop;
}

} // namespace

TEST_CASE("first Dykstra step on the half-plane example")
{
    const auto s1 = dykstra_step(initial_dykstra_state(P(1, 1)), kLower, kHalf);
    CHECK(s1.n == 1);
    CHECK(*s1.a == P(1, 0));
    CHECK(s1.b == P(0.5, -0.5));
    CHECK(s1.p == P(0, 1));
    CHECK(s1.q == P(0.5, 0.5));
}

TEST_CASE("a step from a point of the intersection changes nothing")
{
    const auto s1 = dykstra_step(initial_dykstra_state(P(-0.5, -0.5)), kLower, kHalf);
    CHECK(*s1.a == P(-0.5, -0.5));
    CHECK(s1.b == P(-0.5, -0.5));
    CHECK(s1.p == P(0, 0));
    CHECK(s1.q == P(0, 0));
}

TEST_CASE("first step on the two intervals")
{
    const SetDescriptor<double> a = make_interval(0.0, inf), b = make_interval(1.0, inf);
    const auto s0 = initial_dykstra_state(P(-1));
    const auto s1 = dykstra_step(s0, a, b);
    CHECK(*s1.a == P(0));
    CHECK(s1.p == P(-1));
    CHECK(s1.b == P(1));
    CHECK(s1.q == P(-1));
    CHECK(s0.b == P(-1)); // input untouched
}

TEST_CASE("MAP steps")
{
    auto c = initial_map_state(P(1, 1));
    c = map_step(c, kLower, kHalf);
    CHECK(c.c == P(1, 0));
    c = map_step(c, kLower, kHalf);
    CHECK(c.c == P(0.5, -0.5));
    c = map_step(c, kLower, kHalf);
    CHECK(c.n == 3);
    CHECK(c.c == P(0.5, -0.5));

    // Square first, then the diagonal line.
    auto d = map_step(initial_map_state(P(-2, -1)), kSquare, kDiagonal);
    CHECK(d.c == P(-1, -1));
    d = map_step(d, kSquare, kDiagonal);
    CHECK(d.c == P(0.5, 0.5));

    auto e = initial_map_state(P(0.25, -0.5));
    for (int i = 0; i < 4; ++i) {
        e = map_step(e, kLower, kHalf);
        CHECK(e.c == P(0.25, -0.5));
    }
}

TEST_CASE("run_dykstra on the half-plane example converges to the origin")
{
    const auto trace = run_dykstra(kLower, kHalf, P(1, 1));
    REQUIRE(trace.limit);
    CHECK(trace.termination == Termination::Converged);
    CHECK(trace.limit->norm() <= 1e-8);
    CHECK((*trace.limit - nearest_point_oracle(kLower, kHalf, P(1, 1))).norm() <= 1e-6);
    check_conservation(trace);
}

TEST_CASE("run_map on the half-plane example stops at a different point")
{
    const auto trace = run_map(kLower, kHalf, P(1, 1));
    CHECK(trace.termination == Termination::FixpointDetected);
    REQUIRE(trace.limit);
    CHECK(*trace.limit == P(0.5, -0.5));
    CHECK((*trace.limit - nearest_point_oracle(kLower, kHalf, P(1, 1))).norm() > 0.5);
}

TEST_CASE("runs from a point of the intersection")
{
    const auto dyk = run_dykstra(kSquare, kTilted, P(0.6, 0.55));
    CHECK(dyk.termination == Termination::FixpointDetected);
    CHECK(dyk.records.size() == 2);
    CHECK(*dyk.limit == P(0.6, 0.55));
    const auto map = run_map(kSquare, kTilted, P(0.6, 0.55));
    CHECK(map.termination == Termination::FixpointDetected);
    CHECK(*map.limit == P(0.6, 0.55));
}

TEST_CASE("cone-ball runs stop after two sweeps")
{
    const SetDescriptor<double> k = Orthant<double>{};
    const SetDescriptor<double> ball = make_ball(Vec2<double>(0, 0), 1.0);
    const auto trace = run_dykstra(k, ball, P(2, -1));
    CHECK(trace.termination == Termination::FixpointDetected);
    CHECK(trace.records.back().n <= 2);
    CHECK(*trace.limit == P(1, 0));
}

TEST_CASE("stalling instance converges to u")
{
    const auto trace = run_dykstra(kTilted, kSquare, P(-2, 2.5));
    CHECK(trace.termination == Termination::Converged);
    REQUIRE(trace.limit);
    CHECK((*trace.limit - P(0, 1)).norm() <= 1e-6);
    CHECK((*trace.limit - nearest_point_oracle(kTilted, kSquare, P(-2, 2.5))).norm() <= 1e-6);
    check_conservation(trace);
}

TEST_CASE("max iterations is a normal outcome")
{
    StopRule<double> stop;
    stop.max_iter = 3;
    const auto trace = run_dykstra(kTilted, kSquare, P(-2, 2.5), stop);
    CHECK(trace.termination == Termination::MaxIterations);
    CHECK(trace.records.size() == 4);
    CHECK_FALSE(trace.limit);
    const auto map = run_map(kTilted, kSquare, P(-2, 2.5), stop);
    CHECK(map.termination == Termination::MaxIterations);
    CHECK(map.records.size() == 7);
}

TEST_CASE("records are contiguous from zero")
{
    const auto trace = run_dykstra(kTilted, kSquare, P(-2, 2.5));
    for (std::size_t i = 0; i < trace.records.size(); ++i)
        CHECK(trace.records[i].n == static_cast<Index>(i));
    CHECK_FALSE(trace.records[0].a);
    CHECK(trace.records[0].b == P(-2, 2.5));
}

TEST_CASE("run arguments are validated")
{
    StopRule<double> stop;
    stop.max_iter = 0;
    CHECK_THROWS_AS(run_dykstra(kTilted, kSquare, P(0, 0), stop), UsageError);
    stop.max_iter = 10;
    stop.tol = -1;
    CHECK_THROWS_AS(run_map(kTilted, kSquare, P(0, 0), stop), UsageError);
    CHECK_THROWS_AS(run_dykstra<double>(kSquare, make_interval(0.0, 1.0), P(0, 0)), UsageError);
    CHECK_THROWS_AS(run_dykstra(kTilted, kSquare, P(0.0)), UsageError);
}

TEST_CASE("finite fixpoint detection")
{
    // b_1 = a_1: clause 1.
    const auto s0 = initial_dykstra_state(P(0.6, 0.55));
    const auto s1 = dykstra_step(s0, kSquare, kTilted);
    const auto s2 = dykstra_step(s1, kSquare, kTilted);
    CHECK(fixpoint_clause(s1, s2, 0.0) == 1);
    // Never at n = 0, even if a_1 = b_0.
    CHECK_FALSE(detect_finite_fixpoint(s0, s1, 1.0));

    // Horizontal line x2 = 0.5: a_2 = b_1, clause 2 at n = 1.
    const SetDescriptor<double> flat = make_line(Vec2<double>(0, 0.5), Vec2<double>(0, 1));
    const auto h1 = dykstra_step(initial_dykstra_state(P(2, 3)), flat, kSquare);
    const auto h2 = dykstra_step(h1, flat, kSquare);
    CHECK(fixpoint_clause(h1, h2, 0.0) == 2);
    const auto trace = run_dykstra(flat, kSquare, P(2, 3));
    CHECK(trace.fixpoint_clause == 2);
    CHECK(*trace.limit == P(1, 0.5));

    // Half-plane example: b_1 is not in A and a_2 differs from b_1.
    const auto e1 = dykstra_step(initial_dykstra_state(P(1, 1)), kLower, kHalf);
    const auto e2 = dykstra_step(e1, kLower, kHalf);
    CHECK((*e2.a - e1.b).norm() > 0.1);
    CHECK_FALSE(detect_finite_fixpoint(e1, e2, 1e-13));

    CHECK_THROWS_AS(detect_finite_fixpoint(s0, s2, 0.0), PreconditionError);
}

TEST_CASE("once b_n = a_n the iteration stays put")
{
    dykstra::testing::Rng rng(2);
    for (int i = 0; i < 100; ++i) {
        const Point<double> z = P(dykstra::testing::uniform(rng, -4, 4), dykstra::testing::uniform(rng, -4, 4));
        const auto trace = run_dykstra(kTilted, kSquare, z, fixed_sweeps(60));
        bool pinned = false;
        for (const auto &r : trace.records) {
            if (r.n < 1)
                continue;
            const double gap = (r.b - *r.a).norm();
            if (pinned)
                CHECK(gap <= 1e-13);
            pinned = pinned || gap <= 1e-14;
        }
    }
}

TEST_CASE("finite convergence predicate")
{
    const SetDescriptor<double> k = Orthant<double>{};
    const SetDescriptor<double> ball = make_ball(Vec2<double>(0, 0), 1.0);
    const auto cone = finite_convergence_predicate(k, ball, P(2, -1));
    CHECK(cone.holds);
    CHECK(cone.clause == 1);

    const SetDescriptor<double> flat = make_line(Vec2<double>(0, 0.5), Vec2<double>(0, 1));
    dykstra::testing::Rng rng(9);
    for (int i = 0; i < 50; ++i) {
        const Point<double> z = P(dykstra::testing::uniform(rng, -5, 5), dykstra::testing::uniform(rng, -5, 5));
        const auto fc = finite_convergence_predicate(flat, kSquare, z);
        CHECK(fc.holds);
        // z - P_A z is normal to the line wherever it lands, so clause 1 also fires.
        CHECK(fc.clause >= 1);
        const Point<double> pbpa = project(kSquare, project(flat, z));
        CHECK((pbpa - nearest_point_oracle(flat, kSquare, z)).norm() <= 1e-6);
    }

    // Two intervals from -1: the predicate fails, yet P_B P_A z is the answer.
    const SetDescriptor<double> a = make_interval(0.0, inf), b = make_interval(1.0, inf);
    const auto ti = finite_convergence_predicate(a, b, P(-1));
    CHECK_FALSE(ti.holds);
    CHECK(project(b, project(a, P(-1))) == P(1));
    CHECK(std::abs(nearest_point_oracle(a, b, P(-1))(0) - 1) <= 1e-9);
}

TEST_CASE("affine A keeps p_n normal to the line")
{
    dykstra::testing::Rng rng(5);
    const Vec2<double> v(0.6, 0.8);
    for (int i = 0; i < 50; ++i) {
        const Point<double> z = P(dykstra::testing::uniform(rng, -6, 6), dykstra::testing::uniform(rng, -6, 6));
        const auto trace = run_dykstra(kTilted, kSquare, z);
        for (std::size_t n = 1; n < trace.records.size(); ++n) {
            const auto &r = trace.records[n];
            CHECK(std::abs(detail::cross(as_vec2(r.p), v)) <= 1e-10);
            CHECK((*r.a - project(kTilted, trace.records[n - 1].b)).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK(normal_cone_contains(kSquare, r.b, r.q));
        }
        check_conservation(trace);
    }
}

TEST_CASE("stalled records obey the corner equivalence and the accumulation identity")
{
    dykstra::testing::Rng rng(13);
    const Point<double> corner = P(-1, 1);
    for (int i = 0; i < 40; ++i) {
        const auto line = dykstra::testing::random_canonical_line(rng);
        const Vec2<double> z = dykstra::testing::start_with_a1(line, dykstra::testing::uniform(rng, -6, -1.01),
                                                                dykstra::testing::uniform(rng, -1, 1));
        const SetDescriptor<double> a = make_line(line.u, line.v);
        const auto trace = run_dykstra(a, kSquare, as_point(z), fixed_sweeps(400));
        const Point<double> a1 = *trace.records[1].a;
        const double inc = (line.u(0) + 1) * line.v(0) * line.v(0);
        Index n = 1;
        for (; n + 1 < static_cast<Index>(trace.records.size()) && trace.records[n].b == corner; ++n) {
            const auto &rn = trace.records[n];
            const auto &next = trace.records[n + 1];
            const double s = (*next.a)(0) + rn.q(0);
            CHECK((next.b == corner) == (s <= -1));
            CHECK(std::abs(s - (a1(0) + double(n) * inc)) <= 1e-12);
            CHECK(rn.q(0) <= 0);
        }
        // After the break-free point: b = P_B a and b(1) increases towards u(1).
        const auto &first = trace.records[n];
        CHECK(first.b(1) == 1.0);
        double previous = first.b(0);
        for (std::size_t k = n + 1; k < trace.records.size(); ++k) {
            const auto &r = trace.records[k];
            CHECK((r.b - project(kSquare, *r.a)).cwiseAbs().maxCoeff() <= 1e-12);
            // Strictly increasing until b reaches u up to rounding.
            if (previous < line.u(0) - 1e-12)
                CHECK(r.b(0) > previous);
            CHECK(r.b(0) <= line.u(0) + 1e-12);
            previous = r.b(0);
        }
    }
}

TEST_CASE("coincidence checker")
{
    const auto stop = fixed_sweeps(80);
    const auto blue_d = run_dykstra(kTilted, kSquare, P(-0.5, 1.375), stop);
    const auto blue_m = run_map(kTilted, kSquare, P(-0.5, 1.375), stop);
    CHECK(coincidence_check(blue_d, blue_m, true, 1e-12));

    const auto fixed_d = run_dykstra(kTilted, kSquare, P(0, 1));
    const auto fixed_m = run_map(kTilted, kSquare, P(0, 1));
    const auto fixed = coincidence_report(fixed_d, fixed_m, true, 1e-12);
    CHECK(fixed.sequences_coincide);
    CHECK(fixed.constant);

    const auto stall_d = run_dykstra(kTilted, kSquare, P(-2, 2.5), stop);
    const auto stall_m = run_map(kTilted, kSquare, P(-2, 2.5), stop);
    const auto report = coincidence_report(stall_d, stall_m, true, 1e-12);
    CHECK_FALSE(report.sequences_coincide);
    CHECK_FALSE(report.lemma_criterion);
    CHECK(report.lemma_violations.front() == 2);
    CHECK(report.lemma_violations.back() == 4);
    CHECK(report.first_divergence == 4);

    CHECK_THROWS_AS(coincidence_check(stall_d, blue_m, true, 1e-12), UsageError);
}

TEST_CASE("sweeps to tolerance")
{
    const auto d = run_dykstra(kTilted, kSquare, P(-2, 2.5));
    const auto m = run_map(kTilted, kSquare, P(-2, 2.5));
    const auto nd = sweeps_to_tolerance(d, 1e-9);
    REQUIRE(nd);
    CHECK(*nd == d.records.back().n);
    CHECK(sweeps_to_tolerance(m, 1e-9));
    CHECK_FALSE(sweeps_to_tolerance(d, 0.0));
}
