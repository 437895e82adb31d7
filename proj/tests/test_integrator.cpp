#include <cmath>
#include <set>

#include <doctest.h>

#include "fixtures.hpp"
#include "uiv/integrator.hpp"

using namespace uiv;

namespace {

DoseSchedule daily_doses(double t0, double t1, double amount, double horizon)
{
    DoseSchedule sched;
    sched.horizon = horizon;
    for (double t = t0; t <= t1 + 1e-9; t += 1.0)
        sched.impulses.push_back({t, amount});
    return sched;
}

} // namespace

TEST_CASE("equilibrium states stay put under zero-amount dosing")
{
    const auto mp = fixtures::patient_a();
    const auto pk = fixtures::patient_a_pk();
    const HostState x0{3e8, 0.0, 0.0, 0.0};
    const auto traj = simulate(x0, mp, pk, daily_doses(1.0, 5.0, 0.0, 10.0), {});
    for (const auto& s : traj.samples) {
        CHECK(s.x.u == x0.u);
        CHECK(s.x.i == 0.0);
        CHECK(s.x.v == 0.0);
        CHECK(s.x.d == 0.0);
    }
    CHECK(traj.events.size() == 5);
}

TEST_CASE("impulse exactness and pre/post duplication")
{
    const auto mp = fixtures::patient_a();
    const auto pk = fixtures::patient_a_pk();
    DoseSchedule sched;
    sched.horizon = 8.0;
    sched.impulses = {{1.0, 2.5}, {2.5, 0.125}, {4.0, 7.75}, {6.0, 0.0}};
    const auto traj = simulate(fixtures::patient_a_x0(), mp, pk, sched, {});

    REQUIRE(traj.events.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(traj.events[k].time == sched.impulses[k].time);
        CHECK(traj.events[k].amount == sched.impulses[k].amount); // bit-for-bit
    }

    // locate the duplicated instants and check the jumps in D
    for (const auto& imp : sched.impulses) {
        double pre = -1.0, post = -1.0;
        for (std::size_t k = 0; k + 1 < traj.samples.size(); ++k) {
            if (traj.samples[k].t == imp.time && traj.samples[k + 1].t == imp.time) {
                pre = traj.samples[k].x.d;
                post = traj.samples[k + 1].x.d;
                // U, I, V are continuous across the jump
                CHECK(traj.samples[k].x.u == traj.samples[k + 1].x.u);
                CHECK(traj.samples[k].x.i == traj.samples[k + 1].x.i);
                CHECK(traj.samples[k].x.v == traj.samples[k + 1].x.v);
                break;
            }
        }
        REQUIRE(pre >= 0.0);
        CHECK(std::abs((post - pre) - imp.amount) <= 1e-12 * std::max(1.0, post));
    }
}

TEST_CASE("samples are time-sorted; duplicates only at impulse instants")
{
    const auto mp = fixtures::patient_a();
    const auto pk = fixtures::patient_a_pk();
    const auto traj =
        simulate(fixtures::patient_a_x0(), mp, pk, daily_doses(4.0, 10.0, 20.0, 15.0), {});
    std::set<double> impulse_times;
    for (const auto& e : traj.events)
        impulse_times.insert(e.time);
    int dup_count = 0;
    for (std::size_t k = 1; k < traj.samples.size(); ++k) {
        CHECK(traj.samples[k].t >= traj.samples[k - 1].t);
        if (traj.samples[k].t == traj.samples[k - 1].t) {
            ++dup_count;
            CHECK(impulse_times.count(traj.samples[k].t) == 1);
        }
    }
    CHECK(dup_count == static_cast<int>(traj.events.size()));
    for (const auto& s : traj.samples)
        CHECK(s.x.nonnegative());
}

TEST_CASE("drug decay between doses matches the closed form")
{
    const auto mp = fixtures::patient_a();
    const auto pk = fixtures::patient_a_pk();
    // V = 0 keeps the infection terms identically zero: pure PK
    const HostState x0{4e8, 0.0, 0.0, 0.0};
    const auto traj = simulate(x0, mp, pk, daily_doses(1.0, 6.0, 20.0, 8.0), {});

    double d_ref = 0.0, t_ref = 0.0;
    std::size_t ev = 0;
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        const auto& s = traj.samples[k];
        const bool post_jump = k > 0 && traj.samples[k - 1].t == s.t;
        if (post_jump) {
            d_ref = s.x.d;
            t_ref = s.t;
            ++ev;
            continue;
        }
        if (d_ref > 0.0) {
            const double expect = d_ref * std::exp(-pk.delta_d * (s.t - t_ref));
            CHECK(std::abs(s.x.d - expect) <= 1e-8 * expect);
        }
    }
    CHECK(ev == traj.events.size());
}

TEST_CASE("uncontrolled conservation law drifts below 1e-6 over 100 days")
{
    const auto mp = fixtures::patient_a();
    const auto rn = reproduction_number(mp);
    SolverOptions opts;
    opts.grid_dt = 0.05;
    const auto traj = simulate_uncontrolled(fixtures::patient_a_x0(), mp, 100.0, opts);

    auto conserved = [&](const HostState& x) {
        return x.u - rn.u_star * std::log(x.u) + x.i + mp.delta_over_p() * x.v;
    };
    const double j0 = conserved(traj.front().x);
    double worst = 0.0;
    for (const auto& s : traj.samples)
        worst = std::max(worst, std::abs(conserved(s.x) - j0));
    CHECK(worst <= 1e-6 * std::abs(j0));
}

TEST_CASE("halving the tolerances barely moves the terminal state")
{
    const auto mp = fixtures::patient_a();
    const auto pk = fixtures::patient_a_pk();
    SolverOptions a;
    a.grid_dt = 0.0;
    SolverOptions b = a;
    b.rtol *= 0.5;
    b.atol *= 0.5;
    const auto sched = daily_doses(4.0, 10.0, 20.0, 30.0);
    const auto ta = simulate(fixtures::patient_a_x0(), mp, pk, sched, a);
    const auto tb = simulate(fixtures::patient_a_x0(), mp, pk, sched, b);
    const double du = std::abs(ta.terminal.u - tb.terminal.u);
    const double di = std::abs(ta.terminal.i - tb.terminal.i);
    const double dv = std::abs(ta.terminal.v - tb.terminal.v);
    CHECK(du <= 10.0 * (a.atol + a.rtol * ta.terminal.u));
    CHECK(di <= 10.0 * (a.atol + a.rtol * std::max(ta.terminal.i, 1.0)));
    CHECK(dv <= 10.0 * (a.atol + a.rtol * std::max(ta.terminal.v, 1.0)));
}

TEST_CASE("unmeetable tolerances raise a step-size underflow with the time")
{
    const auto mp = fixtures::patient_a();
    SolverOptions opts;
    opts.rtol = 1e-300;
    opts.atol = 1e-300;
    CHECK_THROWS_AS(simulate_uncontrolled(fixtures::patient_a_x0(), mp, 10.0, opts),
                    IntegrationError);
}

TEST_CASE("grid-off runs keep only breakpoints")
{
    const auto mp = fixtures::patient_a();
    const auto pk = fixtures::patient_a_pk();
    SolverOptions opts;
    opts.grid_dt = 0.0;
    const auto traj =
        simulate(fixtures::patient_a_x0(), mp, pk, daily_doses(2.0, 4.0, 5.0, 6.0), opts);
    // t0, three impulse pairs, horizon
    CHECK(traj.samples.size() == 1 + 2 * 3 + 1);
}

TEST_CASE("checkpoints are sampled exactly")
{
    const auto mp = fixtures::patient_a();
    SolverOptions opts;
    opts.grid_dt = 0.0;
    opts.checkpoints = {3.71, 9.25};
    const auto traj = simulate_uncontrolled(fixtures::patient_a_x0(), mp, 20.0, opts);
    int hits = 0;
    for (const auto& s : traj.samples)
        if (s.t == 3.71 || s.t == 9.25)
            ++hits;
    CHECK(hits == 2);
}

TEST_CASE("schedule validation")
{
    const auto pk = fixtures::patient_a_pk();
    DoseSchedule sched;
    sched.horizon = 10.0;
    sched.impulses = {{2.0, 1.0}, {2.0, 1.0}};
    CHECK_THROWS_AS(sched.validate(pk), std::invalid_argument); // duplicate times
    sched.impulses = {{2.0, -1.0}};
    CHECK_THROWS_AS(sched.validate(pk), std::invalid_argument);
    sched.impulses = {{2.0, pk.u_max + 1.0}};
    CHECK_THROWS_AS(sched.validate(pk), std::invalid_argument);
    sched.impulses = {{11.0, 1.0}};
    CHECK_THROWS_AS(sched.validate(pk), std::invalid_argument); // past horizon
}
