#include "uiv/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uiv {

void SingleIntervalPlan::validate(const PkPdParams& pk) const
{
    if (!(t_i >= 0.0))
        throw std::invalid_argument("plan.t_i must be nonnegative");
    if (!(t_f > t_i))
        throw std::invalid_argument("plan requires t_f > t_i");
    if (!(dose >= 0.0) || !(dose <= pk.u_max))
        throw std::invalid_argument("plan.dose outside [0, u_max]");
    if (!(period > 0.0))
        throw std::invalid_argument("plan.period must be positive");
}

namespace {

// Dosing instants k*period inside [lo, hi], hi inclusive, lo inclusive.
std::vector<double> dosing_instants(double lo, double hi, double period)
{
    std::vector<double> out;
    long k = static_cast<long>(std::ceil(lo / period - 1e-9));
    if (k < 0)
        k = 0;
    for (;; ++k) {
        const double t = static_cast<double>(k) * period;
        if (t > hi + 1e-9)
            break;
        out.push_back(t);
    }
    return out;
}

} // namespace

DoseSchedule build_schedule(const SingleIntervalPlan& plan, double horizon)
{
    if (!(horizon >= plan.t_f))
        throw std::invalid_argument("schedule horizon must reach plan.t_f");
    DoseSchedule sched;
    sched.horizon = horizon;
    for (double t : dosing_instants(plan.t_i, plan.t_f, plan.period))
        sched.impulses.push_back({t, plan.dose});
    return sched;
}

bool detect_qss(const Trajectory& traj, double at, const QssThresholds& thr)
{
    if (traj.samples.empty())
        throw std::invalid_argument("detect_qss: empty trajectory");
    if (at < traj.front().t - 1e-9 || at > traj.back().t + 1e-9)
        throw std::invalid_argument("detect_qss: time outside trajectory span");
    const HostState& x = traj.state_at(at);
    return x.v <= thr.eps_v && x.i <= thr.eps_i;
}

const char* to_string(ScenarioKind kind)
{
    switch (kind) {
    case ScenarioKind::QuasiOptimal: return "QuasiOptimal";
    case ScenarioKind::SoftLongTerm: return "SoftLongTerm";
    case ScenarioKind::StrongLongTerm: return "StrongLongTerm";
    case ScenarioKind::ShortTerm: return "ShortTerm";
    }
    return "?";
}

double untreated_peak_time(const ModelParams& mp, const HostState& x0, double horizon)
{
    SolverOptions opts;
    opts.grid_dt = 0.02;
    const Trajectory traj = simulate_uncontrolled(x0, mp, horizon, opts);
    return traj.peak_v.interior ? traj.peak_v.time : traj.front().t;
}

namespace {

// Simulate from a state given at absolute time t0; impulse times are absolute.
// The dynamics are autonomous, so the run is shifted to start at zero and the
// sample times shifted back.
Trajectory simulate_from(const HostState& x, double t0, const std::vector<DoseImpulse>& imps,
                         double t_end, const ModelParams& mp, const PkPdParams& pk,
                         const SolverOptions& opts)
{
    DoseSchedule sched;
    sched.horizon = t_end - t0;
    for (const auto& imp : imps)
        if (imp.time >= t0 - 1e-9 && imp.time <= t_end + 1e-9)
            sched.impulses.push_back({std::max(imp.time - t0, 0.0), imp.amount});
    SolverOptions shifted = opts;
    for (double& c : shifted.checkpoints)
        c -= t0;
    Trajectory traj = simulate(x, mp, pk, sched, shifted);
    for (auto& s : traj.samples)
        s.t += t0;
    for (auto& e : traj.events)
        e.time += t0;
    traj.peak_v = find_peak_v(traj.samples);
    return traj;
}

// U(t_f) when `dose` is applied at every dosing instant in [t_i, t_f],
// starting from x_i at t_i. No dense output; this is the search inner loop.
double u_at_tf(double dose, const HostState& x_i, double t_i, double t_f,
               double period, const ModelParams& mp, const PkPdParams& pk,
               const SolverOptions& solver)
{
    std::vector<DoseImpulse> imps;
    for (double t : dosing_instants(t_i, t_f, period))
        imps.push_back({t, dose});
    SolverOptions fast = solver;
    fast.grid_dt = 0.0;
    fast.checkpoints.clear();
    const Trajectory traj = simulate_from(x_i, t_i, imps, t_f, mp, pk, fast);
    return traj.terminal.u;
}

std::optional<PeakInfo> second_peak_after(const Trajectory& traj, double t_f,
                                          double v_at_tf, const QssThresholds& thr)
{
    std::vector<TrajectorySample> tail;
    tail.reserve(traj.samples.size());
    for (const auto& s : traj.samples)
        if (s.t > t_f)
            tail.push_back(s);
    if (tail.empty())
        return std::nullopt;
    const PeakInfo peak = find_peak_v(tail);
    if (peak.value > std::max(2.0 * v_at_tf, thr.eps_v))
        return peak;
    return std::nullopt;
}

} // namespace

ScenarioVerdict classify(const SingleIntervalPlan& plan, const ModelParams& mp,
                         const PkPdParams& pk, const HostState& x0,
                         const ClassifyOptions& opts)
{
    plan.validate(pk);
    const double horizon = std::max(opts.long_horizon, plan.t_f);
    DoseSchedule sched = build_schedule(plan, horizon);
    SolverOptions solver = opts.solver;
    solver.checkpoints.push_back(plan.t_f);
    const Trajectory traj = simulate(x0, mp, pk, sched, solver);

    const auto rn = reproduction_number(mp);
    ScenarioVerdict verdict;
    const HostState& xf = traj.state_at(plan.t_f);
    verdict.u_at_tf = xf.u;
    verdict.i_at_tf = xf.i;
    verdict.v_at_tf = xf.v;
    verdict.qss = xf.v <= opts.qss.eps_v && xf.i <= opts.qss.eps_i;

    if (!verdict.qss) {
        verdict.kind = ScenarioKind::ShortTerm;
    } else if (std::abs(verdict.u_at_tf - rn.u_star) <= opts.tol_u * rn.u_star) {
        verdict.kind = ScenarioKind::QuasiOptimal;
    } else if (verdict.u_at_tf < rn.u_star) {
        verdict.kind = ScenarioKind::SoftLongTerm;
    } else {
        verdict.kind = ScenarioKind::StrongLongTerm;
        verdict.rebound_expected = true;
    }

    HostState xf3 = xf;
    xf3.d = 0.0; // prediction uses R(0) and ignores the residual drug tail
    verdict.predicted_u_infinity = u_infinity(mp, xf3);
    verdict.simulated_u_infinity = traj.terminal.u;
    verdict.observed_second_peak = second_peak_after(traj, plan.t_f, xf.v, opts.qss);
    verdict.v_peak = traj.peak_v;
    verdict.started_after_peak = plan.t_i >= untreated_peak_time(mp, x0);
    return verdict;
}

GoldilocksResult goldilocks_dose_from(const HostState& x_i, double t_i, double t_f,
                                      const ModelParams& mp, const PkPdParams& pk,
                                      const GoldilocksOptions& opts)
{
    if (!(t_f > t_i))
        throw std::invalid_argument("goldilocks search requires t_f > t_i");
    const auto rn = reproduction_number(mp);
    GoldilocksResult res;

    auto probe = [&](double dose) {
        ++res.simulations;
        return u_at_tf(dose, x_i, t_i, t_f, pk.period_t, mp, pk, opts.solver);
    };
    auto above = [&](double dose) { return probe(dose) > rn.u_star; };

    if (x_i.u <= rn.u_star) {
        // U is non-increasing: no dose can end above U*.
        res.status = GoldilocksStatus::StartsBelowCritical;
        return res;
    }

    const double inc = opts.increment;
    double dose = -1.0;
    if (opts.mode == SearchMode::LinearScan) {
        for (long k = 0;; ++k) {
            const double u = static_cast<double>(k) * inc;
            if (u > pk.u_max + 1e-12)
                break;
            if (above(u)) {
                dose = u;
                break;
            }
        }
    } else {
        if (above(0.0)) {
            dose = 0.0;
        } else if (!above(pk.u_max)) {
            dose = -1.0;
        } else {
            double lo = 0.0, hi = pk.u_max;
            while (hi - lo > 0.25 * inc) {
                const double mid = 0.5 * (lo + hi);
                (above(mid) ? hi : lo) = mid;
            }
            // Snap to the scan grid and verify both sides of the boundary so
            // the result matches the literal scan exactly.
            long k = static_cast<long>(std::ceil(hi / inc - 1e-9));
            while (k > 0 && above(static_cast<double>(k - 1) * inc))
                --k;
            while (static_cast<double>(k) * inc <= pk.u_max + 1e-12 &&
                   !above(static_cast<double>(k) * inc))
                ++k;
            dose = static_cast<double>(k) * inc;
            if (dose > pk.u_max + 1e-12)
                dose = -1.0;
        }
    }

    if (dose < 0.0) {
        res.status = GoldilocksStatus::NoDoseFound;
        return res;
    }
    res.status = GoldilocksStatus::Found;
    res.dose = dose;

    // Verifying run past t_f.
    std::vector<DoseImpulse> imps;
    for (double t : dosing_instants(t_i, t_f, pk.period_t))
        imps.push_back({t, dose});
    SolverOptions solver = opts.solver;
    solver.checkpoints.push_back(t_f);
    const double horizon = std::max(opts.long_horizon, t_f);
    const Trajectory traj = simulate_from(x_i, t_i, imps, horizon, mp, pk, solver);
    const HostState& xf = traj.state_at(t_f);
    res.u_at_tf = xf.u;
    res.v_at_tf = xf.v;
    res.qss_at_tf = xf.v <= opts.qss.eps_v && xf.i <= opts.qss.eps_i;
    HostState xf3 = xf;
    xf3.d = 0.0;
    res.predicted_u_infinity = u_infinity(mp, xf3);
    res.simulated_u_infinity = traj.terminal.u;
    res.v_peak = traj.peak_v;
    return res;
}

GoldilocksResult goldilocks_dose(double t_i, double t_f, const ModelParams& mp,
                                 const PkPdParams& pk, const HostState& x0,
                                 const GoldilocksOptions& opts)
{
    // Untreated run up to the treatment start.
    SolverOptions fast = opts.solver;
    fast.grid_dt = 0.0;
    fast.checkpoints.clear();
    HostState x_i = x0;
    if (t_i > 0.0) {
        DoseSchedule none;
        none.horizon = t_i;
        x_i = simulate(x0, mp, pk, none, fast).terminal;
    }
    GoldilocksResult res = goldilocks_dose_from(x_i, t_i, t_f, mp, pk, opts);
    res.started_after_peak = t_i >= untreated_peak_time(mp, x0);
    return res;
}

bool upper_bound_check(const Trajectory& traj, const ModelParams& mp)
{
    const auto rn = reproduction_number(mp);
    return traj.terminal.u <= rn.u_star * (1.0 + 1e-3);
}

TwoStepResult two_step_plan(double t_i, double t_m, double t_f, double strong_dose,
                            const ModelParams& mp, const PkPdParams& pk,
                            const HostState& x0, const GoldilocksOptions& opts)
{
    if (!(t_i < t_m && t_m < t_f))
        throw std::invalid_argument("two-step plan requires t_i < t_m < t_f");
    if (!(strong_dose >= 0.0) || !(strong_dose <= pk.u_max))
        throw std::invalid_argument("strong_dose outside [0, u_max]");

    TwoStepResult res;

    // Phase 1: strong dose on [t_i, t_m); the instant t_m belongs to phase 2.
    std::vector<DoseImpulse> phase1;
    for (double t : dosing_instants(t_i, t_m, pk.period_t))
        if (t < t_m - 1e-9)
            phase1.push_back({t, strong_dose});

    SolverOptions fast = opts.solver;
    fast.grid_dt = 0.0;
    fast.checkpoints.clear();
    const Trajectory lead = simulate_from(x0, 0.0, phase1, t_m, mp, pk, fast);
    const HostState x_m = lead.terminal;
    res.u_at_tm = x_m.u;

    res.second_phase = goldilocks_dose_from(x_m, t_m, t_f, mp, pk, opts);

    std::vector<DoseImpulse> all = phase1;
    if (res.second_phase.found())
        for (double t : dosing_instants(t_m, t_f, pk.period_t))
            all.push_back({t, res.second_phase.dose});

    const double horizon = std::max(opts.long_horizon, t_f);
    res.schedule.horizon = horizon;
    res.schedule.impulses = all;

    SolverOptions solver = opts.solver;
    solver.checkpoints.push_back(t_f);
    const Trajectory traj = simulate(x0, mp, pk, res.schedule, solver);
    const HostState& xf = traj.state_at(t_f);
    HostState xf3 = xf;
    xf3.d = 0.0;
    res.predicted_u_infinity = u_infinity(mp, xf3);
    res.simulated_u_infinity = traj.terminal.u;
    res.qss_at_tf = xf.v <= opts.qss.eps_v && xf.i <= opts.qss.eps_i;
    res.v_peak = traj.peak_v;
    return res;
}

} // namespace uiv
