#include "uiv/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace uiv {

void DoseSchedule::validate(const PkPdParams& pk) const
{
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& imp : impulses) {
        if (!(imp.time >= 0.0) || !(imp.time <= horizon))
            throw std::invalid_argument("impulse time outside [0, horizon]");
        if (!(imp.time > prev))
            throw std::invalid_argument("impulse times must be strictly increasing");
        if (!(imp.amount >= 0.0) || !(imp.amount <= pk.u_max))
            throw std::invalid_argument("impulse amount outside [0, u_max]");
        prev = imp.time;
    }
    if (!(horizon >= 0.0))
        throw std::invalid_argument("horizon must be nonnegative");
}

const HostState& Trajectory::state_at(double t) const
{
    auto it = std::upper_bound(samples.begin(), samples.end(), t,
                               [](double v, const TrajectorySample& s) { return v < s.t; });
    if (it == samples.begin())
        return it->x;
    return std::prev(it)->x; // last sample with time <= t; post-jump at impulses
}

PeakInfo find_peak_v(const std::vector<TrajectorySample>& samples)
{
    PeakInfo info;
    if (samples.empty())
        return info;
    std::size_t best = 0;
    for (std::size_t k = 1; k < samples.size(); ++k)
        if (samples[k].x.v > samples[best].x.v)
            best = k;
    info.time = samples[best].t;
    info.value = samples[best].x.v;
    info.interior = samples[best].x.v > samples.front().x.v;
    if (!info.interior) {
        info.time = samples.front().t;
        info.value = samples.front().x.v;
        return info;
    }
    // Parabolic refinement through the neighbours, skipping duplicated
    // impulse instants (zero time spacing).
    if (best > 0 && best + 1 < samples.size()) {
        const double t0 = samples[best - 1].t, t1 = samples[best].t, t2 = samples[best + 1].t;
        const double v0 = samples[best - 1].x.v, v1 = samples[best].x.v, v2 = samples[best + 1].x.v;
        if (t1 > t0 && t2 > t1) {
            const double d1 = (v1 - v0) / (t1 - t0);
            const double d2 = (v2 - v1) / (t2 - t1);
            const double curv = (d2 - d1) / (0.5 * (t2 - t0));
            if (curv < 0.0) {
                const double tm = 0.5 * (t0 + t1) - d1 / curv;
                if (tm > t0 && tm < t2) {
                    info.time = tm;
                    // Newton form of the quadratic through the three points
                    info.value = v0 + d1 * (tm - t0) + 0.5 * curv * (tm - t0) * (tm - t1);
                    info.value = std::max(info.value, v1);
                }
            }
        }
    }
    return info;
}

namespace {

using State4 = std::array<double, 4>;

State4 rhs4(const State4& y, const ModelParams& mp, const PkPdParams& pk)
{
    const HostState s{y[0], y[1], y[2], y[3]};
    return rhs_controlled(s, mp, pk);
}

// Dormand-Prince 5(4) embedded pair, FSAL.
struct Dopri5 {
    Dopri5(const ModelParams& mp_, const PkPdParams& pk_, double rtol_, double atol_)
        : mp(mp_), pk(pk_), rtol(rtol_), atol(atol_) {}

    const ModelParams& mp;
    const PkPdParams& pk;
    double rtol, atol;
    State4 k1{}; // FSAL cache; valid when fsal_ready
    bool fsal_ready = false;

    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                            a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

    // One trial step from y over h. On return ynew holds the 5th-order result
    // and the error norm (scaled, accept iff <= 1) is returned.
    double attempt(const State4& y, double h, State4& ynew)
    {
        if (!fsal_ready) {
            k1 = rhs4(y, mp, pk);
            fsal_ready = true;
        }
        State4 tmp, k2, k3, k4, k5, k6, k7;
        for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        k2 = rhs4(tmp, mp, pk);
        for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        k3 = rhs4(tmp, mp, pk);
        for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = rhs4(tmp, mp, pk);
        for (int i = 0; i < 4; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = rhs4(tmp, mp, pk);
        for (int i = 0; i < 4; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        k6 = rhs4(tmp, mp, pk);
        for (int i = 0; i < 4; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        k7 = rhs4(ynew, mp, pk);

        double err2 = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                  e6 * k6[i] + e7 * k7[i]);
            const double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double q = e / scale;
            err2 += q * q;
        }
        pending_k7 = k7;
        return std::sqrt(err2 / 4.0);
    }

    void accept() { k1 = pending_k7; } // FSAL
    void invalidate() { fsal_ready = false; }

private:
    State4 pending_k7{};
};

class Run {
public:
    Run(const HostState& x0, const ModelParams& mp, const PkPdParams& pk,
        const SolverOptions& opts)
        : stepper_{mp, pk, opts.rtol, opts.atol}, opts_(opts)
    {
        y_ = {x0.u, x0.i, x0.v, x0.d};
        for (int i = 0; i < 4; ++i) scale_[i] = std::max(1.0, std::abs(y_[i]));
    }

    HostState state() const { return {y_[0], y_[1], y_[2], y_[3]}; }

    void apply_impulse(double amount)
    {
        y_[3] += amount;
        scale_[3] = std::max(scale_[3], std::abs(y_[3]));
        stepper_.invalidate();
    }

    // Advance exactly to t_stop, taking adaptive internal steps. Steps capped
    // to land on t_stop do not feed back into the controller's step size.
    void flow_to(double t, double t_stop)
    {
        t_ = t;
        if (t_stop <= t_)
            return;
        if (h_ <= 0.0)
            h_ = initial_step(t_stop - t_);
        bool rejected = false;
        while (t_ < t_stop) {
            const double remaining = t_stop - t_;
            const bool capped = h_ >= remaining;
            const double h_try = capped ? remaining : h_;
            State4 ynew;
            const double err = stepper_.attempt(y_, h_try, ynew);
            if (err <= 1.0) {
                stepper_.accept();
                t_ = capped ? t_stop : t_ + h_try;
                y_ = ynew;
                clamp_negatives();
                if (!capped) {
                    double fac = 0.9 * std::pow(std::max(err, 1e-30), -0.2);
                    h_ = h_try * std::min(rejected ? 1.0 : 5.0, std::max(0.2, fac));
                }
                rejected = false;
            } else {
                h_ = h_try * std::max(0.2, 0.9 * std::pow(err, -0.2));
                rejected = true;
                if (h_ < 1e-14 * std::max(1.0, std::abs(t_)))
                    throw IntegrationError("integrator step size underflow", t_);
            }
        }
    }

private:
    double initial_step(double span) const
    {
        return std::min(1e-3, 0.01 * span);
    }

    void clamp_negatives()
    {
        for (int i = 0; i < 4; ++i) {
            scale_[i] = std::max(scale_[i], std::abs(y_[i]));
            if (y_[i] < 0.0) {
                if (y_[i] >= -1e-9 * scale_[i]) {
                    y_[i] = 0.0;
                    stepper_.invalidate();
                } else {
                    throw IntegrationError("state component left the nonnegative orthant", t_);
                }
            }
        }
    }

    Dopri5 stepper_;
    SolverOptions opts_;
    State4 y_{};
    State4 scale_{};
    double t_ = 0.0;
    double h_ = 0.0;
};

} // namespace

Trajectory simulate(const HostState& x0, const ModelParams& mp, const PkPdParams& pk,
                    const DoseSchedule& sched, const SolverOptions& opts)
{
    mp.validate();
    pk.validate();
    x0.validate();
    sched.validate(pk);

    Trajectory traj;
    Run run(x0, mp, pk, opts);
    double t = 0.0;
    traj.samples.push_back({t, run.state()});

    std::size_t next_imp = 0;
    // Impulses at t = 0 fire before any flow.
    while (next_imp < sched.impulses.size() && sched.impulses[next_imp].time <= 0.0) {
        const auto& imp = sched.impulses[next_imp++];
        run.apply_impulse(imp.amount);
        traj.events.push_back(imp);
        traj.samples.push_back({t, run.state()});
    }

    std::vector<double> marks = opts.checkpoints;
    std::sort(marks.begin(), marks.end());
    std::size_t next_mark = 0;

    long grid_idx = 1;
    const double grid = opts.grid_dt;
    while (t < sched.horizon) {
        double t_grid = std::numeric_limits<double>::infinity();
        if (grid > 0.0)
            t_grid = grid * static_cast<double>(grid_idx);
        const double t_imp = next_imp < sched.impulses.size()
                                 ? sched.impulses[next_imp].time
                                 : std::numeric_limits<double>::infinity();
        while (next_mark < marks.size() && marks[next_mark] <= t)
            ++next_mark;
        const double t_mark = next_mark < marks.size()
                                  ? marks[next_mark]
                                  : std::numeric_limits<double>::infinity();
        double t_stop = std::min({t_grid, t_imp, t_mark, sched.horizon});
        if (t_stop <= t) { // grid point collides with a passed time
            ++grid_idx;
            continue;
        }
        run.flow_to(t, t_stop);
        t = t_stop;
        traj.samples.push_back({t, run.state()});
        if (t == t_imp) {
            const auto& imp = sched.impulses[next_imp++];
            run.apply_impulse(imp.amount);
            traj.events.push_back(imp);
            traj.samples.push_back({t, run.state()});
        }
        while (grid > 0.0 && grid * static_cast<double>(grid_idx) <= t + 1e-9)
            ++grid_idx;
    }

    traj.terminal = traj.samples.back().x;
    traj.peak_v = find_peak_v(traj.samples);
    return traj;
}

Trajectory simulate_uncontrolled(const HostState& x0, const ModelParams& mp,
                                 double horizon, const SolverOptions& opts)
{
    // Inert PK: no drug on board and nothing scheduled.
    PkPdParams inert{1.0, 1.0, 1.0, 0.0, 0.99};
    HostState s = x0;
    s.d = 0.0;
    DoseSchedule none;
    none.horizon = horizon;
    return simulate(s, mp, inert, none, opts);
}

} // namespace uiv
