#include "uiv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "uiv/lambert_w.hpp"

namespace uiv {

namespace {

// W argument -R U0 exp(-R (U0 + I0 + (delta/p) V0)); lies in [-1/e, 0] for any
// nonnegative state, up to roundoff which lambert_w0 absorbs.
double w_argument(const FinalSizeQuery& q)
{
    const double mass = q.state0.u + q.state0.i + q.delta_over_p * q.state0.v;
    return -q.r * q.state0.u * std::exp(-q.r * mass);
}

} // namespace

double u_infinity(const FinalSizeQuery& q)
{
    if (!(q.r > 0.0))
        throw std::invalid_argument("u_infinity: reproduction number must be positive");
    q.state0.validate();
    if (q.state0.u == 0.0)
        return 0.0;
    return -lambert_w0(w_argument(q)) / q.r;
}

double u_infinity(const ModelParams& mp, const HostState& state0)
{
    return u_infinity({reproduction_number(mp).r, state0, mp.delta_over_p()});
}

double auc_v(const ModelParams& mp, const HostState& start, const HostState& end)
{
    start.validate();
    end.validate();
    return ((mp.p / mp.delta) * (start.u - end.u + start.i - end.i) + start.v - end.v) / mp.c;
}

double lyapunov_j(const HostState& x, double u_bar, const ModelParams& mp)
{
    if (u_bar < 0.0)
        throw std::invalid_argument("lyapunov_j: u_bar must be nonnegative");
    const double dp = mp.delta_over_p();
    if (u_bar == 0.0)
        return x.u - x.i + dp * x.v; // origin branch, sign-indefinite
    if (!(x.u > 0.0))
        throw std::domain_error("lyapunov_j: U must be positive when u_bar > 0");
    return x.u - u_bar - u_bar * std::log(x.u / u_bar) + x.i + dp * x.v;
}

double lyapunov_j_dot(const HostState& x, double u_bar, const ModelParams& mp)
{
    return x.v * (u_bar * mp.beta - mp.delta * mp.c / mp.p);
}

double level_function(const HostState& x, const ModelParams& mp)
{
    const auto rn = reproduction_number(mp);
    const double value = rn.u_star - u_infinity(mp, x);
    return std::max(value, 0.0);
}

PeakInfo peak_of_v(const Trajectory& traj)
{
    if (traj.samples.empty())
        throw std::invalid_argument("peak_of_v: empty trajectory");
    return find_peak_v(traj.samples);
}

MaximizerResult u_infinity_maximizer(double epsilon, const ModelParams& mp)
{
    if (epsilon < 0.0)
        throw std::invalid_argument("u_infinity_maximizer: epsilon must be nonnegative");
    const auto rn = reproduction_number(mp);
    HostState arg{rn.u_star, epsilon, epsilon, 0.0};
    return {arg, u_infinity(mp, arg)};
}

bool Property1Report::all_pass() const
{
    return std::all_of(items.begin(), items.end(),
                       [](const ProbeItem& it) { return it.pass; });
}

Property1Report property1_probe(const ModelParams& mp)
{
    mp.validate();
    const auto rn = reproduction_number(mp);
    const double us = rn.u_star;
    const double dp = mp.delta_over_p();
    Property1Report rep;

    auto uinf = [&](double r, double u, double i, double v) {
        return u_infinity({r, HostState{u, i, v, 0.0}, dp});
    };
    auto fmt = [](std::initializer_list<double> xs) {
        std::ostringstream os;
        for (double x : xs)
            os << x << " ";
        return os.str();
    };

    // (1) limits in R: vanishes for large R, approaches U0 for small R
    {
        const double u0 = 7.0 * us, i0 = 1e5, v0 = 1e5;
        const double big = uinf(rn.r * 1e4, u0, i0, v0);
        const double small = uinf(rn.r * 1e-12, u0, i0, v0);
        const bool pass = big <= 1e-3 * u0 && std::abs(small / u0 - 1.0) <= 1e-3;
        rep.items.push_back({"limits in R", pass, fmt({big / u0, small / u0})});
    }
    // (2) decreasing in U0 above U*, all below U*
    {
        const double a = uinf(rn.r, 1.1 * us, 1e5, 1e5);
        const double b = uinf(rn.r, 2.0 * us, 1e5, 1e5);
        const double c = uinf(rn.r, 4.0 * us, 1e5, 1e5);
        const bool pass = a > b && b > c && a < us && b < us && c < us;
        rep.items.push_back({"decreasing in U0 on (U*, inf)", pass, fmt({a, b, c})});
    }
    // (3) increasing in U0 below U*, still below U*
    {
        const double a = uinf(rn.r, 0.25 * us, 1e5, 1e5);
        const double b = uinf(rn.r, 0.50 * us, 1e5, 1e5);
        const double c = uinf(rn.r, 0.90 * us, 1e5, 1e5);
        const bool pass = a < b && b < c && c < us;
        rep.items.push_back({"increasing in U0 on (0, U*)", pass, fmt({a, b, c})});
    }
    // (4) decreasing in I0 and in V0
    {
        const double u0 = 2.0 * us;
        const double vi0 = uinf(rn.r, u0, 0.0, 0.0);
        const double vi1 = uinf(rn.r, u0, 0.0, 1e6);
        const double vi2 = uinf(rn.r, u0, 0.0, 1e7);
        const double ii1 = uinf(rn.r, u0, 1e6, 0.0);
        const double ii2 = uinf(rn.r, u0, 1e7, 0.0);
        const bool pass = vi0 > vi1 && vi1 > vi2 && vi0 > ii1 && ii1 > ii2;
        rep.items.push_back({"decreasing in I0 and V0", pass, fmt({vi0, vi1, vi2, ii1, ii2})});
    }
    // (5) global maximum U* at (U*, 0, 0)
    {
        const double at_star = uinf(rn.r, us, 0.0, 0.0);
        bool pass = std::abs(at_star / us - 1.0) <= 1e-9;
        for (double fu : {0.3, 0.7, 1.3, 2.5})
            for (double fi : {0.0, 0.02})
                pass = pass && uinf(rn.r, fu * us, fi * us, fi * us) <= us * (1.0 + 1e-9);
        rep.items.push_back({"maximum U* at (U*, 0, 0)", pass, fmt({at_star, us})});
    }
    return rep;
}

} // namespace uiv
