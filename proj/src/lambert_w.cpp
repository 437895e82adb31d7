#include "uiv/lambert_w.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace uiv {

namespace {

// W0 around the branch point x = -1/e, series in p = sqrt(2(e*x + 1)).
// Coefficients from the standard expansion W0 = -1 + p - p^2/3 + 11 p^3/72 - ...
double branch_point_series(double x)
{
    const double q = 2.0 * (std::exp(1.0) * x + 1.0);
    const double p = std::sqrt(q > 0.0 ? q : 0.0);
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))));
}

} // namespace

double lambert_w0(double x)
{
    constexpr double kBranchPoint = -0.36787944117144233; // -1/e
    if (x < kBranchPoint - 1e-14 || x > 0.0)
        throw std::domain_error("lambert_w0: argument " + std::to_string(x) +
                                " outside [-1/e, 0]");
    if (x == 0.0)
        return 0.0;
    if (x < kBranchPoint)
        x = kBranchPoint;

    // Halley loses accuracy near the double root at -1/e; the series is exact
    // to ~1e-18 there.
    if (x - kBranchPoint < 1e-8)
        return branch_point_series(x);

    // Seed: branch-point series where it still converges, otherwise the Taylor
    // series of W0 around 0 (log-based seeds target positive arguments and the
    // W_{-1} branch, neither of which occurs on this domain).
    double w;
    if (x < -0.25)
        w = branch_point_series(x);
    else
        w = x * (1.0 + x * (-1.0 + x * 1.5));

    for (int it = 0; it < 50; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double wp1 = w + 1.0;
        // Halley update: f' = e^w (w+1), f'' = e^w (w+2)
        const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w)))
            break;
    }
    if (w > 0.0)
        w = 0.0;
    if (w < -1.0)
        w = -1.0;
    return w;
}

} // namespace uiv
