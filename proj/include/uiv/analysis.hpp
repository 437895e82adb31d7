#ifndef UIV_ANALYSIS_HPP
#define UIV_ANALYSIS_HPP

#include <string>
#include <vector>

#include "uiv/integrator.hpp"
#include "uiv/model.hpp"

namespace uiv {

/// Arguments of the closed-form final-size expression: the reproduction
/// number, the (3-state) state at the query time, and delta/p.
struct FinalSizeQuery {
    double r;
    HostState state0;
    double delta_over_p;
};

/// Asymptotic susceptible-cell count
///   U_inf = -W0(-R U0 exp(-R (U0 + I0 + (delta/p) V0))) / R,
/// always in [0, u_star].
double u_infinity(const FinalSizeQuery& q);

/// Convenience overload taking R and delta/p from the model parameters.
double u_infinity(const ModelParams& mp, const HostState& state0);

/// Area under the viral-load curve between two states of one uncontrolled
/// trajectory, via the closed identity
///   (1/c) [ (p/delta)(U1 - U2 + I1 - I2) + V1 - V2 ].
double auc_v(const ModelParams& mp, const HostState& start, const HostState& end);

/// Lyapunov functional J(x) = U - Ubar - Ubar ln(U/Ubar) + I + (delta/p) V for
/// Ubar > 0. For Ubar = 0 evaluates the source's origin functional
/// U - I + (delta/p) V verbatim; that branch is sign-indefinite and excluded
/// from positivity claims.
double lyapunov_j(const HostState& x, double u_bar, const ModelParams& mp);

/// dJ/dt along the uncontrolled flow: V (Ubar beta - delta c / p).
double lyapunov_j_dot(const HostState& x, double u_bar, const ModelParams& mp);

/// Level-set function U* - U_inf(R, x) >= 0, zero only at (U*, 0, 0);
/// constant along uncontrolled trajectories.
double level_function(const HostState& x, const ModelParams& mp);

/// Peak of V over a trajectory (see find_peak_v).
PeakInfo peak_of_v(const Trajectory& traj);

struct MaximizerResult {
    HostState arg;   ///< (u_star, epsilon, epsilon)
    double value;    ///< U_inf there; equals u_star when epsilon = 0
};

/// Constrained maximizer of U_inf over { I >= epsilon, V >= epsilon }.
MaximizerResult u_infinity_maximizer(double epsilon, const ModelParams& mp);

struct ProbeItem {
    std::string name;
    bool pass = false;
    std::string witness;
};

struct Property1Report {
    std::vector<ProbeItem> items;
    bool all_pass() const;
};

/// Structured sweeps checking the qualitative behaviour of U_inf: the R -> 0
/// and R -> inf limits, monotonicity in U0 on either side of U*, monotone
/// decrease in I0 and V0, and the global maximum at (U*, 0, 0).
Property1Report property1_probe(const ModelParams& mp);

} // namespace uiv

#endif
