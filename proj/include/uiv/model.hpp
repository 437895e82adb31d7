#ifndef UIV_MODEL_HPP
#define UIV_MODEL_HPP

#include <array>

namespace uiv {

/// Rates of the target-cell-limited infection model.
///   beta  infection rate of susceptible cells [mL/(copies day)]
///   delta infected-cell death rate            [1/day]
///   p     virion production rate              [(copies mm^3)/(cell mL day)]
///   c     viral clearance rate                [1/day]
struct ModelParams {
    double beta;
    double delta;
    double p;
    double c;

    /// Throws std::invalid_argument unless all rates are strictly positive.
    void validate() const;

    /// The c >> delta assumption underlying some of the source analysis is not
    /// enforced; this flags parameter sets where it is clearly violated.
    bool clearance_separation_weak() const { return c / delta < 2.0; }

    double delta_over_p() const { return delta / p; }
};

/// R = beta*p/(c*delta) together with the critical susceptible-cell level
/// u_star = 1/R below which the viral load cannot grow.
struct ReproductionNumber {
    double r;
    double u_star;
};

/// One-compartment impulsive pharmacokinetics plus Hill pharmacodynamics.
struct PkPdParams {
    double delta_d;        ///< drug elimination rate [1/day]
    double ec50;           ///< half-maximal drug amount [mg]
    double period_t;       ///< dosing interval T [day]
    double u_max;          ///< maximal dose per impulse [mg]
    double eta_max = 0.99; ///< efficacy cap, in [0, 1)

    void validate() const;
};

/// Point in the nonnegative state space: susceptible cells U [cell/mm^3],
/// infected cells I [cell/mm^3], viral load V [copies/mL], drug amount D [mg].
/// D is zero in the 3-state (uncontrolled) view.
struct HostState {
    double u = 0.0;
    double i = 0.0;
    double v = 0.0;
    double d = 0.0;

    bool nonnegative() const { return u >= 0.0 && i >= 0.0 && v >= 0.0 && d >= 0.0; }
    void validate() const;
};

/// Drug efficacy eta(D) = min(D/(D + EC50), eta_max), in [0, eta_max].
double eta(double drug_amount, const PkPdParams& pk);

/// Uncontrolled vector field (dU, dI, dV) = (-bUV, bUV - dI, pI - cV).
std::array<double, 3> rhs_uncontrolled(const HostState& s, const ModelParams& mp);

/// Controlled vector field (dU, dI, dV, dD) with the infection rate scaled by
/// (1 - eta(D)) and first-order drug elimination.
std::array<double, 4> rhs_controlled(const HostState& s, const ModelParams& mp,
                                     const PkPdParams& pk);

ReproductionNumber reproduction_number(const ModelParams& mp);

/// Time-varying reproduction number beta*(1-eta)*p/(c*delta) for a given
/// instantaneous efficacy. eta_now must lie in [0, 1).
double reproduction_number_t(const ModelParams& mp, double eta_now);

} // namespace uiv

#endif
