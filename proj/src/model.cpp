#include "uiv/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace uiv {

void ModelParams::validate() const
{
    if (!(beta > 0.0) || !(delta > 0.0) || !(p > 0.0) || !(c > 0.0))
        throw std::invalid_argument("model parameters beta, delta, p, c must be strictly positive");
}

void PkPdParams::validate() const
{
    if (!(delta_d > 0.0))
        throw std::invalid_argument("pkpd.delta_d must be strictly positive");
    if (!(ec50 > 0.0))
        throw std::invalid_argument("pkpd.ec50 must be strictly positive");
    if (!(period_t > 0.0))
        throw std::invalid_argument("pkpd.period must be strictly positive");
    if (!(u_max >= 0.0))
        throw std::invalid_argument("pkpd.u_max must be nonnegative");
    if (!(eta_max >= 0.0) || !(eta_max < 1.0))
        throw std::invalid_argument("pkpd.eta_max must lie in [0, 1)");
}

void HostState::validate() const
{
    if (!nonnegative())
        throw std::invalid_argument("host state components must be nonnegative");
}

double eta(double drug_amount, const PkPdParams& pk)
{
    if (drug_amount <= 0.0)
        return 0.0;
    return std::min(drug_amount / (drug_amount + pk.ec50), pk.eta_max);
}

std::array<double, 3> rhs_uncontrolled(const HostState& s, const ModelParams& mp)
{
    const double infection = mp.beta * s.u * s.v;
    return {-infection, infection - mp.delta * s.i, mp.p * s.i - mp.c * s.v};
}

std::array<double, 4> rhs_controlled(const HostState& s, const ModelParams& mp,
                                     const PkPdParams& pk)
{
    const double infection = mp.beta * (1.0 - eta(s.d, pk)) * s.u * s.v;
    return {-infection, infection - mp.delta * s.i, mp.p * s.i - mp.c * s.v,
            -pk.delta_d * s.d};
}

ReproductionNumber reproduction_number(const ModelParams& mp)
{
    const double r = mp.beta * mp.p / (mp.c * mp.delta);
    return {r, 1.0 / r};
}

double reproduction_number_t(const ModelParams& mp, double eta_now)
{
    if (eta_now < 0.0 || eta_now >= 1.0)
        throw std::invalid_argument("eta_now must lie in [0, 1)");
    return mp.beta * (1.0 - eta_now) * mp.p / (mp.c * mp.delta);
}

} // namespace uiv
