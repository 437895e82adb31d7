#ifndef UIV_TESTS_FIXTURES_HPP
#define UIV_TESTS_FIXTURES_HPP

#include "uiv/model.hpp"

namespace fixtures {

// Virtual patient A (fitted SARS-CoV-2 target-cell parameters).
inline uiv::ModelParams patient_a()
{
    return {1.35e-7, 0.61, 0.2, 2.4};
}

inline uiv::HostState patient_a_x0()
{
    return {4e8, 0.0, 0.31, 0.0};
}

// PK/PD as shipped in configs/patient_a.config.
inline uiv::PkPdParams patient_a_pk()
{
    return {2.0, 75.0, 1.0, 50.0, 0.99};
}

// Same patient with a much more potent drug. At ec50 = 75 the 0-50 mg dose
// range barely moves the efficacy, so treatment scenarios (goldilocks
// boundary, strong long-term rebounds) never materialize; this fixture makes
// all of them reachable for exercising the planner.
inline uiv::PkPdParams potent_pk()
{
    return {2.0, 0.5, 1.0, 50.0, 0.99};
}

// Toy parameter set with R = 1 and U* = 1.
inline uiv::ModelParams toy_params()
{
    return {0.5, 0.2, 2.0, 5.0};
}

} // namespace fixtures

#endif
