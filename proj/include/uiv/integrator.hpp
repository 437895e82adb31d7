#ifndef UIV_INTEGRATOR_HPP
#define UIV_INTEGRATOR_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uiv/model.hpp"

namespace uiv {

/// Raised when the adaptive stepper cannot meet its tolerances (step-size
/// underflow) or produces a state more negative than roundoff can explain.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double t)
        : std::runtime_error(what + " at t = " + std::to_string(t)), time(t) {}
    double time;
};

struct DoseImpulse {
    double time;   ///< day
    double amount; ///< mg
};

/// Ordered dose impulses plus the final integration time.
struct DoseSchedule {
    std::vector<DoseImpulse> impulses;
    double horizon = 0.0;

    /// Times strictly increasing in [0, horizon], amounts in [0, u_max].
    void validate(const PkPdParams& pk) const;
};

struct TrajectorySample {
    double t;
    HostState x;
};

struct PeakInfo {
    double time = 0.0;
    double value = 0.0;
    bool interior = false; ///< false when V is non-increasing over the whole span
};

/// Dense simulation output. Sample times are non-decreasing; an impulse
/// instant appears exactly twice (pre-jump and post-jump state).
struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::vector<DoseImpulse> events; ///< impulses actually applied
    PeakInfo peak_v;                 ///< cached peak of V over the samples
    HostState terminal;

    const TrajectorySample& front() const { return samples.front(); }
    const TrajectorySample& back() const { return samples.back(); }

    /// State at the sample closest to t (post-jump one at impulse instants).
    const HostState& state_at(double t) const;
};

struct SolverOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    /// Reporting grid spacing in days; 0 disables dense sampling (only the
    /// initial point, impulse instants and the horizon are recorded).
    double grid_dt = 0.01;
    /// Extra times the integrator must land on and record exactly.
    std::vector<double> checkpoints;
};

/// Integrate the controlled system as an impulsive ODE: continuous flow
/// between dose instants, first-kind jumps D += amount at each impulse. Steps
/// land exactly on impulse and grid times.
Trajectory simulate(const HostState& x0, const ModelParams& mp, const PkPdParams& pk,
                    const DoseSchedule& sched, const SolverOptions& opts = {});

/// Uncontrolled 3-state flow; equal to simulate() with an empty schedule.
Trajectory simulate_uncontrolled(const HostState& x0, const ModelParams& mp,
                                 double horizon, const SolverOptions& opts = {});

/// Peak of V over the samples, refined by a 3-point parabolic fit. Returns the
/// initial sample flagged non-interior when V never rises.
PeakInfo find_peak_v(const std::vector<TrajectorySample>& samples);

} // namespace uiv

#endif
