#ifndef UIV_PLANNER_HPP
#define UIV_PLANNER_HPP

#include <optional>

#include "uiv/analysis.hpp"
#include "uiv/integrator.hpp"
#include "uiv/model.hpp"

namespace uiv {

/// Single-interval treatment: a fixed dose at every dosing instant t_k = k T
/// falling inside [t_i, t_f], nothing outside.
struct SingleIntervalPlan {
    double t_i = 0.0;
    double t_f = 0.0;
    double dose = 0.0;
    double period = 1.0;

    /// Throws std::invalid_argument for t_f <= t_i, dose outside [0, u_max]
    /// or a nonpositive period.
    void validate(const PkPdParams& pk) const;
};

/// Impulses of plan.dose at every multiple of plan.period inside
/// [plan.t_i, plan.t_f]; horizon must be >= plan.t_f.
DoseSchedule build_schedule(const SingleIntervalPlan& plan, double horizon);

/// Quasi-steady-state thresholds: V and I below these counts as "settled".
struct QssThresholds {
    double eps_v = 1e-2; ///< copies/mL
    double eps_i = 1e-2; ///< cell/mm^3
};

/// True iff both V and I at time `at` are below the thresholds.
bool detect_qss(const Trajectory& traj, double at, const QssThresholds& thr = {});

enum class ScenarioKind { QuasiOptimal, SoftLongTerm, StrongLongTerm, ShortTerm };

const char* to_string(ScenarioKind kind);

/// Classification of a single-interval treatment, with the closed-form
/// final-size prediction from the end-of-treatment state and the long-horizon
/// simulation as cross-check.
struct ScenarioVerdict {
    ScenarioKind kind = ScenarioKind::ShortTerm;
    double u_at_tf = 0.0;
    double i_at_tf = 0.0;
    double v_at_tf = 0.0;
    bool qss = false;
    double predicted_u_infinity = 0.0; ///< U_inf(R(0), state at t_f), drug tail ignored
    double simulated_u_infinity = 0.0; ///< terminal U of the long-horizon run
    bool rebound_expected = false;     ///< set for strong long-term treatments
    std::optional<PeakInfo> observed_second_peak; ///< viral regrowth after t_f
    PeakInfo v_peak;                   ///< peak of V over the whole run
    bool started_after_peak = false;   ///< warning: t_i at or past the untreated peak
};

struct ClassifyOptions {
    double long_horizon = 1000.0; ///< how far past t_f the cross-check runs
    double tol_u = 0.02;          ///< relative half-width of the quasi-optimal band
    QssThresholds qss;
    SolverOptions solver;
};

ScenarioVerdict classify(const SingleIntervalPlan& plan, const ModelParams& mp,
                         const PkPdParams& pk, const HostState& x0,
                         const ClassifyOptions& opts = {});

enum class SearchMode {
    Bisection,  ///< bisection on the dose, snapped and verified on the scan grid
    LinearScan, ///< literal 0.001-increment scan from zero
};

enum class GoldilocksStatus {
    Found,
    NoDoseFound,        ///< U(t_f) <= U* even at u_max
    StartsBelowCritical ///< U(t_i) <= U*: no dose can push U(t_f) above U*
};

struct GoldilocksResult {
    GoldilocksStatus status = GoldilocksStatus::NoDoseFound;
    double dose = 0.0;            ///< valid when status == Found
    double u_at_tf = 0.0;         ///< verifying run, state at t_f
    double v_at_tf = 0.0;
    bool qss_at_tf = false;       ///< t_f large enough, checked post hoc
    double predicted_u_infinity = 0.0;
    double simulated_u_infinity = 0.0;
    PeakInfo v_peak;              ///< verifying run, whole horizon
    bool started_after_peak = false;
    long simulations = 0;         ///< dose-response evaluations spent

    bool found() const { return status == GoldilocksStatus::Found; }
};

struct GoldilocksOptions {
    SearchMode mode = SearchMode::Bisection;
    double increment = 0.001; ///< mg, the scan grid
    double long_horizon = 1000.0;
    QssThresholds qss;
    SolverOptions solver;
};

/// Smallest dose on the increment grid whose application over [t_i, t_f]
/// leaves U(t_f) above U*. The state at t_i comes from running the untreated
/// system from x0.
GoldilocksResult goldilocks_dose(double t_i, double t_f, const ModelParams& mp,
                                 const PkPdParams& pk, const HostState& x0,
                                 const GoldilocksOptions& opts = {});

/// Same search starting from a given (possibly drugged) state at t_i.
GoldilocksResult goldilocks_dose_from(const HostState& x_at_ti, double t_i, double t_f,
                                      const ModelParams& mp, const PkPdParams& pk,
                                      const GoldilocksOptions& opts = {});

/// Terminal U never exceeds U* beyond 0.1%: no interrupted treatment can end
/// above the critical value.
bool upper_bound_check(const Trajectory& traj, const ModelParams& mp);

/// Strong phase on [t_i, t_m), then the Goldilocks dose recomputed at t_m and
/// applied on [t_m, t_f].
struct TwoStepResult {
    DoseSchedule schedule;         ///< both phases merged
    GoldilocksResult second_phase; ///< search started from the state at t_m
    double u_at_tm = 0.0;
    PeakInfo v_peak;               ///< whole combined run
    double predicted_u_infinity = 0.0;
    double simulated_u_infinity = 0.0;
    bool qss_at_tf = false;
};

TwoStepResult two_step_plan(double t_i, double t_m, double t_f, double strong_dose,
                            const ModelParams& mp, const PkPdParams& pk,
                            const HostState& x0, const GoldilocksOptions& opts = {});

/// Time of the untreated viral peak from x0 (simulated; used for the
/// starts-too-late warning).
double untreated_peak_time(const ModelParams& mp, const HostState& x0,
                           double horizon = 200.0);

} // namespace uiv

#endif
