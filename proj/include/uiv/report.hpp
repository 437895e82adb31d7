#ifndef UIV_REPORT_HPP
#define UIV_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "uiv/config.hpp"
#include "uiv/integrator.hpp"
#include "uiv/planner.hpp"

namespace uiv {

inline constexpr const char* kVersion = "0.1.0";

/// A numeric result together with the method that produced it.
struct Observable {
    std::string name;
    double value;
    std::string method; ///< "closed-form" or "simulation"
};

/// Structured run summary: input echo, optional scenario verdict, observables.
struct ReportDocument {
    std::string command;
    RunConfig config;
    std::optional<ScenarioVerdict> verdict;
    std::vector<Observable> observables;
    std::vector<std::string> notes;
    long seed = 0;
};

/// Write the report as a sectioned key-value document ([input.*] echoes the
/// config; [verdict] and [observables] carry the results). Atomic: the file
/// appears complete or not at all.
void write_report(const std::string& path, const ReportDocument& doc);

/// Delimited trajectory table (time, U, I, V, D, eta, event flag) with a
/// comment preamble. Impulse instants appear twice, pre- and post-jump.
void write_trajectory(const std::string& path, const Trajectory& traj,
                      const PkPdParams& pk);

/// Rectangular grid of level-set values on a (U, V) window with I = (c/p) V.
struct LevelGrid {
    double u_min, u_max;
    double v_min, v_max;
    int nu, nv;
};
void write_level_grid(const std::string& path, const LevelGrid& grid,
                      const ModelParams& mp);

/// (U, V) projection of a trajectory.
void write_phase_projection(const std::string& path, const Trajectory& traj);

/// One sweep row per dose.
struct SweepRow {
    double dose;
    ScenarioVerdict verdict;
};
void write_sweep_table(const std::string& path, const std::vector<SweepRow>& rows);

/// Write text atomically (temp file + rename).
void write_text_atomic(const std::string& path, const std::string& content);

} // namespace uiv

#endif
