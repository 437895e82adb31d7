#include "uiv/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "uiv/analysis.hpp"
#include "uiv/config.hpp"
#include "uiv/report.hpp"

namespace uiv {

namespace {

struct GlobalArgs {
    std::string config_path;
    std::string out_dir = ".";
    long seed = 0;
    std::optional<double> rtol, atol, horizon;

    RunConfig load() const
    {
        RunConfig cfg = load_config(config_path);
        if (rtol)
            cfg.solver.rtol = *rtol;
        if (atol)
            cfg.solver.atol = *atol;
        if (horizon)
            cfg.horizon = *horizon;
        cfg.validate();
        return cfg;
    }

    std::string path(const std::string& name) const
    {
        std::filesystem::create_directories(out_dir);
        return (std::filesystem::path(out_dir) / name).string();
    }
};

ClassifyOptions classify_options(const RunConfig& cfg, const GlobalArgs& g)
{
    ClassifyOptions opts;
    opts.solver = cfg.solver;
    if (g.horizon)
        opts.long_horizon = std::max(*g.horizon, cfg.plan ? cfg.plan->t_f : 0.0);
    return opts;
}

ReportDocument base_report(const std::string& command, const RunConfig& cfg,
                           const GlobalArgs& g)
{
    ReportDocument doc;
    doc.command = command;
    doc.config = cfg;
    doc.seed = g.seed;
    return doc;
}

void add_verdict_observables(ReportDocument& doc, const ScenarioVerdict& v)
{
    doc.verdict = v;
    doc.observables.push_back({"predicted_u_infinity", v.predicted_u_infinity, "closed-form"});
    doc.observables.push_back({"simulated_u_infinity", v.simulated_u_infinity, "simulation"});
    doc.observables.push_back({"v_peak", v.v_peak.value, "simulation"});
    doc.observables.push_back({"v_peak_time", v.v_peak.time, "simulation"});
}

int cmd_simulate(const GlobalArgs& g)
{
    const RunConfig cfg = g.load();
    DoseSchedule sched;
    if (cfg.plan) {
        SingleIntervalPlan plan = *cfg.plan;
        sched = build_schedule(plan, std::max(cfg.horizon, plan.t_f));
    } else {
        sched.horizon = cfg.horizon;
    }
    const Trajectory traj = simulate(cfg.initial, cfg.model, cfg.pkpd, sched, cfg.solver);

    const auto rn = reproduction_number(cfg.model);
    ReportDocument doc = base_report("simulate", cfg, g);
    doc.observables.push_back({"r", rn.r, "closed-form"});
    doc.observables.push_back({"u_star", rn.u_star, "closed-form"});
    doc.observables.push_back({"u_infinity", u_infinity(cfg.model, cfg.initial), "closed-form"});
    doc.observables.push_back({"u_terminal", traj.terminal.u, "simulation"});
    doc.observables.push_back({"v_peak", traj.peak_v.value, "simulation"});
    doc.observables.push_back({"v_peak_time", traj.peak_v.time, "simulation"});
    doc.observables.push_back(
        {"auc_v", auc_v(cfg.model, traj.front().x, traj.terminal), "closed-form"});
    if (cfg.model.clearance_separation_weak())
        doc.notes.push_back("c/delta < 2: clearance-separation assumption is weak");

    write_trajectory(g.path("simulate.trajectory.tsv"), traj, cfg.pkpd);
    write_report(g.path("simulate.report.txt"), doc);
    std::cout << "simulate: terminal U = " << traj.terminal.u
              << ", peak V = " << traj.peak_v.value << " at t = " << traj.peak_v.time
              << "\n";
    return 0;
}

int cmd_goldilocks(const GlobalArgs& g, double t_i, double t_f, bool literal_scan)
{
    const RunConfig cfg = g.load();
    GoldilocksOptions opts;
    opts.solver = cfg.solver;
    if (literal_scan)
        opts.mode = SearchMode::LinearScan;
    if (g.horizon)
        opts.long_horizon = std::max(*g.horizon, t_f);

    const GoldilocksResult res = goldilocks_dose(t_i, t_f, cfg.model, cfg.pkpd,
                                                 cfg.initial, opts);
    ReportDocument doc = base_report("goldilocks", cfg, g);
    if (res.started_after_peak)
        doc.notes.push_back("treatment starts at or after the untreated viral peak");
    if (!res.found()) {
        doc.notes.push_back(res.status == GoldilocksStatus::StartsBelowCritical
                                ? "U(t_i) <= U*: no dose can raise U(t_f) above U*"
                                : "no dose in [0, u_max] achieves U(t_f) > U*");
        write_report(g.path("goldilocks.report.txt"), doc);
        std::cerr << "goldilocks: no feasible dose in [0, " << cfg.pkpd.u_max << "] mg\n";
        return 4;
    }
    doc.observables.push_back({"goldilocks_dose", res.dose, "simulation"});
    doc.observables.push_back({"u_at_tf", res.u_at_tf, "simulation"});
    doc.observables.push_back({"v_at_tf", res.v_at_tf, "simulation"});
    doc.observables.push_back({"qss_at_tf", res.qss_at_tf ? 1.0 : 0.0, "simulation"});
    doc.observables.push_back({"predicted_u_infinity", res.predicted_u_infinity, "closed-form"});
    doc.observables.push_back({"simulated_u_infinity", res.simulated_u_infinity, "simulation"});
    doc.observables.push_back({"v_peak", res.v_peak.value, "simulation"});
    write_report(g.path("goldilocks.report.txt"), doc);
    std::cout << "goldilocks: dose = " << res.dose << " mg, U(t_f) = " << res.u_at_tf
              << ", predicted U_inf = " << res.predicted_u_infinity << "\n";
    return 0;
}

int cmd_classify(const GlobalArgs& g, std::optional<double> dose,
                 std::optional<double> t_i, std::optional<double> t_f)
{
    const RunConfig cfg = g.load();
    SingleIntervalPlan plan;
    if (cfg.plan)
        plan = *cfg.plan;
    plan.period = cfg.pkpd.period_t;
    if (dose)
        plan.dose = *dose;
    if (t_i)
        plan.t_i = *t_i;
    if (t_f)
        plan.t_f = *t_f;
    if (!cfg.plan && (!dose || !t_f))
        throw ConfigError("classify needs a [plan] section or --dose/--ti/--tf");

    const ScenarioVerdict v = classify(plan, cfg.model, cfg.pkpd, cfg.initial,
                                       classify_options(cfg, g));
    RunConfig echoed = cfg;
    echoed.plan = plan;
    ReportDocument doc = base_report("classify", cfg, g);
    doc.config = echoed;
    add_verdict_observables(doc, v);
    write_report(g.path("classify.report.txt"), doc);

    std::cout << to_string(v.kind) << (v.rebound_expected ? ", rebound expected" : "")
              << ": U(t_f) = " << v.u_at_tf << ", V(t_f) = " << v.v_at_tf
              << ", predicted U_inf = " << v.predicted_u_infinity << "\n";
    return 0;
}

int cmd_phase(const GlobalArgs& g, LevelGrid grid, bool grid_set)
{
    const RunConfig cfg = g.load();
    DoseSchedule sched;
    if (cfg.plan)
        sched = build_schedule(*cfg.plan, std::max(cfg.horizon, cfg.plan->t_f));
    else
        sched.horizon = cfg.horizon;
    const Trajectory traj = simulate(cfg.initial, cfg.model, cfg.pkpd, sched, cfg.solver);

    if (!grid_set) {
        const auto rn = reproduction_number(cfg.model);
        grid.u_min = 0.0;
        grid.u_max = 1.05 * std::max(cfg.initial.u, 2.0 * rn.u_star);
        grid.v_min = 0.0;
        grid.v_max = traj.peak_v.value > 0.0 ? 1.2 * traj.peak_v.value
                                             : std::max(cfg.initial.v, 1.0);
    }
    write_level_grid(g.path("phase.grid.tsv"), grid, cfg.model);
    write_phase_projection(g.path("phase.trajectory.tsv"), traj);
    std::cout << "phase: grid " << grid.nu << "x" << grid.nv << " on U [" << grid.u_min
              << ", " << grid.u_max << "], V [" << grid.v_min << ", " << grid.v_max
              << "]\n";
    return 0;
}

int cmd_sweep(const GlobalArgs& g, const std::vector<double>& doses, double t_i, double t_f)
{
    const RunConfig cfg = g.load();
    if (doses.empty())
        throw ConfigError("sweep needs a non-empty --doses list");
    std::vector<SweepRow> rows;
    for (double dose : doses) {
        SingleIntervalPlan plan{t_i, t_f, dose, cfg.pkpd.period_t};
        rows.push_back({dose, classify(plan, cfg.model, cfg.pkpd, cfg.initial,
                                       classify_options(cfg, g))});
    }
    write_sweep_table(g.path("sweep.tsv"), rows);
    for (const auto& row : rows)
        std::cout << row.dose << " mg: " << to_string(row.verdict.kind)
                  << ", U_inf = " << row.verdict.simulated_u_infinity << "\n";
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args)
{
    CLI::App app{"Within-host viral dynamics under impulsive antiviral dosing"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--config", g.config_path, "Run configuration file")->required();
    app.add_option("--out", g.out_dir, "Output directory");
    app.add_option("--seed", g.seed, "Seed echoed into reports");
    double rtol = 0, atol = 0, horizon = 0;
    auto* rtol_opt = app.add_option("--rtol", rtol, "Integrator relative tolerance");
    auto* atol_opt = app.add_option("--atol", atol, "Integrator absolute tolerance");
    auto* horizon_opt = app.add_option("--horizon", horizon, "Simulation horizon [day]");

    auto* sim = app.add_subcommand("simulate", "Integrate and write trajectory + report");

    double gi_ti = 0.0, gi_tf = 0.0;
    bool literal_scan = false;
    auto* gold = app.add_subcommand("goldilocks", "Search the Goldilocks dose");
    gold->add_option("--ti", gi_ti, "Treatment start [day]")->required();
    gold->add_option("--tf", gi_tf, "Treatment end [day]")->required();
    gold->add_flag("--scan", literal_scan, "Literal 0.001-increment linear scan");

    std::optional<double> cl_dose, cl_ti, cl_tf;
    auto* cls = app.add_subcommand("classify", "Classify a single-interval treatment");
    cls->add_option("--dose", cl_dose, "Dose per impulse [mg]");
    cls->add_option("--ti", cl_ti, "Treatment start [day]");
    cls->add_option("--tf", cl_tf, "Treatment end [day]");

    LevelGrid grid{0.0, 1.0, 0.0, 1.0, 101, 101};
    auto* phase = app.add_subcommand("phase", "Level-set grid plus (U, V) projection");
    auto* gu0 = phase->add_option("--umin", grid.u_min, "Grid U lower bound");
    phase->add_option("--umax", grid.u_max, "Grid U upper bound");
    phase->add_option("--vmin", grid.v_min, "Grid V lower bound");
    phase->add_option("--vmax", grid.v_max, "Grid V upper bound");
    phase->add_option("--nu", grid.nu, "Grid points along U");
    phase->add_option("--nv", grid.nv, "Grid points along V");

    std::vector<double> doses;
    double sw_ti = 0.0, sw_tf = 0.0;
    auto* sweep = app.add_subcommand("sweep", "Classify a list of doses");
    sweep->add_option("--doses", doses, "Doses to sweep [mg]")->required()->delimiter(',');
    sweep->add_option("--ti", sw_ti, "Treatment start [day]")->required();
    sweep->add_option("--tf", sw_tf, "Treatment end [day]")->required();

    std::vector<const char*> argv;
    argv.push_back("uiv");
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (rtol_opt->count())
            g.rtol = rtol;
        if (atol_opt->count())
            g.atol = atol;
        if (horizon_opt->count())
            g.horizon = horizon;

        if (sim->parsed())
            return cmd_simulate(g);
        if (gold->parsed())
            return cmd_goldilocks(g, gi_ti, gi_tf, literal_scan);
        if (cls->parsed())
            return cmd_classify(g, cl_dose, cl_ti, cl_tf);
        if (phase->parsed())
            return cmd_phase(g, grid, gu0->count() > 0);
        if (sweep->parsed())
            return cmd_sweep(g, doses, sw_ti, sw_tf);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IntegrationError& e) {
        std::cerr << "integration error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace uiv
