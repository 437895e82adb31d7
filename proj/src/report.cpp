#include "uiv/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "uiv/analysis.hpp"

namespace uiv {

namespace {

std::string num(double v, const char* fmt = "%.17g")
{
    char buf[40];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::string col(double v)
{
    return num(v, "%.12g");
}

} // namespace

void write_text_atomic(const std::string& path, const std::string& content)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write '" + tmp + "'");
        out << content;
        out.flush();
        if (!out)
            throw std::runtime_error("short write to '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

void write_report(const std::string& path, const ReportDocument& doc)
{
    std::ostringstream os;
    os << "# uiv report\n";
    os << "# command: " << doc.command << "\n";
    os << "# version: " << kVersion << "\n";
    os << "# seed: " << doc.seed << "\n";
    for (const auto& note : doc.notes)
        os << "# note: " << note << "\n";
    os << "\n";

    std::ostringstream echo;
    write_config(echo, doc.config);
    std::istringstream lines(echo.str());
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty() && line.front() == '[')
            os << "[input." << line.substr(1) << "\n";
        else
            os << line << "\n";
    }

    if (doc.verdict) {
        const ScenarioVerdict& v = *doc.verdict;
        os << "\n[verdict]\n";
        os << "kind = " << to_string(v.kind) << "\n";
        os << "qss = " << (v.qss ? 1 : 0) << "\n";
        os << "u_at_tf = " << num(v.u_at_tf) << "\n";
        os << "i_at_tf = " << num(v.i_at_tf) << "\n";
        os << "v_at_tf = " << num(v.v_at_tf) << "\n";
        os << "rebound_expected = " << (v.rebound_expected ? 1 : 0) << "\n";
        os << "started_after_peak = " << (v.started_after_peak ? 1 : 0) << "\n";
        if (v.observed_second_peak) {
            os << "second_peak = " << num(v.observed_second_peak->value) << "\n";
            os << "second_peak_time = " << num(v.observed_second_peak->time) << "\n";
        }
    }

    os << "\n[observables]\n";
    for (const auto& ob : doc.observables) {
        os << ob.name << " = " << num(ob.value) << "\n";
        os << ob.name << ".method = " << ob.method << "\n";
    }
    write_text_atomic(path, os.str());
}

void write_trajectory(const std::string& path, const Trajectory& traj, const PkPdParams& pk)
{
    std::ostringstream os;
    os << "# uiv trajectory\n";
    os << "# version: " << kVersion << "\n";
    os << "# events: " << traj.events.size() << "\n";
    os << "time\tu\ti\tv\td\teta\tevent\n";
    std::size_t ev = 0;
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        const auto& s = traj.samples[k];
        // The second row of a duplicated impulse instant is the post-jump state.
        bool post_jump = false;
        if (ev < traj.events.size() && k > 0 && s.t == traj.samples[k - 1].t &&
            s.t == traj.events[ev].time) {
            post_jump = true;
            ++ev;
        }
        os << col(s.t) << '\t' << col(s.x.u) << '\t' << col(s.x.i) << '\t' << col(s.x.v)
           << '\t' << col(s.x.d) << '\t' << col(eta(s.x.d, pk)) << '\t'
           << (post_jump ? 1 : 0) << "\n";
    }
    write_text_atomic(path, os.str());
}

void write_level_grid(const std::string& path, const LevelGrid& grid, const ModelParams& mp)
{
    if (grid.nu < 2 || grid.nv < 2)
        throw std::invalid_argument("level grid needs at least 2 points per axis");
    std::ostringstream os;
    os << "# uiv level grid: J(U, V) = U* - U_inf(R, U, (c/p) V, V)\n";
    os << "# version: " << kVersion << "\n";
    os << "u\tv\tlevel\n";
    const double cp = mp.c / mp.p;
    for (int iv = 0; iv < grid.nv; ++iv) {
        const double v = grid.v_min + (grid.v_max - grid.v_min) * iv / (grid.nv - 1);
        for (int iu = 0; iu < grid.nu; ++iu) {
            const double u = grid.u_min + (grid.u_max - grid.u_min) * iu / (grid.nu - 1);
            const HostState x{u, cp * v, v, 0.0};
            os << col(u) << '\t' << col(v) << '\t' << col(level_function(x, mp)) << "\n";
        }
    }
    write_text_atomic(path, os.str());
}

void write_phase_projection(const std::string& path, const Trajectory& traj)
{
    std::ostringstream os;
    os << "# uiv phase projection\n";
    os << "time\tu\tv\n";
    for (const auto& s : traj.samples)
        os << col(s.t) << '\t' << col(s.x.u) << '\t' << col(s.x.v) << "\n";
    write_text_atomic(path, os.str());
}

void write_sweep_table(const std::string& path, const std::vector<SweepRow>& rows)
{
    std::ostringstream os;
    os << "# uiv dose sweep\n";
    os << "# version: " << kVersion << "\n";
    os << "dose\tkind\tu_at_tf\tv_at_tf\tqss\tpredicted_u_infinity\tsimulated_u_infinity"
          "\tv_peak\tv_peak_time\tsecond_peak\tsecond_peak_time\n";
    for (const auto& row : rows) {
        const auto& v = row.verdict;
        os << col(row.dose) << '\t' << to_string(v.kind) << '\t' << col(v.u_at_tf) << '\t'
           << col(v.v_at_tf) << '\t' << (v.qss ? 1 : 0) << '\t'
           << col(v.predicted_u_infinity) << '\t' << col(v.simulated_u_infinity) << '\t'
           << col(v.v_peak.value) << '\t' << col(v.v_peak.time) << '\t';
        if (v.observed_second_peak)
            os << col(v.observed_second_peak->value) << '\t'
               << col(v.observed_second_peak->time) << "\n";
        else
            os << "nan\tnan\n";
    }
    write_text_atomic(path, os.str());
}

} // namespace uiv
