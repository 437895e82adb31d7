#include "uiv/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace uiv {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text)
{
    const std::string v = trim(text);
    double out = 0.0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last)
        throw ConfigError("invalid numeric value for key '" + key + "': '" + v + "'");
    return out;
}

using KvMap = std::map<std::string, std::string>; // "section.key" -> raw value

KvMap read_document(std::istream& in)
{
    KvMap kv;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("malformed section header at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("empty section name at line " + std::to_string(lineno));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value' at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw ConfigError("empty key at line " + std::to_string(lineno));
        if (section.empty())
            throw ConfigError("key '" + key + "' outside any section");
        const std::string full = section + "." + key;
        if (kv.count(full))
            throw ConfigError("duplicate key '" + full + "'");
        kv[full] = trim(line.substr(eq + 1));
    }
    return kv;
}

class Reader {
public:
    explicit Reader(KvMap kv) : kv_(std::move(kv)) {}

    bool has(const std::string& full) const { return kv_.count(full) != 0; }

    double require(const std::string& full)
    {
        auto it = kv_.find(full);
        if (it == kv_.end())
            throw ConfigError("missing required key '" + full + "'");
        used_.insert(full);
        return parse_number(full, it->second);
    }

    double get_or(const std::string& full, double fallback)
    {
        auto it = kv_.find(full);
        if (it == kv_.end())
            return fallback;
        used_.insert(full);
        return parse_number(full, it->second);
    }

    void reject_unknown() const
    {
        for (const auto& [key, value] : kv_)
            if (!used_.count(key))
                throw ConfigError("unknown key '" + key + "'");
    }

private:
    KvMap kv_;
    std::set<std::string> used_;
};

RunConfig config_from_reader(Reader& r, const std::string& prefix)
{
    RunConfig cfg;
    cfg.model.beta = r.require(prefix + "model.beta");
    cfg.model.delta = r.require(prefix + "model.delta");
    cfg.model.p = r.require(prefix + "model.p");
    cfg.model.c = r.require(prefix + "model.c");

    cfg.pkpd.delta_d = r.require(prefix + "pkpd.delta_d");
    cfg.pkpd.ec50 = r.require(prefix + "pkpd.ec50");
    cfg.pkpd.period_t = r.require(prefix + "pkpd.period");
    cfg.pkpd.u_max = r.require(prefix + "pkpd.u_max");
    cfg.pkpd.eta_max = r.get_or(prefix + "pkpd.eta_max", 0.99);

    cfg.initial.u = r.require(prefix + "initial.u");
    cfg.initial.i = r.get_or(prefix + "initial.i", 0.0);
    cfg.initial.v = r.get_or(prefix + "initial.v", 0.0);
    cfg.initial.d = r.get_or(prefix + "initial.d", 0.0);

    cfg.solver.rtol = r.get_or(prefix + "integrator.rtol", cfg.solver.rtol);
    cfg.solver.atol = r.get_or(prefix + "integrator.atol", cfg.solver.atol);
    cfg.solver.grid_dt = r.get_or(prefix + "integrator.grid_dt", cfg.solver.grid_dt);
    cfg.horizon = r.get_or(prefix + "integrator.horizon", cfg.horizon);

    if (r.has(prefix + "plan.t_i") || r.has(prefix + "plan.t_f") || r.has(prefix + "plan.dose")) {
        SingleIntervalPlan plan;
        plan.t_i = r.require(prefix + "plan.t_i");
        plan.t_f = r.require(prefix + "plan.t_f");
        plan.dose = r.get_or(prefix + "plan.dose", 0.0);
        plan.period = cfg.pkpd.period_t;
        cfg.plan = plan;
    }
    return cfg;
}

void wrap_validation(const RunConfig& cfg)
{
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

} // namespace

void RunConfig::validate() const
{
    model.validate();
    pkpd.validate();
    initial.validate();
    if (!(solver.rtol > 0.0) || !(solver.atol > 0.0))
        throw std::invalid_argument("integrator.rtol and integrator.atol must be positive");
    if (!(solver.grid_dt >= 0.0))
        throw std::invalid_argument("integrator.grid_dt must be nonnegative");
    if (!(horizon > 0.0))
        throw std::invalid_argument("integrator.horizon must be positive");
    if (plan)
        plan->validate(pkpd);
}

RunConfig parse_config(std::istream& in)
{
    Reader r(read_document(in));
    RunConfig cfg = config_from_reader(r, "");
    r.reject_unknown();
    wrap_validation(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

namespace {

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void write_config(std::ostream& out, const RunConfig& cfg)
{
    out << "[model]\n";
    out << "beta = " << num(cfg.model.beta) << "\n";
    out << "delta = " << num(cfg.model.delta) << "\n";
    out << "p = " << num(cfg.model.p) << "\n";
    out << "c = " << num(cfg.model.c) << "\n\n";
    out << "[pkpd]\n";
    out << "delta_d = " << num(cfg.pkpd.delta_d) << "\n";
    out << "ec50 = " << num(cfg.pkpd.ec50) << "\n";
    out << "period = " << num(cfg.pkpd.period_t) << "\n";
    out << "u_max = " << num(cfg.pkpd.u_max) << "\n";
    out << "eta_max = " << num(cfg.pkpd.eta_max) << "\n\n";
    out << "[initial]\n";
    out << "u = " << num(cfg.initial.u) << "\n";
    out << "i = " << num(cfg.initial.i) << "\n";
    out << "v = " << num(cfg.initial.v) << "\n";
    out << "d = " << num(cfg.initial.d) << "\n\n";
    out << "[integrator]\n";
    out << "rtol = " << num(cfg.solver.rtol) << "\n";
    out << "atol = " << num(cfg.solver.atol) << "\n";
    out << "grid_dt = " << num(cfg.solver.grid_dt) << "\n";
    out << "horizon = " << num(cfg.horizon) << "\n";
    if (cfg.plan) {
        out << "\n[plan]\n";
        out << "t_i = " << num(cfg.plan->t_i) << "\n";
        out << "t_f = " << num(cfg.plan->t_f) << "\n";
        out << "dose = " << num(cfg.plan->dose) << "\n";
    }
}

RunConfig config_from_report(const std::string& report_path)
{
    std::ifstream in(report_path);
    if (!in)
        throw ConfigError("cannot open report file '" + report_path + "'");
    Reader r(read_document(in));
    RunConfig cfg = config_from_reader(r, "input.");
    wrap_validation(cfg); // report carries extra sections; no unknown-key pass
    return cfg;
}

} // namespace uiv
