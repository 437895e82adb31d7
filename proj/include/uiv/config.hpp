#ifndef UIV_CONFIG_HPP
#define UIV_CONFIG_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "uiv/integrator.hpp"
#include "uiv/model.hpp"
#include "uiv/planner.hpp"

namespace uiv {

/// Config/report parse failure; the message names the offending key.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One run: model and PK/PD parameters, initial state, integrator settings
/// and an optional single-interval plan.
struct RunConfig {
    ModelParams model{};
    PkPdParams pkpd{};
    HostState initial{};
    SolverOptions solver{};
    double horizon = 60.0;
    std::optional<SingleIntervalPlan> plan;

    void validate() const;
};

/// Parse a sectioned key-value document ([model], [pkpd], [initial],
/// [integrator], [plan]). Unknown sections or keys are rejected.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Full-precision echo; parse_config(write_config(c)) reproduces c exactly.
void write_config(std::ostream& out, const RunConfig& cfg);

/// Extract the [input.*] echo of a report document back into a config.
RunConfig config_from_report(const std::string& report_path);

} // namespace uiv

#endif
