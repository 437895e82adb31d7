#ifndef UIV_CLI_HPP
#define UIV_CLI_HPP

#include <string>
#include <vector>

namespace uiv {

/// Run the command-line interface on the given arguments (without argv[0]).
/// Exit codes: 0 success, 2 config/usage error, 3 integration failure,
/// 4 no feasible Goldilocks dose, 1 unexpected internal error.
int run_cli(const std::vector<std::string>& args);

} // namespace uiv

#endif
