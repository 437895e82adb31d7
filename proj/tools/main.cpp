#include <string>
#include <vector>

#include "uiv/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return uiv::run_cli(args);
}
