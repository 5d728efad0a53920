// Command-line front end. Usage:
//
//   gcflow <command> [--config file] [--key value]...
//
// where <command> is flow | normalized | entropy | project | oracle | report.
// Keys mirror the config-file grammar (kappa, n, alpha, N, initial,
// cfl_safety, extinction_radius, t_max, output_dir, seed, max_steps,
// psi_bound_A, restart_fraction, trace_stride); flags override file entries.

#include <string>
#include <vector>

#include "gcf/config.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return gcf::cli_main(args);
}
