#pragma once

// Run configuration: flat key=value files plus mirroring --key value flags
// (flags win), validated against the module preconditions before any
// computation. Unknown keys are hard errors.

#include <string>
#include <vector>

#include "gcf/flow.hpp"

namespace gcf {

struct RunConfig {
    std::string command;                 // flow | normalized | entropy | project | oracle | report
    int kappa = 0;
    int n = 1;
    double alpha = 1.0;
    int resolution = 256;                // key: N
    std::string initial = "ball:1";      // ball:R | translated_ball:R,a | ellipse:a,b | file:path
    double cfl_safety = 0.25;
    double extinction_radius = 1e-3;
    double t_max = 10.0;
    std::string output_dir = ".";
    long seed = 0;
    long max_steps = 20'000'000;
    double psi_bound_A = 0.0;
    double restart_fraction = 0.1;
    long trace_stride = 1;

    void validate() const;
};

/// Parses `[command] [--config file] [--key value]...`; file keys are applied
/// first, flags override.
RunConfig parse_config(const std::vector<std::string>& args);
RunConfig parse_config_file(const std::string& path);

SupportField build_initial_body(const RunConfig& cfg);
FlowConfig flow_config(const RunConfig& cfg);

/// Executes the configured command, writing trace.csv / manifest.txt /
/// snapshot.txt / plot.gp under output_dir. Returns the process exit code.
int run(const RunConfig& cfg);

/// Full CLI entry: parse + run, mapping errors to their exit codes.
int cli_main(const std::vector<std::string>& args);

}  // namespace gcf
