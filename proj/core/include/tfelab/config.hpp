// Run configuration: one TOML file per run, every default echoed back into
// the output directory so runs are self-describing.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tfelab/quasistatic.hpp"
#include "tfelab/solver.hpp"

namespace tfelab {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct OutputConfig {
    std::string directory = "out";
    double record_every = 0.0;  // 0: record only t = 0 and t_end
    bool emit_snapshots = true;
};

struct SweepConfig {
    std::vector<double> eps_list = {1e-2, 3e-3, 1e-3};
    double fit_window_fraction = 0.7;
};

struct RunConfig {
    ModelParams model = ModelParams::make(1e-2, 2.0);
    Grid grid = make_uniform_grid(0.0, 1.0, 512);
    SolverConfig solver;  // params/record_every filled from model/outputs
    InitialConditionSpec initial;
    OutputConfig outputs;
    DropletSet droplets;  // quasi-static initial state
    QsConfig qs;
    SweepConfig sweep;
};

// Parses and validates; throws ConfigError with file/line context. Unknown
// keys are rejected.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text,
                            const std::string& origin = "<string>");

// Serializes the effective configuration (all defaults materialized).
std::string config_to_toml(const RunConfig& cfg);
void write_config_echo(const RunConfig& cfg, const std::string& path);

}  // namespace tfelab
