// Plain-text persistence: time series, snapshots and quasi-static
// trajectories as 15-significant-digit CSV, deterministic for identical
// inputs.
#pragma once

#include <string>
#include <vector>

#include "tfelab/diagnostics.hpp"
#include "tfelab/quasistatic.hpp"

namespace tfelab {

void write_timeseries(const std::vector<DiagnosticsRecord>& records,
                      const std::string& path);

// Header "# t=<v> epsilon=<v> n=<v>", then one "x,u,rho" row per cell.
void write_snapshot(const Field& u, double t, const ModelParams& p,
                    const std::string& path);

// Header carries the maximum interval count; rows are
// t, a_i, b_i, gamma_i (flattened, nan-padded), total_support.
void write_qs_trajectory(const std::vector<QsSample>& samples,
                         const std::string& path);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column_index(const std::string& name) const;  // -1 when absent
};

// Reads a comma-separated numeric table with one header line (leading '#'
// comment lines are skipped).
CsvTable read_csv(const std::string& path);

struct SnapshotData {
    double t = 0.0;
    double epsilon = 0.0;
    double n = 0.0;
    Field u;
    std::vector<double> rho;
};

SnapshotData read_snapshot(const std::string& path);

}  // namespace tfelab
