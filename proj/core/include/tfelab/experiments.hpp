// Scripted studies tying the PDE to the limit model: log-log spreading fits,
// epsilon sweeps with the closed-form support bounds, and PDE vs quasi-static
// profile comparison.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tfelab/quasistatic.hpp"
#include "tfelab/solver.hpp"

namespace tfelab {

struct PowerLawFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double rms_residual = 0.0;  // in log space
    int n_samples = 0;
};

// Ordinary least squares of ln(size) against ln(time) on the samples with
// t_lo <= t <= t_hi. Requires >= 8 in-window samples with positive times and
// sizes.
PowerLawFit power_law_fit(std::span<const double> times,
                          std::span<const double> sizes, double t_lo,
                          double t_hi);

struct SweepEntry {
    double epsilon = 0.0;
    bool aborted = false;
    std::string error;
    std::vector<double> times;
    std::vector<double> supports;  // |{u > eps}| per record
    double initial_support = 0.0;
    std::optional<PowerLawFit> fit;
    double fit_t_lo = 0.0, fit_t_hi = 0.0;
    // min over records of support - general closed-form bound
    double min_margin = 0.0;
    double max_lipschitz_ratio = 0.0;
    bool flux_bound_ok = true;  // remainder bound held at every record
    double mass_drift = 0.0;    // max relative drift
    bool energy_monotone = true;
    SolverConfig config_used;  // reproducibility
};

struct SweepReport {
    std::vector<SweepEntry> entries;
    double fit_window_fraction = 0.7;
    Grid grid;
    double n_exponent = 0.0;
    InitialConditionSpec initial;
};

// One solve per epsilon (entries run concurrently); solver aborts are
// recorded per entry and do not stop the sweep.
SweepReport epsilon_sweep(const SolverConfig& base,
                          const InitialConditionSpec& initial, const Grid& g,
                          std::span<const double> eps_list,
                          double fit_window_fraction = 0.7);

struct CompareReport {
    std::vector<double> t;
    std::vector<double> profile_distance;  // sup |u - w| over the QS support
    std::vector<double> qs_peak;
    std::vector<double> support_pde;
    std::vector<double> support_qs;
};

// Runs the PDE and the quasi-static model from the same single-droplet
// initial condition on a shared record cadence.
CompareReport compare_with_quasistatic(const SolverConfig& cfg,
                                       const InitialConditionSpec& initial,
                                       const Grid& g, const QsConfig& qs_cfg);

// DropletSet matching a parabola-family initial condition.
DropletSet droplet_set_from_initial(const InitialConditionSpec& initial,
                                    const Grid& g);

}  // namespace tfelab
