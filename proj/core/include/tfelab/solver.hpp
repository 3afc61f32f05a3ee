// Conservative backward-Euler integrator for
//   |ln eps|^{-1} u_t + (M(u) u_xxx)_x = 0,  M(u) = eps^(3-n) u^n + u^3,
// with zero-flux and u_x = 0 walls. Newton with an analytic pentadiagonal
// Jacobian, delta-regularized mobility for positivity, face fluxes at
// arithmetic cell means, adaptive step control with undershoot rejection.
#pragma once

#include <stdexcept>
#include <variant>
#include <vector>

#include "tfelab/diagnostics.hpp"
#include "tfelab/grid.hpp"
#include "tfelab/mobility.hpp"

namespace tfelab {

struct SolverConfig {
    ModelParams params;
    RegularizationParams reg;  // delta <= 0 selects the default scale
    double dt_init = 1e-10;
    double dt_min = 1e-18;
    double dt_max = 1e-6;
    double newton_tol = 1e-11;  // on sup|F| / max(1, max u)
    int newton_max_iter = 12;
    double t_end = 1e-6;
    double record_every = 0.0;  // <= 0 records only t = 0 and t_end
    double undershoot_tol = 1e-10;
    bool allow_dt_growth = true;  // false pins dt for refinement studies

    void validate() const;
};

struct SolverState {
    double t = 0.0;
    Field u;
    double dt = 0.0;
    long step_count = 0;
    long newton_iter_total = 0;
    double u_ref_max = 0.0;  // max of the initial data, undershoot reference
};

// Thrown when dt underflows dt_min; carries the state it happened at.
class SolverAbort : public std::runtime_error {
  public:
    SolverAbort(std::string what, SolverState state)
        : std::runtime_error(std::move(what)), state(std::move(state)) {}
    SolverState state;
};

struct ParabolaIc {
    double a, b, mass;
};
enum class Wall { left, right };
struct HalfParabolaIc {
    double b, mass;  // b = extent of the droplet, measured from the wall
    Wall wall = Wall::left;
};
struct TwoParabolasIc {
    double a1, b1, m1, a2, b2, m2;
};
struct TableIc {
    std::vector<double> values;
};

struct InitialConditionSpec {
    std::variant<ParabolaIc, HalfParabolaIc, TwoParabolasIc, TableIc> kind =
        ParabolaIc{0.4, 0.6, 1.0};
    double precursor_floor = 0.0;
};

Field initial_condition(const InitialConditionSpec& spec, const Grid& g);

SolverState make_solver_state(const Field& u_in, const SolverConfig& cfg);

// One accepted backward-Euler step. dt_cap (if > 0) limits the attempted
// step, e.g. to land on a record time; it does not alter the stored step
// size used for the adaptive sequence.
SolverState step(const SolverState& state, const SolverConfig& cfg,
                 double dt_cap = 0.0);

struct TrajectoryPoint {
    double t = 0.0;
    Field u;
    DiagnosticsRecord record;
};
using Trajectory = std::vector<TrajectoryPoint>;

// Runs to t_end, recording at multiples of record_every plus t_end. Per-step
// time integrals (cum_dissipation, cum_bulk) are accumulated with the
// right-endpoint rule matching the implicit stepping.
Trajectory solve(const Field& u_in, const SolverConfig& cfg);

// Default regularization scale when cfg.reg.delta <= 0.
double default_delta(const Field& u_in);

}  // namespace tfelab
