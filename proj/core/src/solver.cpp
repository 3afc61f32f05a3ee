#include "tfelab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tfelab/banded.hpp"

namespace tfelab {

void SolverConfig::validate() const {
    if (!(dt_min > 0.0 && dt_min <= dt_init && dt_init <= dt_max))
        throw std::invalid_argument(
            "solver requires 0 < dt_min <= dt_init <= dt_max");
    if (!(newton_tol > 0.0))
        throw std::invalid_argument("newton_tol must be positive");
    if (newton_max_iter < 1)
        throw std::invalid_argument("newton_max_iter must be >= 1");
    if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");
    if (!(undershoot_tol >= 0.0))
        throw std::invalid_argument("undershoot_tol must be >= 0");
}

Field initial_condition(const InitialConditionSpec& spec, const Grid& g) {
    const double xl = g.x_left, xr = g.x_right;
    auto require_inside = [&](double a, double b) {
        if (!(a < b) || a < xl - 1e-12 * g.length() ||
            b > xr + 1e-12 * g.length())
            throw std::invalid_argument(
                "initial condition interval must lie inside the domain");
    };
    auto parabola = [](double a, double b, double m, double x) {
        const double L = b - a;
        const double up = std::max(b - x, 0.0) * std::max(x - a, 0.0);
        return 6.0 * m * up / (L * L * L);
    };

    Field u(g);
    if (const auto* p = std::get_if<ParabolaIc>(&spec.kind)) {
        require_inside(p->a, p->b);
        if (!(p->mass > 0.0)) throw std::invalid_argument("mass must be > 0");
        for (int i = 0; i < g.n_cells; ++i)
            u[i] = parabola(p->a, p->b, p->mass, g.center(i));
    } else if (const auto* hp = std::get_if<HalfParabolaIc>(&spec.kind)) {
        if (!(hp->mass > 0.0)) throw std::invalid_argument("mass must be > 0");
        const double L =
            hp->wall == Wall::left ? hp->b - xl : xr - hp->b;
        if (!(L > 0.0) || (hp->wall == Wall::left ? hp->b > xr : hp->b < xl))
            throw std::invalid_argument(
                "half-parabola extent must lie inside the domain");
        for (int i = 0; i < g.n_cells; ++i) {
            const double d = hp->wall == Wall::left ? g.center(i) - xl
                                                    : xr - g.center(i);
            const double up = std::max(L * L - d * d, 0.0);
            u[i] = 1.5 * hp->mass * up / (L * L * L);
        }
    } else if (const auto* tp = std::get_if<TwoParabolasIc>(&spec.kind)) {
        require_inside(tp->a1, tp->b1);
        require_inside(tp->a2, tp->b2);
        if (!(tp->m1 > 0.0 && tp->m2 > 0.0))
            throw std::invalid_argument("mass must be > 0");
        for (int i = 0; i < g.n_cells; ++i) {
            const double x = g.center(i);
            u[i] = parabola(tp->a1, tp->b1, tp->m1, x) +
                   parabola(tp->a2, tp->b2, tp->m2, x);
        }
    } else {
        const auto& tab = std::get<TableIc>(spec.kind);
        if (static_cast<int>(tab.values.size()) != g.n_cells)
            throw std::invalid_argument(
                "table initial condition must match the grid size");
        for (double v : tab.values)
            if (!(v >= 0.0))
                throw std::invalid_argument("table values must be >= 0");
        u.values = tab.values;
    }
    if (spec.precursor_floor < 0.0)
        throw std::invalid_argument("precursor_floor must be >= 0");
    if (spec.precursor_floor > 0.0)
        for (double& v : u.values) v += spec.precursor_floor;
    return u;
}

double default_delta(const Field& u_in) {
    double umax = 0.0;
    for (double v : u_in.values) umax = std::max(umax, v);
    return 1e-12 * umax * umax * umax;
}

SolverState make_solver_state(const Field& u_in, const SolverConfig& cfg) {
    cfg.validate();
    double umin = std::numeric_limits<double>::infinity(), umax = 0.0;
    for (double v : u_in.values) {
        umin = std::min(umin, v);
        umax = std::max(umax, v);
    }
    if (umin < 0.0)
        throw std::invalid_argument("initial data must be nonnegative");
    SolverState s;
    s.t = 0.0;
    s.u = u_in;
    s.dt = cfg.dt_init;
    s.u_ref_max = umax;
    return s;
}

namespace {

struct Workspace {
    std::vector<double> ghost;   // N + 2
    std::vector<double> flux;    // N - 1 interior faces
    std::vector<double> resid;   // N
    std::vector<double> trial;   // N
    std::vector<double> newton;  // N (rhs / update)
};

// Interior-face fluxes q = M_reg(face mean) * u_xxx with reflection ghosts.
void compute_fluxes(const std::vector<double>& v, int n, double h,
                    const SolverConfig& cfg, const RegularizationParams& reg,
                    std::vector<double>& ghost, std::vector<double>& q) {
    ghost[0] = v[0];
    for (int i = 0; i < n; ++i) ghost[static_cast<size_t>(i) + 1] = v[static_cast<size_t>(i)];
    ghost[static_cast<size_t>(n) + 1] = v[static_cast<size_t>(n) - 1];
    const double h3 = h * h * h;
    for (int f = 0; f < n - 1; ++f) {
        const double* c = &ghost[static_cast<size_t>(f)];
        const double d3 = (c[3] - 3.0 * c[2] + 3.0 * c[1] - c[0]) / h3;
        const double ubar = 0.5 * (v[static_cast<size_t>(f)] + v[static_cast<size_t>(f) + 1]);
        q[static_cast<size_t>(f)] =
            mobility_regularized(ubar, cfg.params, reg) * d3;
    }
}

// F_i = v_i - u_i + c (q_{i+1/2} - q_{i-1/2}); boundary fluxes are zero.
double residual(const std::vector<double>& v, const std::vector<double>& u,
                int n, double h, double c, const SolverConfig& cfg,
                const RegularizationParams& reg, Workspace& w) {
    compute_fluxes(v, n, h, cfg, reg, w.ghost, w.flux);
    double sup = 0.0;
    for (int i = 0; i < n; ++i) {
        const double qr = i < n - 1 ? w.flux[static_cast<size_t>(i)] : 0.0;
        const double ql = i > 0 ? w.flux[static_cast<size_t>(i) - 1] : 0.0;
        const double F = v[static_cast<size_t>(i)] - u[static_cast<size_t>(i)] + c * (qr - ql);
        w.resid[static_cast<size_t>(i)] = F;
        sup = std::max(sup, std::abs(F));
    }
    return sup;
}

// d q_f / d v_j for j in the face stencil, ghost folds included.
void flux_jacobian(const std::vector<double>& v, int n, double h, int f,
                   const SolverConfig& cfg, const RegularizationParams& reg,
                   const std::vector<double>& ghost, int idx[4], double dq[4],
                   int& count) {
    const double h3 = h * h * h;
    const double* c = &ghost[static_cast<size_t>(f)];
    const double d3 = (c[3] - 3.0 * c[2] + 3.0 * c[1] - c[0]) / h3;
    const double ubar = 0.5 * (v[static_cast<size_t>(f)] + v[static_cast<size_t>(f) + 1]);
    const double m = mobility_regularized(ubar, cfg.params, reg);
    const double dm = 0.5 * mobility_regularized_deriv(ubar, cfg.params, reg);

    count = 0;
    auto put = [&](int j, double val) {
        idx[count] = j;
        dq[count] = val;
        ++count;
    };
    // Stencil coefficients of d3 w.r.t. cells f-1, f, f+1, f+2 with folds.
    if (f == 0) {
        put(0, m * (2.0 / h3) + dm * d3);
        put(1, m * (-3.0 / h3) + dm * d3);
        put(2, m * (1.0 / h3));
    } else if (f == n - 2) {
        put(n - 3, m * (-1.0 / h3));
        put(n - 2, m * (3.0 / h3) + dm * d3);
        put(n - 1, m * (-2.0 / h3) + dm * d3);
    } else {
        put(f - 1, m * (-1.0 / h3));
        put(f, m * (3.0 / h3) + dm * d3);
        put(f + 1, m * (-3.0 / h3) + dm * d3);
        put(f + 2, m * (1.0 / h3));
    }
}

void assemble_jacobian(const std::vector<double>& v, int n, double h, double c,
                       const SolverConfig& cfg,
                       const RegularizationParams& reg,
                       const std::vector<double>& ghost, BandedMatrix& J) {
    J.zero();
    for (int i = 0; i < n; ++i) J.set(i, i, 1.0);
    int idx[4];
    double dq[4];
    int count = 0;
    for (int f = 0; f < n - 1; ++f) {
        flux_jacobian(v, n, h, f, cfg, reg, ghost, idx, dq, count);
        for (int k = 0; k < count; ++k) {
            J.add(f, idx[k], c * dq[k]);          // +q_f in row f
            J.add(f + 1, idx[k], -c * dq[k]);     // -q_f in row f+1
        }
    }
}

}  // namespace

SolverState step(const SolverState& state, const SolverConfig& cfg,
                 double dt_cap) {
    const int n = state.u.size();
    const double h = state.u.grid.h;
    RegularizationParams reg = cfg.reg;
    if (!(reg.delta > 0.0)) reg.delta = default_delta(state.u);

    const std::vector<double>& u = state.u.values;
    double scale = 1.0;
    for (double x : u) scale = std::max(scale, x);
    const double tol = cfg.newton_tol * scale;

    Workspace w;
    w.ghost.resize(static_cast<size_t>(n) + 2);
    w.flux.resize(static_cast<size_t>(n) - 1);
    w.resid.resize(static_cast<size_t>(n));
    w.trial.resize(static_cast<size_t>(n));
    w.newton.resize(static_cast<size_t>(n));
    BandedMatrix J(n, 2, 2);

    double nominal = state.dt;  // halved on rejection, kept across dt_cap

    while (true) {
        if (nominal < cfg.dt_min)
            throw SolverAbort("time step underflow below dt_min", state);
        double dt = nominal;
        if (dt_cap > 0.0) dt = std::min(dt, dt_cap);
        const double c = dt * cfg.params.log_factor / h;

        std::vector<double> v = u;  // Newton iterate
        bool converged = false;
        int iters = 0;
        double sup = residual(v, u, n, h, c, cfg, reg, w);
        if (!std::isfinite(sup)) sup = std::numeric_limits<double>::infinity();
        while (iters < cfg.newton_max_iter) {
            if (sup <= tol) {
                converged = true;
                break;
            }
            ++iters;
            assemble_jacobian(v, n, h, c, cfg, reg, w.ghost, J);
            for (int i = 0; i < n; ++i) w.newton[static_cast<size_t>(i)] = -w.resid[static_cast<size_t>(i)];
            if (!J.solve(w.newton)) break;  // singular; shrink dt
            // Half-step line search, at most 3 halvings.
            double lambda = 1.0;
            double best_sup = std::numeric_limits<double>::infinity();
            std::vector<double> best_v;
            for (int ls = 0; ls <= 3; ++ls) {
                for (int i = 0; i < n; ++i)
                    w.trial[static_cast<size_t>(i)] =
                        v[static_cast<size_t>(i)] + lambda * w.newton[static_cast<size_t>(i)];
                const double s = residual(w.trial, u, n, h, c, cfg, reg, w);
                if (std::isfinite(s) && s < best_sup) {
                    best_sup = s;
                    best_v = w.trial;
                }
                if (std::isfinite(s) && s < sup) break;
                lambda *= 0.5;
            }
            if (!(best_sup < sup)) break;  // stalled; shrink dt
            v = std::move(best_v);
            sup = residual(v, u, n, h, c, cfg, reg, w);  // refresh w for v
            if (sup <= tol) {
                converged = true;
                break;
            }
        }

        if (converged) {
            // Flux-form acceptance: telescoping fluxes conserve mass to
            // summation roundoff independently of the Newton tolerance.
            compute_fluxes(v, n, h, cfg, reg, w.ghost, w.flux);
            SolverState next = state;
            next.u.values.resize(static_cast<size_t>(n));
            bool ok = true;
            const double floor = -cfg.undershoot_tol * state.u_ref_max;
            for (int i = 0; i < n; ++i) {
                const double qr = i < n - 1 ? w.flux[static_cast<size_t>(i)] : 0.0;
                const double ql = i > 0 ? w.flux[static_cast<size_t>(i) - 1] : 0.0;
                const double x = u[static_cast<size_t>(i)] - c * (qr - ql);
                if (!std::isfinite(x) || x < floor) {
                    ok = false;
                    break;
                }
                next.u.values[static_cast<size_t>(i)] = x;
            }
            if (ok) {
                next.t = state.t + dt;
                next.step_count = state.step_count + 1;
                next.newton_iter_total = state.newton_iter_total + iters;
                next.dt = nominal;
                if (cfg.allow_dt_growth && iters <= 4)
                    next.dt = std::min(nominal * 1.2, cfg.dt_max);
                return next;
            }
        }
        nominal = dt * 0.5;
    }
}

Trajectory solve(const Field& u_in, const SolverConfig& cfg) {
    SolverState s = make_solver_state(u_in, cfg);
    double cum_dissipation = 0.0, cum_bulk = 0.0;

    Trajectory traj;
    auto record = [&](const SolverState& st) {
        traj.push_back({st.t, st.u,
                        compute_record(st.u, cfg.params, st.t, cum_dissipation,
                                       cum_bulk, st.dt,
                                       st.newton_iter_total)});
    };
    record(s);
    if (cfg.t_end <= 0.0) return traj;

    const double rec =
        cfg.record_every > 0.0 ? cfg.record_every : cfg.t_end;
    double next_record = std::min(rec, cfg.t_end);
    const double t_tiny = 1e-12 * cfg.t_end;

    while (s.t < cfg.t_end - t_tiny) {
        const double cap = std::min(next_record, cfg.t_end) - s.t;
        SolverState ns = step(s, cfg, cap);
        const double dt_used = ns.t - s.t;
        cum_dissipation += dt_used * cfg.params.log_factor *
                           energy_dissipation_rate(ns.u, cfg.params);
        cum_bulk += dt_used * bulk_dissipation(ns.u);
        s = std::move(ns);
        if (s.t >= next_record - t_tiny) {
            record(s);
            next_record += rec;
        }
    }
    if (std::abs(traj.back().t - s.t) > t_tiny) record(s);
    return traj;
}

}  // namespace tfelab
