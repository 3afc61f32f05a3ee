#include "tfelab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

namespace tfelab {

PowerLawFit power_law_fit(std::span<const double> times,
                          std::span<const double> sizes, double t_lo,
                          double t_hi) {
    if (times.size() != sizes.size())
        throw std::invalid_argument("power_law_fit: length mismatch");
    std::vector<double> x, y;
    for (size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_lo || times[i] > t_hi) continue;
        if (!(times[i] > 0.0) || !(sizes[i] > 0.0))
            throw std::invalid_argument(
                "power_law_fit: nonpositive time or size inside the window");
        x.push_back(std::log(times[i]));
        y.push_back(std::log(sizes[i]));
    }
    const size_t m = x.size();
    if (m < 8)
        throw std::invalid_argument(
            "power_law_fit: needs at least 8 samples in the window");
    double xm = 0.0, ym = 0.0;
    for (size_t i = 0; i < m; ++i) {
        xm += x[i];
        ym += y[i];
    }
    xm /= static_cast<double>(m);
    ym /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < m; ++i) {
        sxx += (x[i] - xm) * (x[i] - xm);
        sxy += (x[i] - xm) * (y[i] - ym);
    }
    if (!(sxx > 0.0))
        throw std::invalid_argument(
            "power_law_fit: degenerate window (all times equal)");
    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    fit.prefactor = std::exp(ym - fit.exponent * xm);
    double ss = 0.0;
    for (size_t i = 0; i < m; ++i) {
        const double r = y[i] - (ym + fit.exponent * (x[i] - xm));
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(m));
    fit.n_samples = static_cast<int>(m);
    return fit;
}

namespace {

SweepEntry run_sweep_entry(SolverConfig cfg, const InitialConditionSpec& ic,
                           const Grid& g, double eps, double window_frac) {
    cfg.params = ModelParams::make(eps, cfg.params.n);
    SweepEntry e;
    e.epsilon = eps;
    e.config_used = cfg;
    Trajectory traj;
    try {
        traj = solve(initial_condition(ic, g), cfg);
    } catch (const SolverAbort& abort) {
        e.aborted = true;
        e.error = abort.what();
        return e;
    }
    e.times.reserve(traj.size());
    e.supports.reserve(traj.size());
    double mass0 = traj.front().record.mass;
    double energy0 = traj.front().record.energy;
    double prev_energy = energy0;
    const double c_sup = flux_bound_constant(cfg.params.n);
    e.min_margin = std::numeric_limits<double>::infinity();
    for (const auto& pt : traj) {
        e.times.push_back(pt.t);
        e.supports.push_back(pt.record.support_measure);
        e.mass_drift =
            std::max(e.mass_drift,
                     std::abs(pt.record.mass - mass0) / std::max(mass0, 1e-300));
        if (pt.record.energy > prev_energy + 1e-8 * energy0)
            e.energy_monotone = false;
        prev_energy = pt.record.energy;
        const double rhs = std::sqrt(c_sup * std::max(pt.record.mass, 0.0) *
                                     pt.record.dissipation_h);
        if (pt.record.weak_R_l1 > rhs * (1.0 + 1e-6)) e.flux_bound_ok = false;
        if (pt.record.lipschitz_rhs > 0.0)
            e.max_lipschitz_ratio =
                std::max(e.max_lipschitz_ratio,
                         pt.record.sup_slope_sq / pt.record.lipschitz_rhs);
    }
    e.initial_support = e.supports.front();
    for (size_t k = 0; k < e.times.size(); ++k) {
        const double bound =
            support_growth_bounds(e.times[k], e.initial_support, g.length())
                .general;
        e.min_margin = std::min(e.min_margin, e.supports[k] - bound);
    }
    e.fit_t_lo = cfg.t_end * (1.0 - window_frac);
    e.fit_t_hi = cfg.t_end;
    try {
        e.fit = power_law_fit(e.times, e.supports, e.fit_t_lo, e.fit_t_hi);
    } catch (const std::invalid_argument& err) {
        e.fit.reset();
        e.error = err.what();
    }
    return e;
}

}  // namespace

SweepReport epsilon_sweep(const SolverConfig& base,
                          const InitialConditionSpec& initial, const Grid& g,
                          std::span<const double> eps_list,
                          double fit_window_fraction) {
    if (eps_list.empty())
        throw std::invalid_argument("epsilon_sweep: empty eps list");
    for (size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0 && eps_list[i] < 1.0))
            throw std::invalid_argument("epsilon must lie in (0,1)");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
            throw std::invalid_argument("eps list must be decreasing");
    }
    if (!(fit_window_fraction > 0.0 && fit_window_fraction <= 1.0))
        throw std::invalid_argument("fit window fraction must be in (0,1]");

    SweepReport rep;
    rep.fit_window_fraction = fit_window_fraction;
    rep.grid = g;
    rep.n_exponent = base.params.n;
    rep.initial = initial;

    std::vector<std::future<SweepEntry>> jobs;
    jobs.reserve(eps_list.size());
    for (double eps : eps_list)
        jobs.push_back(std::async(std::launch::async, run_sweep_entry, base,
                                  std::cref(initial), std::cref(g), eps,
                                  fit_window_fraction));
    for (auto& j : jobs) rep.entries.push_back(j.get());
    return rep;
}

DropletSet droplet_set_from_initial(const InitialConditionSpec& initial,
                                    const Grid& g) {
    DropletSet d;
    d.x_left = g.x_left;
    d.x_right = g.x_right;
    if (const auto* p = std::get_if<ParabolaIc>(&initial.kind)) {
        d.total_mass = p->mass;
        d.intervals = {{p->a, p->b, 1.0, false, false}};
    } else if (const auto* hp = std::get_if<HalfParabolaIc>(&initial.kind)) {
        d.total_mass = hp->mass;
        if (hp->wall == Wall::left)
            d.intervals = {{g.x_left, hp->b, 1.0, true, false}};
        else
            d.intervals = {{hp->b, g.x_right, 1.0, false, true}};
    } else if (const auto* tp = std::get_if<TwoParabolasIc>(&initial.kind)) {
        d.total_mass = tp->m1 + tp->m2;
        d.intervals = {{tp->a1, tp->b1, tp->m1 / d.total_mass, false, false},
                       {tp->a2, tp->b2, tp->m2 / d.total_mass, false, false}};
    } else {
        throw std::invalid_argument(
            "quasi-static comparison requires a parabola-family initial "
            "condition");
    }
    d.validate();
    return d;
}

CompareReport compare_with_quasistatic(const SolverConfig& cfg,
                                       const InitialConditionSpec& initial,
                                       const Grid& g, const QsConfig& qs_cfg) {
    if (!std::holds_alternative<ParabolaIc>(initial.kind) &&
        !std::holds_alternative<HalfParabolaIc>(initial.kind))
        throw std::invalid_argument(
            "compare requires a single-droplet initial condition");

    const Trajectory traj = solve(initial_condition(initial, g), cfg);

    QsConfig qc = qs_cfg;
    qc.t_end = cfg.t_end;
    qc.record_every = cfg.record_every;
    const std::vector<QsSample> qs =
        qs_solve(droplet_set_from_initial(initial, g), qc);

    CompareReport rep;
    for (const auto& pt : traj) {
        // Nearest quasi-static sample in time.
        size_t best = 0;
        double best_dt = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < qs.size(); ++k) {
            const double dd = std::abs(qs[k].t - pt.t);
            if (dd < best_dt) {
                best_dt = dd;
                best = k;
            }
        }
        const DropletSet& d = qs[best].state;
        double dist = 0.0, peak = 0.0;
        for (int i = 0; i < g.n_cells; ++i) {
            const double x = g.center(i);
            const double w = droplet_height(d, x);
            peak = std::max(peak, w);
            bool inside = false;
            for (const auto& iv : d.intervals)
                if (x >= iv.a && x <= iv.b) inside = true;
            if (inside) dist = std::max(dist, std::abs(pt.u[i] - w));
        }
        rep.t.push_back(pt.t);
        rep.profile_distance.push_back(dist);
        rep.qs_peak.push_back(peak);
        rep.support_pde.push_back(pt.record.support_measure);
        rep.support_qs.push_back(total_support(d));
    }
    return rep;
}

}  // namespace tfelab
