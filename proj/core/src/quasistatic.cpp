#include "tfelab/quasistatic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tfelab {

void DropletSet::validate() const {
    if (!(total_mass > 0.0))
        throw std::invalid_argument("total_mass must be > 0");
    if (!(x_left < x_right))
        throw std::invalid_argument("domain must have positive length");
    if (intervals.empty())
        throw std::invalid_argument("droplet set must be nonempty");
    const double slack = 1e-12 * domain_length();
    double gamma_sum = 0.0;
    double prev_b = x_left - slack;
    for (const auto& iv : intervals) {
        if (!(iv.a < iv.b))
            throw std::invalid_argument("interval must have a < b");
        if (iv.a < prev_b - slack)
            throw std::invalid_argument("intervals must be ordered/disjoint");
        if (iv.a < x_left - slack || iv.b > x_right + slack)
            throw std::invalid_argument("interval outside the domain");
        if (!(iv.gamma > 0.0))
            throw std::invalid_argument("gamma must be > 0");
        gamma_sum += iv.gamma;
        prev_b = iv.b;
    }
    if (std::abs(gamma_sum - 1.0) > 1e-12)
        throw std::invalid_argument("mass fractions must sum to 1");
}

void QsConfig::validate() const {
    if (!(dt_init > 0.0 && dt_max > 0.0 && t_end >= 0.0))
        throw std::invalid_argument("qs steps and t_end must be positive");
}

namespace {

struct IntervalRates {
    double da = 0.0, db = 0.0;
};

IntervalRates rates(const DropletInterval& iv, double total_mass) {
    const double L = iv.b - iv.a;
    const double gm = iv.gamma * total_mass;
    IntervalRates r;
    if (iv.wall_a && iv.wall_b) return r;  // fills the domain; frozen
    if (iv.wall_a) {
        r.db = tanner_velocity(3.0 * gm / (L * L));
    } else if (iv.wall_b) {
        r.da = -tanner_velocity(3.0 * gm / (L * L));
    } else {
        const double v = tanner_velocity(6.0 * gm / (L * L));
        r.da = -v;
        r.db = v;
    }
    return r;
}

}  // namespace

double droplet_height(const DropletSet& d, double x) {
    double w = 0.0;
    for (const auto& iv : d.intervals) {
        if (x < iv.a || x > iv.b) continue;
        const double L = iv.b - iv.a;
        const double gm = iv.gamma * d.total_mass;
        if (iv.wall_a && !iv.wall_b) {
            const double dd = x - iv.a;
            w += 1.5 * gm * std::max(L * L - dd * dd, 0.0) / (L * L * L);
        } else if (iv.wall_b && !iv.wall_a) {
            const double dd = iv.b - x;
            w += 1.5 * gm * std::max(L * L - dd * dd, 0.0) / (L * L * L);
        } else {
            // Interior parabola; also used when both endpoints touch walls.
            w += 6.0 * gm * std::max(iv.b - x, 0.0) * std::max(x - iv.a, 0.0) /
                 (L * L * L);
        }
    }
    return w;
}

std::vector<double> endpoint_slopes(const DropletSet& d) {
    std::vector<double> s;
    for (const auto& iv : d.intervals) {
        const double L = iv.b - iv.a;
        const double gm = iv.gamma * d.total_mass;
        const bool half = iv.wall_a != iv.wall_b;
        const double slope = (half ? 3.0 : 6.0) * gm / (L * L);
        if (!iv.wall_a) s.push_back(slope);
        if (!iv.wall_b) s.push_back(slope);
    }
    return s;
}

double tanner_velocity(double slope) {
    if (slope < 0.0) throw std::invalid_argument("slope must be >= 0");
    return slope * slope * slope / 3.0;
}

DropletSet qs_step(const DropletSet& d, double dt) {
    const size_t m = d.intervals.size();
    auto eval = [&](const std::vector<double>& y, std::vector<double>& dy) {
        DropletInterval iv;
        for (size_t i = 0; i < m; ++i) {
            iv = d.intervals[i];
            iv.a = y[2 * i];
            iv.b = y[2 * i + 1];
            const IntervalRates r = rates(iv, d.total_mass);
            dy[2 * i] = r.da;
            dy[2 * i + 1] = r.db;
        }
    };

    std::vector<double> y0(2 * m), k1(2 * m), k2(2 * m), k3(2 * m), k4(2 * m),
        yt(2 * m);
    for (size_t i = 0; i < m; ++i) {
        y0[2 * i] = d.intervals[i].a;
        y0[2 * i + 1] = d.intervals[i].b;
    }
    eval(y0, k1);
    for (size_t i = 0; i < 2 * m; ++i) yt[i] = y0[i] + 0.5 * dt * k1[i];
    eval(yt, k2);
    for (size_t i = 0; i < 2 * m; ++i) yt[i] = y0[i] + 0.5 * dt * k2[i];
    eval(yt, k3);
    for (size_t i = 0; i < 2 * m; ++i) yt[i] = y0[i] + dt * k3[i];
    eval(yt, k4);

    DropletSet out = d;
    for (size_t i = 0; i < m; ++i) {
        auto& iv = out.intervals[i];
        iv.a = y0[2 * i] +
               dt / 6.0 * (k1[2 * i] + 2 * k2[2 * i] + 2 * k3[2 * i] + k4[2 * i]);
        iv.b = y0[2 * i + 1] + dt / 6.0 *
                                   (k1[2 * i + 1] + 2 * k2[2 * i + 1] +
                                    2 * k3[2 * i + 1] + k4[2 * i + 1]);
        if (iv.a <= d.x_left) {
            iv.a = d.x_left;
            iv.wall_a = true;
        }
        if (iv.b >= d.x_right) {
            iv.b = d.x_right;
            iv.wall_b = true;
        }
    }
    return out;
}

DropletSet detect_and_merge(const DropletSet& d, double merge_gap) {
    DropletSet out = d;
    bool merged = true;
    while (merged && out.intervals.size() > 1) {
        merged = false;
        for (size_t i = 0; i + 1 < out.intervals.size(); ++i) {
            if (out.intervals[i + 1].a - out.intervals[i].b <= merge_gap) {
                DropletInterval u;
                u.a = out.intervals[i].a;
                u.b = out.intervals[i + 1].b;
                u.gamma = out.intervals[i].gamma + out.intervals[i + 1].gamma;
                u.wall_a = out.intervals[i].wall_a;
                u.wall_b = out.intervals[i + 1].wall_b;
                out.intervals[i] = u;
                out.intervals.erase(out.intervals.begin() +
                                    static_cast<long>(i) + 1);
                merged = true;
                break;
            }
        }
    }
    return out;
}

namespace {

// An event happened inside the step when some endpoint got pinned (wall flag
// flipped) or some gap entered the merge band. Gaps and wall distances shrink
// monotonically along trajectories, so bisection on the step size is sound.
bool has_event(const DropletSet& before, const DropletSet& after,
               double merge_gap) {
    for (size_t i = 0; i < after.intervals.size(); ++i) {
        if (after.intervals[i].wall_a && !before.intervals[i].wall_a)
            return true;
        if (after.intervals[i].wall_b && !before.intervals[i].wall_b)
            return true;
    }
    for (size_t i = 0; i + 1 < after.intervals.size(); ++i)
        if (after.intervals[i + 1].a - after.intervals[i].b <= merge_gap)
            return true;
    return false;
}

double max_endpoint_speed(const DropletSet& d) {
    double v = 0.0;
    for (const auto& iv : d.intervals) {
        const IntervalRates r = rates(iv, d.total_mass);
        v = std::max(v, std::max(std::abs(r.da), std::abs(r.db)));
    }
    return v;
}

double heuristic_dt(const DropletSet& d) {
    double dt = std::numeric_limits<double>::infinity();
    for (const auto& iv : d.intervals) {
        const IntervalRates r = rates(iv, d.total_mass);
        const double speed = std::max(std::abs(r.da), std::abs(r.db));
        if (speed > 0.0) dt = std::min(dt, 0.01 * (iv.b - iv.a) / speed);
    }
    return dt;
}

}  // namespace

std::vector<QsSample> qs_solve(const DropletSet& d0, const QsConfig& cfg) {
    d0.validate();
    cfg.validate();
    const double gap =
        cfg.merge_gap > 0.0 ? cfg.merge_gap : 1e-9 * d0.domain_length();

    DropletSet d = detect_and_merge(d0, gap);
    double t = 0.0;
    std::vector<QsSample> traj{{t, d}};
    if (cfg.t_end <= 0.0) return traj;

    const double rec = cfg.record_every > 0.0 ? cfg.record_every : cfg.t_end;
    double next_record = std::min(rec, cfg.t_end);
    const double t_tiny = 1e-12 * cfg.t_end;
    bool first = true;

    while (t < cfg.t_end - t_tiny) {
        double dt = std::min(heuristic_dt(d), cfg.dt_max);
        if (first) {
            dt = std::min(dt, cfg.dt_init);
            first = false;
        }
        dt = std::min(dt, std::min(next_record, cfg.t_end) - t);

        DropletSet trial = qs_step(d, dt);
        if (has_event(d, trial, gap)) {
            // Bisect the step until the event time is bracketed so tightly
            // that endpoints move less than merge_gap across the bracket.
            const double vmax = std::max(max_endpoint_speed(d), 1e-300);
            double lo = 0.0, hi = dt;
            for (int it = 0; it < 200 && (hi - lo) * vmax > 0.5 * gap; ++it) {
                const double mid = 0.5 * (lo + hi);
                DropletSet probe = qs_step(d, mid);
                if (has_event(d, probe, gap)) {
                    hi = mid;
                    trial = std::move(probe);
                } else {
                    lo = mid;
                }
            }
            dt = hi;
            t += dt;
            traj.push_back({t, trial});  // state entering the event
            d = detect_and_merge(trial, gap);
            traj.push_back({t, d});  // state after the transition
        } else {
            d = std::move(trial);
            t += dt;
        }
        if (t >= next_record - t_tiny) {
            traj.push_back({t, d});
            next_record += rec;
        }
    }
    if (traj.back().t < t - t_tiny) traj.push_back({t, d});
    return traj;
}

SupportBounds support_growth_bounds(double t, double s0, double omega_len) {
    if (!(t >= 0.0) || !(s0 >= 0.0))
        throw std::invalid_argument("bounds require t >= 0 and s0 >= 0");
    const double s7 = std::pow(s0, 7.0);
    SupportBounds b;
    b.general = std::min(std::pow(63.0 * t + s7, 1.0 / 7.0), omega_len);
    b.interior = std::pow(1008.0 * t + s7, 1.0 / 7.0);
    return b;
}

double total_support(const DropletSet& d) {
    double s = 0.0;
    for (const auto& iv : d.intervals) s += iv.b - iv.a;
    return s;
}

}  // namespace tfelab
