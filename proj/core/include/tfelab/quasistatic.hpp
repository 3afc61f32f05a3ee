// The limiting free-boundary model: per-interval parabola profiles, Tanner
// endpoint velocities V = |w_x|^3 / 3, RK4 endpoint integration with
// event-located droplet merging and wall pinning.
#pragma once

#include <vector>

namespace tfelab {

struct DropletInterval {
    double a = 0.0, b = 0.0;  // a < b
    double gamma = 1.0;       // mass fraction, > 0
    bool wall_a = false;      // endpoint pinned at the domain boundary
    bool wall_b = false;
};

struct DropletSet {
    std::vector<DropletInterval> intervals;  // ordered, disjoint
    double total_mass = 1.0;
    double x_left = 0.0, x_right = 1.0;  // domain

    void validate() const;
    double domain_length() const { return x_right - x_left; }
};

struct QsConfig {
    double dt_init = 1e-4;
    double dt_max = 1e-2;
    double merge_gap = 0.0;  // <= 0 selects 1e-9 * |domain|
    double t_end = 1.0;
    double record_every = 0.0;  // <= 0 records only t = 0, events and t_end

    void validate() const;
};

// Profile height at x: interior intervals carry 6 gamma m (b-x)+(x-a)+/L^3,
// wall-pinned intervals the half-parabola 3/2 gamma m (L^2 - d^2)+/L^3 with d
// the distance from the wall.
double droplet_height(const DropletSet& d, double x);

// |w_x| at each free endpoint, in interval order (left endpoint before right).
// Interior parabola: 6 gamma m / L^2; wall droplet free end: 3 gamma m / L^2.
std::vector<double> endpoint_slopes(const DropletSet& d);

// Contact-line speed |w_x|^3 / 3.
double tanner_velocity(double slope);

// One explicit RK4 step of the endpoint ODE system; endpoints are clamped to
// the domain and become wall endpoints on contact. No merging here.
DropletSet qs_step(const DropletSet& d, double dt);

// Merges every adjacent pair with gap <= merge_gap (repeatedly); gamma adds.
DropletSet detect_and_merge(const DropletSet& d, double merge_gap);

struct QsSample {
    double t = 0.0;
    DropletSet state;
};

// Event-accurate trajectory: records at multiples of record_every, at both
// sides of every merge/pin event (same t), and at t_end. Merge and contact
// times are located by bisection on the step so that the triggering gap or
// wall distance lands within merge_gap.
std::vector<QsSample> qs_solve(const DropletSet& d0, const QsConfig& cfg);

struct SupportBounds {
    double general = 0.0;   // min((63 t + s0^7)^(1/7), |domain|)
    double interior = 0.0;  // (1008 t + s0^7)^(1/7)
};

// Closed-form lower bounds for the support growth at unit mass.
SupportBounds support_growth_bounds(double t, double s0, double omega_len);

double total_support(const DropletSet& d);

}  // namespace tfelab
