#include "tfelab/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace tfelab {

namespace {

Field clamped(const Field& u) {
    Field v = u;
    for (double& x : v.values) x = std::max(x, 0.0);
    return v;
}

}  // namespace

TestFunction make_test_function(const Grid& g,
                                const std::function<double(double)>& phi,
                                const std::function<double(double)>& dphi,
                                const std::function<double(double)>& d2phi) {
    return {make_field(g, phi), make_field(g, dphi), make_field(g, d2phi)};
}

double mass(const Field& u) { return integrate(u); }

double energy(const Field& u) {
    auto [d1, d2] = cell_derivatives_one_sided(u);
    (void)d2;
    double s = 0.0;
    for (double v : d1.values) s += v * v;
    return 0.5 * u.grid.h * s;
}

double energy_dissipation_rate(const Field& u, const ModelParams& p) {
    const Field v = clamped(u);
    const std::vector<double> d3 = face_third_derivative(v);
    const double h = u.grid.h;
    double s = 0.0;
    for (int f = 0; f + 1 < v.size(); ++f) {
        const double ubar = 0.5 * (v[f] + v[f + 1]);
        s += mobility(ubar, p) * d3[static_cast<size_t>(f)] *
             d3[static_cast<size_t>(f)];
    }
    return h * s;
}

double entropy_integral(const Field& u, const ModelParams& p) {
    return integrate(entropy_field(u, p));
}

double bulk_dissipation(const Field& u) {
    const Field v = clamped(u);
    auto [d1, d2] = cell_derivatives_one_sided(v);
    (void)d1;
    double s = 0.0;
    for (int i = 0; i < v.size(); ++i) s += v[i] * d2[i] * d2[i];
    return u.grid.h * s;
}

double apparent_support(const Field& u, double threshold) {
    const int n = u.size();
    const double h = u.grid.h;
    double measure = 0.0;
    // Interior pieces between adjacent cell centers.
    for (int i = 0; i + 1 < n; ++i) {
        const bool a = u[i] > threshold, b = u[i + 1] > threshold;
        if (a && b) {
            measure += h;
        } else if (a != b) {
            const double frac =
                (threshold - u[i]) / (u[i + 1] - u[i]);  // crossing offset
            measure += a ? frac * h : (1.0 - frac) * h;
        }
    }
    // Half-cells between the walls and the extreme centers.
    if (u[0] > threshold) measure += 0.5 * h;
    if (u[n - 1] > threshold) measure += 0.5 * h;
    return measure;
}

double weak_contact_flux(const Field& u, const TestFunction& tf) {
    const Field v = clamped(u);
    auto [d1, d2] = cell_derivatives_one_sided(v);
    const double h = u.grid.h;
    double a = 0.0, b = 0.0, c = 0.0;
    for (int i = 0; i < v.size(); ++i) {
        a += v[i] * d2[i] * d2[i] * tf.phi[i];
        b += d1[i] * d1[i] * d1[i] * tf.dphi[i];
        c += v[i] * d1[i] * d1[i] * tf.d2phi[i];
    }
    return h * a - (5.0 / 6.0) * h * b - 0.5 * h * c;
}

FluxRemainderBound flux_remainder_bound(const Field& u, const ModelParams& p) {
    const Field v = clamped(u);
    const std::vector<double> d3 = face_third_derivative(v);
    const double h = u.grid.h;
    double l1 = 0.0;
    for (int f = 0; f + 1 < v.size(); ++f) {
        const double ubar = 0.5 * (v[f] + v[f + 1]);
        if (ubar <= 0.0) continue;  // mobility factor vanishes
        const double r = p.log_factor * scaled_entropy_kernel_prime(ubar, p) *
                         mobility(ubar, p) * std::abs(d3[static_cast<size_t>(f)]);
        l1 += r;
    }
    l1 *= h;
    FluxRemainderBound out;
    out.lhs = l1;
    const double m = std::max(mass(v), 0.0);
    out.rhs = std::sqrt(flux_bound_constant(p.n) * m *
                        energy_dissipation_rate(v, p));
    out.ok = out.lhs <= out.rhs * (1.0 + 1e-6);
    return out;
}

std::pair<double, double> lipschitz_ratio(const Field& u,
                                          const ModelParams& p) {
    auto [d1, d2] = cell_derivatives_one_sided(u);
    (void)d2;
    double m = 0.0;
    for (double v : d1.values) m = std::max(m, std::abs(v));
    const double lhs = m * m;
    const double rhs =
        std::sqrt(1.0 + p.log_factor * energy_dissipation_rate(u, p));
    return {lhs, rhs};
}

DiagnosticsRecord compute_record(const Field& u, const ModelParams& p,
                                 double t, double cum_dissipation,
                                 double cum_bulk, double dt,
                                 long newton_iters) {
    DiagnosticsRecord r;
    r.t = t;
    r.mass = mass(u);
    r.energy = energy(u);
    r.dissipation_h = energy_dissipation_rate(u, p);
    r.cum_dissipation = cum_dissipation;
    r.entropy_integral = entropy_integral(u, p);
    r.bulk_dissipation = bulk_dissipation(u);
    r.cum_bulk = cum_bulk;
    r.support_measure = apparent_support(u, p.epsilon);
    auto [lhs, rhs] = lipschitz_ratio(u, p);
    r.sup_slope_sq = lhs;
    r.lipschitz_rhs = rhs;
    r.weak_R_l1 = flux_remainder_bound(u, p).lhs;
    r.dt = dt;
    r.newton_iters = newton_iters;
    return r;
}

}  // namespace tfelab
