#include "tfelab/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace tfelab {

namespace {

void check_exponent(double n) {
    if (!(n > 0.0 && n < 3.0))
        throw std::invalid_argument("n must lie in (0,3)");
}

// int_a^inf f, double-exponential quadrature.
template <class F>
double integrate_tail(F f, double a, double tol) {
    boost::math::quadrature::exp_sinh<double> integ;
    return integ.integrate([&](double t) { return f(a + t); }, tol);
}

template <class F>
double integrate_interval(F f, double a, double b, double tol) {
    boost::math::quadrature::tanh_sinh<double> integ;
    return integ.integrate(f, a, b, tol);
}

double kernel_prime_quadrature(double s, double n) {
    return integrate_tail(
        [n](double v) { return 1.0 / (std::pow(v, n - 1.0) + v * v); }, s,
        1e-12);
}

}  // namespace

ModelParams ModelParams::make(double epsilon, double n) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("epsilon must lie in (0,1)");
    check_exponent(n);
    ModelParams p;
    p.epsilon = epsilon;
    p.n = n;
    p.log_factor = -std::log(epsilon);
    p.eps_pow_3mn = std::pow(epsilon, 3.0 - n);
    return p;
}

double mobility(double u, const ModelParams& p) {
    if (u < 0.0)
        throw std::invalid_argument(
            "mobility requires u >= 0 (use mobility_regularized)");
    return p.eps_pow_3mn * std::pow(u, p.n) + u * u * u;
}

double mobility_regularized(double u, const ModelParams& p,
                            const RegularizationParams& r) {
    const double a = std::abs(u);
    return p.eps_pow_3mn * std::pow(a, p.n) + a * a * a + r.delta;
}

double mobility_regularized_deriv(double u, const ModelParams& p,
                                  const RegularizationParams&) {
    const double a = std::abs(u);
    const double sgn = u < 0.0 ? -1.0 : 1.0;
    double d = 3.0 * a * a;
    if (a > 1e-300) d += p.n * p.eps_pow_3mn * std::pow(a, p.n - 1.0);
    return sgn * d;
}

double entropy_kernel(double s, double n) {
    check_exponent(n);
    if (s < 0.0) throw std::invalid_argument("entropy_kernel requires s >= 0");
    if (s == 0.0) return 0.0;
    if (n == 1.0)  // s arctan(1/s) + ln(1+s^2)/2
        return s * std::atan(1.0 / s) + 0.5 * std::log1p(s * s);
    if (n == 2.0)  // s ln((s+1)/s) + ln(1+s)
        return s * std::log1p(1.0 / s) + std::log1p(s);
    return entropy_kernel_by_quadrature(s, n);
}

double entropy_kernel_by_quadrature(double s, double n) {
    check_exponent(n);
    if (s < 0.0) throw std::invalid_argument("entropy_kernel requires s >= 0");
    if (s == 0.0) return 0.0;
    // Outer integrand K'(r) may blow up at r -> 0 for n >= 2 (integrably);
    // tanh_sinh handles the endpoint.
    return integrate_interval(
        [n](double r) { return kernel_prime_quadrature(r, n); }, 0.0, s, 1e-11);
}

double entropy_kernel_prime(double s, double n) {
    check_exponent(n);
    if (s < 0.0) throw std::invalid_argument("entropy_kernel requires s >= 0");
    if (n == 1.0) return std::atan(1.0 / std::max(s, 1e-300));
    if (n == 2.0) return std::log1p(1.0 / std::max(s, 1e-300));
    return kernel_prime_quadrature(s, n);
}

double scaled_entropy_kernel(double s, const ModelParams& p) {
    return entropy_kernel(s / p.epsilon, p.n) / p.log_factor;
}

double scaled_entropy_kernel_prime(double s, const ModelParams& p) {
    return entropy_kernel_prime(s / p.epsilon, p.n) /
           (p.epsilon * p.log_factor);
}

Field entropy_field(const Field& u, const ModelParams& p) {
    double umax = 0.0;
    for (double v : u.values) umax = std::max(umax, v);
    const double clamp_floor = -1e-10 * std::max(umax, 1.0);
    Field rho(u.grid);
    for (int i = 0; i < u.size(); ++i) {
        double v = u[i];
        if (v < 0.0) {
            if (v < clamp_floor)
                throw std::invalid_argument(
                    "entropy_field: negative value beyond undershoot tolerance");
            v = 0.0;
        }
        rho[i] = scaled_entropy_kernel(v, p);
    }
    return rho;
}

double wetting_entropy(double s) {
    if (s <= 0.0) return std::numeric_limits<double>::infinity();
    // arctan(1/s) - s/2 ln(1+1/s^2); the s -> 0+ limit is pi/2.
    return std::atan(1.0 / s) - 0.5 * s * std::log1p(1.0 / (s * s));
}

double wetting_entropy_regularized(double s, const RegularizationParams& r) {
    if (!(r.delta > 0.0))
        throw std::invalid_argument(
            "wetting_entropy_regularized requires delta > 0 (use "
            "wetting_entropy)");
    const double delta = r.delta;
    auto f = [delta](double u) {
        const double a = std::abs(u);
        return 1.0 / (a * (1.0 + a * a) + delta);
    };
    auto inner = [&](double rr) {
        if (rr >= 0.0) return integrate_tail(f, rr, 1e-11);
        return integrate_interval(f, rr, 0.0, 1e-11) +
               integrate_tail(f, 0.0, 1e-11);
    };
    if (s >= 0.0) return integrate_tail(inner, s, 1e-10);
    return integrate_interval(inner, s, 0.0, 1e-10) +
           integrate_tail(inner, 0.0, 1e-10);
}

namespace {

double flux_bound_objective(double s, double n) {
    const double p = kernel_prime_quadrature(s, n);
    return p * p * (std::pow(s, n - 1.0) + s * s);
}

double flux_bound_compute(double n) {
    // Log-grid scan plus golden-section refinement, then the two analytic
    // endpoint values: the bracket tends to 1 as s -> inf for every n < 3,
    // and at s = 0 it is finite only for n >= 1 (pi^2/4 at n = 1).
    double best = 1.0;  // s -> inf limit
    double best_s = std::numeric_limits<double>::infinity();
    constexpr int kScan = 161;
    for (int k = 0; k < kScan; ++k) {
        const double s = std::pow(10.0, -6.0 + 10.0 * k / (kScan - 1.0));
        const double v = flux_bound_objective(s, n);
        if (v > best) {
            best = v;
            best_s = s;
        }
    }
    if (n >= 1.0) {
        const double p0 = kernel_prime_quadrature(0.0, n);
        const double at0 = (n == 1.0) ? p0 * p0 : 0.0;
        if (at0 > best) {
            best = at0;
            best_s = 0.0;
        }
    }
    if (std::isfinite(best_s) && best_s > 0.0) {
        double lo = best_s / std::pow(10.0, 10.0 / (kScan - 1.0));
        double hi = best_s * std::pow(10.0, 10.0 / (kScan - 1.0));
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = flux_bound_objective(x1, n);
        double f2 = flux_bound_objective(x2, n);
        for (int it = 0; it < 80; ++it) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = flux_bound_objective(x2, n);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = flux_bound_objective(x1, n);
            }
        }
        best = std::max(best, std::max(f1, f2));
    }
    return best;
}

}  // namespace

double flux_bound_constant(double n) {
    check_exponent(n);
    static std::mutex mu;
    static std::map<double, double> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    const double v = flux_bound_compute(n);
    cache.emplace(n, v);
    return v;
}

}  // namespace tfelab
