// Pointwise model functions: the degenerate mobility and its delta
// regularization, the mollified support-indicator kernel and the entropy
// field built from it, and the wetting entropies used by the positivity
// argument of the scheme.
#pragma once

#include "tfelab/grid.hpp"

namespace tfelab {

// eps in (0,1), mobility exponent n in (0,3), log_factor = -ln(eps).
struct ModelParams {
    double epsilon = 1e-2;
    double n = 2.0;
    double log_factor = 0.0;   // |ln eps|
    double eps_pow_3mn = 0.0;  // eps^(3-n)

    static ModelParams make(double epsilon, double n);
};

struct RegularizationParams {
    double delta = 0.0;  // >= 0; must be > 0 on the solver's Jacobian path
};

// eps^(3-n) u^n + u^3 for u >= 0.
double mobility(double u, const ModelParams& p);

// mobility(|u|) + delta; positive for delta > 0, defined for all real u.
double mobility_regularized(double u, const ModelParams& p,
                            const RegularizationParams& r);

// d/du of mobility_regularized; the |u|^n term's derivative is taken as 0
// below |u| = 1e-300.
double mobility_regularized_deriv(double u, const ModelParams& p,
                                  const RegularizationParams& r);

// Kernel K(s) = int_0^s int_r^inf dv / (v^(n-1) + v^2) dr, the building block
// of the mollified support indicator. Closed forms for n = 1, 2; adaptive
// quadrature otherwise (abs tol 1e-10). K(0) = 0, K''(s) = -1/(s^(n-1)+s^2).
double entropy_kernel(double s, double n);

// Nested-quadrature evaluation of the same kernel for any n in (0,3); used as
// the independent oracle for the closed forms and as the general-n fallback.
double entropy_kernel_by_quadrature(double s, double n);

// K'(s) = int_s^inf dv / (v^(n-1) + v^2).
double entropy_kernel_prime(double s, double n);

// Scaled kernel K(s/eps) / |ln eps|: the smooth surrogate for the support
// indicator at parameter eps.
double scaled_entropy_kernel(double s, const ModelParams& p);

// d/ds of the scaled kernel: K'(s/eps) / (eps |ln eps|).
double scaled_entropy_kernel_prime(double s, const ModelParams& p);

// Pointwise scaled kernel of a solution snapshot. Negative values up to
// 1e-10 * max(u) are clamped to 0 (solver undershoot); larger negatives are
// rejected.
Field entropy_field(const Field& u, const ModelParams& p);

// Wetting entropy for the rescaled n = 1 mobility u(1+u^2):
//   arctan(1/s) - s/2 ln(1 + 1/s^2)  for s > 0,  +inf signaled for s <= 0.
double wetting_entropy(double s);

// H_delta(s) = int_s^inf int_r^inf du dr / (|u|(1+u^2) + delta), delta > 0;
// finite for all real s. Adaptive quadrature, abs tol 1e-9.
double wetting_entropy_regularized(double s, const RegularizationParams& r);

// sup_{s >= 0} [ (int_s^inf dr/(r^(n-1)+r^2))^2 (s^(n-1) + s^2) ], the
// constant of the flux-remainder L1 bound. Cached per n; pi^2/4 at n = 1,
// 1 (the s -> inf limit) at n = 2.
double flux_bound_constant(double n);

}  // namespace tfelab
