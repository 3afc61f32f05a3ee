#include "tfelab/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tfelab {

Grid make_uniform_grid(double x_left, double x_right, int n_cells) {
    if (!std::isfinite(x_left) || !std::isfinite(x_right))
        throw std::invalid_argument("grid bounds must be finite");
    if (!(x_left < x_right))
        throw std::invalid_argument("grid requires x_left < x_right");
    if (n_cells < kMinCells)
        throw std::invalid_argument("grid requires n_cells >= " +
                                    std::to_string(kMinCells));
    Grid g;
    g.x_left = x_left;
    g.x_right = x_right;
    g.n_cells = n_cells;
    g.h = (x_right - x_left) / n_cells;
    return g;
}

Field make_field(const Grid& g, const std::function<double(double)>& f) {
    Field out(g);
    for (int i = 0; i < g.n_cells; ++i) out[i] = f(g.center(i));
    return out;
}

double integrate(const Field& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return f.grid.h * s;
}

std::vector<double> reflect_extend(const Field& f) {
    const int n = f.size();
    std::vector<double> g(static_cast<size_t>(n) + 2);
    g[0] = f[0];
    for (int i = 0; i < n; ++i) g[static_cast<size_t>(i) + 1] = f[i];
    g[static_cast<size_t>(n) + 1] = f[n - 1];
    return g;
}

std::vector<double> face_third_derivative(const Field& f) {
    const int n = f.size();
    const double h3 = f.grid.h * f.grid.h * f.grid.h;
    const std::vector<double> g = reflect_extend(f);  // g[i+1] = f_i
    std::vector<double> d(static_cast<size_t>(n) - 1);
    for (int face = 0; face < n - 1; ++face) {
        // face between cells `face` and `face+1`
        const double* c = &g[static_cast<size_t>(face)];  // c[1] = f_face
        d[static_cast<size_t>(face)] = (c[3] - 3.0 * c[2] + 3.0 * c[1] - c[0]) / h3;
    }
    return d;
}

std::pair<Field, Field> cell_first_and_second_derivative(const Field& f) {
    const int n = f.size();
    const double h = f.grid.h;
    const std::vector<double> g = reflect_extend(f);
    Field d1(f.grid), d2(f.grid);
    for (int i = 0; i < n; ++i) {
        const double fm = g[static_cast<size_t>(i)];
        const double f0 = g[static_cast<size_t>(i) + 1];
        const double fp = g[static_cast<size_t>(i) + 2];
        d1[i] = (fp - fm) / (2.0 * h);
        d2[i] = (fp - 2.0 * f0 + fm) / (h * h);
    }
    return {std::move(d1), std::move(d2)};
}

std::pair<Field, Field> cell_derivatives_one_sided(const Field& f) {
    const int n = f.size();
    const double h = f.grid.h;
    Field d1(f.grid), d2(f.grid);
    for (int i = 1; i + 1 < n; ++i) {
        d1[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
        d2[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
    }
    // One-sided closures, exact on quadratics.
    d1[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d1[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    d2[0] = (f[0] - 2.0 * f[1] + f[2]) / (h * h);
    d2[n - 1] = (f[n - 1] - 2.0 * f[n - 2] + f[n - 3]) / (h * h);
    return {std::move(d1), std::move(d2)};
}

}  // namespace tfelab
