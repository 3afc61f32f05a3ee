// Uniform 1D cell-centered grid, scalar fields, midpoint quadrature and the
// finite-difference stencils used by the solver and the diagnostics.
#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace tfelab {

// Cell-centered uniform grid on [x_left, x_right]; cell i (0-based) has
// center x_left + (i + 1/2) h.
struct Grid {
    double x_left = 0.0;
    double x_right = 1.0;
    int n_cells = 0;
    double h = 0.0;

    double center(int i) const { return x_left + (i + 0.5) * h; }
    double length() const { return x_right - x_left; }
};

// The third-derivative stencil needs 4 interior points plus ghosts.
inline constexpr int kMinCells = 8;

Grid make_uniform_grid(double x_left, double x_right, int n_cells);

// Cell-centered samples of a scalar function on a Grid.
struct Field {
    Grid grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const Grid& g, double fill = 0.0)
        : grid(g), values(static_cast<size_t>(g.n_cells), fill) {}

    int size() const { return grid.n_cells; }
    double& operator[](int i) { return values[static_cast<size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<size_t>(i)]; }
};

Field make_field(const Grid& g, const std::function<double(double)>& f);

// Midpoint rule h * sum_i f_i; exact for piecewise constants, 2nd order for
// smooth integrands.
double integrate(const Field& f);

// Values of f extended by one reflection ghost on each side (encodes u_x = 0
// at both walls): g[0] = f_0, g[1..N] = f, g[N+1] = f_{N-1}.
std::vector<double> reflect_extend(const Field& f);

// Third derivative at the N-1 interior faces,
//   (f_{i+2} - 3 f_{i+1} + 3 f_i - f_{i-1}) / h^3  at face i+1/2,
// with reflection ghosts substituted at the two extreme faces. Exact on
// cubics away from the ghost-affected faces.
std::vector<double> face_third_derivative(const Field& f);

// Centered first and second cell derivatives with reflection ghosts.
std::pair<Field, Field> cell_first_and_second_derivative(const Field& f);

// Same centered interior stencils, but the two boundary cells use one-sided
// quadratic-exact closures instead of ghosts. Used by diagnostics, which must
// evaluate snapshots that need not satisfy the boundary conditions.
std::pair<Field, Field> cell_derivatives_one_sided(const Field& f);

}  // namespace tfelab
