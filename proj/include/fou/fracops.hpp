#pragma once
#include "fou/grid.hpp"
#include "fou/kernel.hpp"

#include <span>
#include <vector>

namespace fou {

// Adapted integrand h with one value per grid cell (dim components each);
// Kh is its Cameron-Martin direction.
struct CMElement {
    TimeGrid grid;
    int dim = 1;
    std::vector<double> h_values;            // n_steps x dim
    std::vector<double> kh_values;           // optional cache, (n_steps+1) x dim

    double at(int j, int d) const { return h_values[(std::size_t)j * dim + d]; }
};

// Wrap cell values as a CMElement with its Kh cache filled in.
CMElement make_cm_element(const DiscreteKernel& kernel, std::vector<double> h_values, int dim = 1);

// (Kh)_{t_i} = sum_{j<i} M[i-1][j] h_j dt, (Kh)_0 = 0. Output at grid points.
std::vector<double> apply_K(const DiscreteKernel& kernel, std::span<const double> h, int dim = 1);

// Forward substitution: returns the unique cell integrand h with apply_K(h) = g.
// g is point-indexed with g[0] = 0.
std::vector<double> apply_K_inverse_matrix(const DiscreteKernel& kernel,
                                           std::span<const double> g, int dim = 1);

// Analytic inverse (kappa-corrected Marchaud form of the fractional
// derivative), evaluated at cell midpoints from point samples of g.
// Numerical derivative: forward differences per cell (the midpoint stencil).
std::vector<double> apply_K_inverse_marchaud(HurstParam H, const TimeGrid& grid,
                                             std::span<const double> g);

// sum_k <h_k, g_k> dt; the L2([0,1]) pairing of one realization.
double inner_product(const TimeGrid& grid, std::span<const double> h,
                     std::span<const double> g, int dim = 1);

} // namespace fou
