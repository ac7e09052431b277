#pragma once
#include "fou/fracops.hpp"
#include "fou/grid.hpp"
#include "fou/kernel.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fou {

// Smooth cylindrical functional F(w) = f(w_{t_1},...,w_{t_m}) with analytic
// gradient. eval/grad take the m point values flattened (m*dim).
struct CylindricalFunctional {
    std::string label;
    std::vector<double> times;   // sorted, in (0,1], snapped to grid points at use
    std::function<double(std::span<const double>)> eval;
    std::function<std::vector<double>(std::span<const double>)> grad;
    bool constant_gradient = false;   // gradient independent of the path (linear F)
};

// Shipped library: "linear" <1, w_1>; "quadratic" sum |w_{t_i}|^2 over
// {1/4,1/2,3/4,1}; "expsq" exp(-|w_1|^2); "product" <w_{1/2}, w_1>.
CylindricalFunctional make_functional(const std::string& label, int dim);
std::vector<std::string> functional_labels();

// Index of each F.time on the grid; throws if a time is off-grid.
std::vector<int> time_indices(const CylindricalFunctional& F, const TimeGrid& grid);

// Values of the path at F.times, flattened m*dim.
std::vector<double> gather_at_times(const CylindricalFunctional& F, const VecPath& path);

double eval_functional(const CylindricalFunctional& F, const VecPath& path);

// D_h F = sum_i <grad^i f(path at F.times), (Kh)_{t_i}>.
double directional_derivative(const CylindricalFunctional& F, const VecPath& path,
                              std::span<const double> h, const DiscreteKernel& kernel);

// Same with Kh precomputed at the grid points (hot-loop variant for
// deterministic directions).
double directional_derivative_kh(const CylindricalFunctional& F, const VecPath& path,
                                 std::span<const double> kh_points);

// (K^-1 DF)_s = sum_{i: t_i > s} K(t_i, s) grad^i f, realized on cells through
// the kernel matrix rows; satisfies <result, h> = D_h F for every h.
std::vector<double> k_inv_gradient(const CylindricalFunctional& F, const VecPath& path,
                                   const DiscreteKernel& kernel);

// Direction library for the verification suites. "const1" and "cosine" are
// deterministic; "tanhx" is the bounded adapted process tanh(X_{t_k}).
std::vector<std::string> direction_labels();
bool direction_is_deterministic(const std::string& label);
std::vector<double> direction_values(const std::string& label, const TimeGrid& grid, int dim,
                                     const VecPath* path = nullptr);

} // namespace fou
