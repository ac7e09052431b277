#include "fou/malliavin.hpp"

#include <cmath>
#include <stdexcept>

namespace fou {

namespace {
double sq_norm(std::span<const double> v, std::size_t off, int dim) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) s += v[off + d] * v[off + d];
    return s;
}
} // namespace

CylindricalFunctional make_functional(const std::string& label, int dim) {
    if (dim < 1) throw std::invalid_argument("make_functional: dim must be >= 1");
    CylindricalFunctional F;
    F.label = label;
    if (label == "linear") {
        F.times = {1.0};
        F.constant_gradient = true;
        F.eval = [dim](std::span<const double> x) {
            double s = 0.0;
            for (int d = 0; d < dim; ++d) s += x[d];
            return s;
        };
        F.grad = [dim](std::span<const double>) { return std::vector<double>(dim, 1.0); };
    } else if (label == "quadratic") {
        F.times = {0.25, 0.5, 0.75, 1.0};
        F.eval = [dim](std::span<const double> x) {
            double s = 0.0;
            for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * x[k];
            return s;
        };
        F.grad = [](std::span<const double> x) {
            std::vector<double> g(x.size());
            for (std::size_t k = 0; k < x.size(); ++k) g[k] = 2.0 * x[k];
            return g;
        };
    } else if (label == "expsq") {
        F.times = {1.0};
        F.eval = [dim](std::span<const double> x) { return std::exp(-sq_norm(x, 0, dim)); };
        F.grad = [dim](std::span<const double> x) {
            double v = std::exp(-sq_norm(x, 0, dim));
            std::vector<double> g(dim);
            for (int d = 0; d < dim; ++d) g[d] = -2.0 * x[d] * v;
            return g;
        };
    } else if (label == "product") {
        F.times = {0.5, 1.0};
        F.eval = [dim](std::span<const double> x) {
            double s = 0.0;
            for (int d = 0; d < dim; ++d) s += x[d] * x[dim + d];
            return s;
        };
        F.grad = [dim](std::span<const double> x) {
            std::vector<double> g(2 * dim);
            for (int d = 0; d < dim; ++d) {
                g[d] = x[dim + d];
                g[dim + d] = x[d];
            }
            return g;
        };
    } else {
        throw std::invalid_argument("make_functional: unknown label '" + label + "'");
    }
    return F;
}

std::vector<std::string> functional_labels() { return {"linear", "quadratic", "expsq", "product"}; }

std::vector<int> time_indices(const CylindricalFunctional& F, const TimeGrid& grid) {
    std::vector<int> idx;
    idx.reserve(F.times.size());
    for (double t : F.times) {
        double k = t * grid.n_steps;
        int ki = (int)std::lround(k);
        if (std::fabs(k - ki) > 1e-9 || ki < 1 || ki > grid.n_steps)
            throw std::invalid_argument("time_indices: functional time not on grid");
        idx.push_back(ki);
    }
    return idx;
}

std::vector<double> gather_at_times(const CylindricalFunctional& F, const VecPath& path) {
    std::vector<int> idx = time_indices(F, path.grid);
    std::vector<double> x(idx.size() * path.dim);
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (int d = 0; d < path.dim; ++d) x[i * path.dim + d] = path.at(idx[i], d);
    return x;
}

double eval_functional(const CylindricalFunctional& F, const VecPath& path) {
    return F.eval(gather_at_times(F, path));
}

double directional_derivative(const CylindricalFunctional& F, const VecPath& path,
                              std::span<const double> h, const DiscreteKernel& kernel) {
    if (!kernel.grid.same_as(path.grid))
        throw std::invalid_argument("directional_derivative: grid mismatch");
    std::vector<double> kh = apply_K(kernel, h, path.dim);
    return directional_derivative_kh(F, path, kh);
}

double directional_derivative_kh(const CylindricalFunctional& F, const VecPath& path,
                                 std::span<const double> kh) {
    if ((int)kh.size() != (path.grid.n_steps + 1) * path.dim)
        throw std::invalid_argument("directional_derivative_kh: grid mismatch");
    std::vector<int> idx = time_indices(F, path.grid);
    std::vector<double> g = F.grad(gather_at_times(F, path));
    double acc = 0.0;
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (int d = 0; d < path.dim; ++d)
            acc += g[i * path.dim + d] * kh[(std::size_t)idx[i] * path.dim + d];
    return acc;
}

std::vector<double> k_inv_gradient(const CylindricalFunctional& F, const VecPath& path,
                                   const DiscreteKernel& kernel) {
    if (!kernel.grid.same_as(path.grid))
        throw std::invalid_argument("k_inv_gradient: grid mismatch");
    int n = kernel.n(), dim = path.dim;
    std::vector<int> idx = time_indices(F, path.grid);
    std::vector<double> g = F.grad(gather_at_times(F, path));
    std::vector<double> out((std::size_t)n * dim, 0.0);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const double* row = kernel.m.data() + (std::size_t)(idx[i] - 1) * n;
        for (int j = 0; j < idx[i]; ++j)
            for (int d = 0; d < dim; ++d)
                out[(std::size_t)j * dim + d] += g[i * dim + d] * row[j];
    }
    return out;
}

std::vector<std::string> direction_labels() { return {"const1", "cosine", "tanhx"}; }

bool direction_is_deterministic(const std::string& label) { return label != "tanhx"; }

std::vector<double> direction_values(const std::string& label, const TimeGrid& grid, int dim,
                                     const VecPath* path) {
    int n = grid.n_steps;
    std::vector<double> h((std::size_t)n * dim);
    if (label == "const1") {
        std::fill(h.begin(), h.end(), 1.0);
    } else if (label == "cosine") {
        for (int k = 0; k < n; ++k) {
            double v = std::cos(6.283185307179586 * grid.cell_mid(k));
            for (int d = 0; d < dim; ++d) h[(std::size_t)k * dim + d] = v;
        }
    } else if (label == "tanhx") {
        if (!path) throw std::invalid_argument("direction_values: 'tanhx' needs a path");
        for (int k = 0; k < n; ++k)
            for (int d = 0; d < dim; ++d)
                h[(std::size_t)k * dim + d] = std::tanh(path->at(k, d));
    } else {
        throw std::invalid_argument("direction_values: unknown label '" + label + "'");
    }
    return h;
}

} // namespace fou
