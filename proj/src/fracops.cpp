#include "fou/fracops.hpp"
#include "fou/special.hpp"

#include <cmath>
#include <stdexcept>

namespace fou {

std::vector<double> apply_K(const DiscreteKernel& kernel, std::span<const double> h, int dim) {
    int n = kernel.n();
    if ((int)h.size() != n * dim) throw std::invalid_argument("apply_K: shape mismatch");
    double dt = kernel.grid.dt;
    std::vector<double> out((std::size_t)(n + 1) * dim, 0.0);
    for (int i = 0; i < n; ++i) {
        const double* row = kernel.m.data() + (std::size_t)i * n;
        for (int d = 0; d < dim; ++d) {
            double acc = 0.0;
            for (int j = 0; j <= i; ++j) acc += row[j] * h[(std::size_t)j * dim + d];
            out[(std::size_t)(i + 1) * dim + d] = acc * dt;
        }
    }
    return out;
}

std::vector<double> apply_K_inverse_matrix(const DiscreteKernel& kernel,
                                           std::span<const double> g, int dim) {
    int n = kernel.n();
    if ((int)g.size() != (n + 1) * dim) throw std::invalid_argument("apply_K_inverse_matrix: shape mismatch");
    for (int d = 0; d < dim; ++d)
        if (g[d] != 0.0) throw std::invalid_argument("apply_K_inverse_matrix: g[0] must be 0");
    double dt = kernel.grid.dt;
    std::vector<double> h((std::size_t)n * dim, 0.0);
    for (int i = 0; i < n; ++i) {
        const double* row = kernel.m.data() + (std::size_t)i * n;
        double diag = row[i] * dt;
        if (!(diag > 0.0)) throw std::runtime_error("apply_K_inverse_matrix: singular kernel diagonal");
        for (int d = 0; d < dim; ++d) {
            double acc = g[(std::size_t)(i + 1) * dim + d];
            for (int j = 0; j < i; ++j) acc -= row[j] * dt * h[(std::size_t)j * dim + d];
            h[(std::size_t)i * dim + d] = acc / diag;
        }
    }
    return h;
}

// Closed-form integral of (c0 + m*(t-u)) (t-u)^{-b} over u in [a, c] with
// w1 = t-a >= w2 = t-c >= 0.
namespace {
struct SegInt {
    double i0, i1;   // int (t-u)^{-b} du, int (t-u)^{1-b} du
};
inline SegInt seg_weights(double w1, double w2, double b) {
    double p1 = 1.0 - b, p2 = 2.0 - b;
    double a0 = (std::pow(w1, p1) - (w2 > 0.0 ? std::pow(w2, p1) : 0.0)) / p1;
    double a1 = (std::pow(w1, p2) - (w2 > 0.0 ? std::pow(w2, p2) : 0.0)) / p2;
    return {a0, a1};
}
} // namespace

std::vector<double> apply_K_inverse_marchaud(HurstParam H, const TimeGrid& grid,
                                             std::span<const double> g) {
    int n = grid.n_steps;
    if ((int)g.size() != n + 1) throw std::invalid_argument("apply_K_inverse_marchaud: expects scalar point samples");
    double h = H.value, dt = grid.dt;
    double b = 0.5 + h;
    double norm = 1.0 / (special::gamma_fn(1.5 - h) * kappa(H));

    // derivative at cell midpoints (exact for the piecewise-linear reading of g)
    std::vector<double> gp(n), phi(n), tau(n);
    for (int k = 0; k < n; ++k) {
        gp[k] = (g[k + 1] - g[k]) / dt;
        if (!std::isfinite(gp[k])) throw std::invalid_argument("apply_K_inverse_marchaud: non-finite derivative");
        tau[k] = grid.cell_mid(k);
        phi[k] = std::pow(tau[k], 0.5 - h) * gp[k];
    }

    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        double t = tau[i];
        // Q = int_0^t (phi(t) - phi(u)) (t-u)^{-1/2-H} du with phi piecewise
        // linear through the midpoints, extended linearly onto [0, tau_0)
        double Q = 0.0;
        double m0 = n > 1 ? (phi[1] - phi[0]) / dt : 0.0;
        {   // left tail [0, min(tau_0, t)]
            double c = std::min(tau[0], t);
            double fa = phi[0] - m0 * tau[0];                  // extension value at u = 0
            SegInt si = seg_weights(t, t - c, b);
            // phi(u) = fa + m0*u;  phi(t)-phi(u) = (phi_i - fa - m0*t) + m0*(t-u)
            Q += (phi[i] - fa - m0 * t) * si.i0 + m0 * si.i1;
        }
        for (int k = 0; k < i; ++k) {   // segments [tau_k, min(tau_{k+1}, t)]
            double a = tau[k];
            double c = std::min(tau[k + 1], t);
            double slope = (phi[k + 1] - phi[k]) / dt;
            double w1 = t - a, w2 = t - c;
            SegInt si = seg_weights(w1, w2, b);
            // phi(t)-phi(u) = (phi_i - phi_k - slope*(t-a)) + slope*(t-u)
            Q += (phi[i] - phi[k] - slope * w1) * si.i0 + slope * si.i1;
        }
        out[i] = norm * (std::pow(t, 0.5 - h) * gp[i] + (h - 0.5) * std::pow(t, h - 0.5) * Q);
    }
    return out;
}

CMElement make_cm_element(const DiscreteKernel& kernel, std::vector<double> h_values, int dim) {
    CMElement e;
    e.grid = kernel.grid;
    e.dim = dim;
    e.kh_values = apply_K(kernel, h_values, dim);
    e.h_values = std::move(h_values);
    return e;
}

double inner_product(const TimeGrid& grid, std::span<const double> h,
                     std::span<const double> g, int dim) {
    if (h.size() != g.size() || (int)h.size() != grid.n_steps * dim)
        throw std::invalid_argument("inner_product: shape mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) acc += h[k] * g[k];
    return acc * grid.dt;
}

} // namespace fou
