#include "fou/kernel.hpp"
#include "fou/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fou {

HurstParam::HurstParam(double H) : value(H) {
    if (!(H > 0.5) || !(H < 1.0))
        throw std::domain_error("HurstParam: H must lie strictly in (1/2, 1)");
}

double c_H(HurstParam H) {
    double h = H.value;
    return std::sqrt(h * (2.0 * h - 1.0) / special::beta_fn(2.0 - 2.0 * h, h - 0.5));
}

double kappa(HurstParam H) { return c_H(H) * special::gamma_fn(H.value - 0.5); }

double fbm_covariance(HurstParam H, double t, double s) {
    if (t < 0.0 || t > 1.0 || s < 0.0 || s > 1.0)
        throw std::domain_error("fbm_covariance: t,s must lie in [0,1]");
    double h2 = 2.0 * H.value;
    return 0.5 * (std::pow(t, h2) + std::pow(s, h2) - std::pow(std::fabs(t - s), h2));
}

KernelEval::KernelEval(HurstParam H, int inner_order)
    : H_(H),
      ch_(c_H(H)),
      inner_(quad::gauss_jacobi01(inner_order, H.value - 1.5, 0.0)),
      gl_(quad::gauss_legendre(inner_order)) {
    double h = H_.value;
    double acc = 0.0;
    for (int q = 0; q < inner_.size(); ++q)
        acc += inner_.w[q] * std::pow(0.5 + 0.5 * inner_.x[q], -2.0 * h);
    i_half_ = std::pow(0.5, h - 0.5) * acc;
}

// tail integral I(c) = int_c^1 x^{-2H}(1-x)^{H-3/2} dx. For c >= 1/2 the
// Jacobi weight absorbs the x=1 endpoint; below 1/2 a log substitution
// handles the steep x^{-2H} descent, any c down to the underflow floor.
double KernelEval::tail_integral(double c, double one_minus_c) const {
    double h = H_.value;
    if (c >= 0.5) {
        double acc = 0.0;
        for (int q = 0; q < inner_.size(); ++q)
            acc += inner_.w[q] * std::pow(c + one_minus_c * inner_.x[q], -2.0 * h);
        return std::pow(one_minus_c, h - 0.5) * acc;
    }
    double L = std::log(0.5 / c);
    double acc = 0.0;
    for (int q = 0; q < gl_.size(); ++q) {
        double v = 0.5 * (1.0 + gl_.x[q]);
        double x = c * std::exp(v * L);
        acc += 0.5 * gl_.w[q] * std::pow(x, 1.0 - 2.0 * h) * std::pow(1.0 - x, h - 1.5);
    }
    return L * acc + i_half_;
}

double KernelEval::jtilde(double s, double t) const {
    double h = H_.value;
    return std::pow(s, 2.0 * h - 1.0) * std::pow(t - s, 0.5 - h)
           * tail_integral(s / t, (t - s) / t);
}

double KernelEval::operator()(double t, double s) const {
    if (s >= t) return 0.0;
    if (s <= 0.0) throw std::domain_error("eval_kernel: requires s > 0 (prefactor diverges at 0)");
    double h = H_.value;
    return ch_ * std::pow(s, 0.5 - h) * std::pow(t - s, h - 0.5) * jtilde(s, t);
}

double eval_kernel(HurstParam H, double t, double s) {
    if (t <= 0.0 || t > 1.0) throw std::domain_error("eval_kernel: requires 0 < t <= 1");
    KernelEval k(H, 32);
    return k(t, s);
}

DiscreteKernel kernel_matrix(HurstParam H, const TimeGrid& grid, Exec exec) {
    if (grid.n_steps < 2) throw std::invalid_argument("kernel_matrix: invalid grid");
    int n = grid.n_steps;
    double dt = grid.dt;
    double h = H.value;

    KernelEval kev(H, 16);
    double ch = c_H(H);

    // reference [-1,1] rule for smooth interior cells
    quad::Rule gl = quad::gauss_legendre(4);
    // diagonal cells: weight (1-u)^{H-1/2} absorbs the (t-s)^{H-1/2} vanishing edge
    quad::Rule diag = quad::gauss_jacobi01(24, h - 0.5, 0.0);
    // first cell, average form would use (0, 1/2-H); the L2 form squares the profile
    quad::Rule cell0 = quad::gauss_jacobi01(24, 0.0, 1.0 - 2.0 * h);
    quad::Rule corner = quad::gauss_jacobi01(24, 2.0 * h - 1.0, 1.0 - 2.0 * h);

    DiscreteKernel K{H, grid, std::vector<double>((std::size_t)n * n, 0.0)};
    double* m = K.m.data();

    par_for(exec, n, [&](std::int64_t i) {
        double t = (double)(i + 1) * dt;
        double* row = m + (std::size_t)i * n;

        // interior cells: plain Gauss-Legendre on [t_j, t_{j+1}]
        for (int j = 1; j < (int)i; ++j) {
            double a = j * dt, mid = a + 0.5 * dt, half = 0.5 * dt;
            double acc = 0.0;
            for (int q = 0; q < gl.size(); ++q)
                acc += gl.w[q] * kev(t, mid + half * gl.x[q]);
            row[j] = 0.5 * acc;   // (1/dt) * (dt/2) * sum
        }

        if (i >= 1) {
            // diagonal cell [t_i, t_{i+1}]
            double acc = 0.0;
            for (int q = 0; q < diag.size(); ++q) {
                double s = (i + diag.x[q]) * dt;
                acc += diag.w[q] * std::pow(s, 0.5 - h) * kev.jtilde(s, t);
            }
            row[i] = ch * std::pow(dt, h - 0.5) * acc;

            // cell 0, L2-matched
            double acc2 = 0.0;
            for (int q = 0; q < cell0.size(); ++q) {
                double s = dt * cell0.x[q];
                double v = ch * std::pow(t - s, h - 0.5) * kev.jtilde(s, t);
                acc2 += cell0.w[q] * v * v;
            }
            row[0] = std::sqrt(std::pow(dt, 1.0 - 2.0 * h) * acc2);
        } else {
            // row 0: single cell carrying both endpoint singularities
            double acc = 0.0;
            for (int q = 0; q < corner.size(); ++q) {
                double s = dt * corner.x[q];
                double v = ch * kev.jtilde(s, t);
                acc += corner.w[q] * v * v;
            }
            row[0] = std::sqrt(acc);
        }
    });
    return K;
}

double fit_C1(HurstParam H, int lattice_density) {
    if (lattice_density < 4) throw std::invalid_argument("fit_C1: lattice density too small");
    KernelEval kev(H, 24);
    double h = H.value;
    int d = lattice_density;
    double best = 0.0;
    for (int k = 1; k <= d; ++k) {
        double t = (double)k / d;
        for (int l = 1; l <= d; ++l) {
            double x = (l - 0.5) / d;
            double s = t * x;
            best = std::max(best, kev(t, s) * std::pow(s, h - 0.5));
        }
        // refine toward s -> 0 where the bound is approached
        for (double x = 0.5 / d; x > 1e-7; x *= 0.5) {
            double s = t * x;
            best = std::max(best, kev(t, s) * std::pow(s, h - 0.5));
        }
    }
    return best;
}

namespace {

// int_0^s (s^{1/2-H} - u^{1/2-H}) (s-u)^{-1/2-H} du, both endpoint
// singularities absorbed by Jacobi weights.
double c2_integral(double h, double s, const quad::Rule& left, const quad::Rule& right) {
    double a = 0.5 - h;   // exponent of the power difference, negative
    double b = 0.5 + h;
    double mid = 0.5 * s;
    double sa = std::pow(s, a);

    // [0, s/2]:  s^a * int (s-u)^{-b} du  -  int u^a (s-u)^{-b} g du, g == 1
    double closed = sa * (std::pow(s - mid, 1.0 - b) - std::pow(s, 1.0 - b)) / (b - 1.0);
    double acc = 0.0;
    for (int q = 0; q < left.size(); ++q) {
        double u = mid * left.x[q];
        acc += left.w[q] * std::pow(s - u, -b);
    }
    double part1 = closed - std::pow(mid, 1.0 + a) * acc;

    // [s/2, s]: integrand = psi(u) (s-u)^{a} with psi = (s^a - u^a)/(s-u) smooth
    double acc2 = 0.0;
    for (int q = 0; q < right.size(); ++q) {
        double u = mid + mid * right.x[q];
        double num = -sa * std::expm1(a * std::log(u / s));   // s^a - u^a, cancellation-safe
        acc2 += right.w[q] * num / (s - u);
    }
    double part2 = std::pow(mid, 1.0 + a) * acc2;

    return part1 + part2;
}

} // namespace

double compute_C2(HurstParam H) {
    double h = H.value;
    quad::Rule left = quad::gauss_jacobi01(32, 0.0, 0.5 - h);
    quad::Rule right = quad::gauss_jacobi01(32, 0.5 - h, 0.0);

    double ref = c2_integral(h, 1.0, left, right);
    for (double s : {0.25, 0.5}) {
        double v = c2_integral(h, s, left, right) / std::pow(s, 1.0 - 2.0 * h);
        if (std::fabs(v / ref - 1.0) > 5e-3)
            throw std::runtime_error("compute_C2: self-similarity check failed");
    }
    if (!(ref < 0.0)) throw std::runtime_error("compute_C2: expected a negative constant");
    return ref;
}

KernelConstants kernel_constants(HurstParam H, int lattice_density) {
    return KernelConstants{c_H(H), fit_C1(H, lattice_density), compute_C2(H)};
}

} // namespace fou
