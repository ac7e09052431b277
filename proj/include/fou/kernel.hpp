#pragma once
#include "fou/grid.hpp"
#include "fou/parallel.hpp"
#include "fou/quadrature.hpp"

#include <vector>

namespace fou {

// Hurst parameter, strictly inside (1/2, 1).
struct HurstParam {
    double value;
    explicit HurstParam(double H);
};

// c_H = sqrt(H(2H-1)/B(2-2H, H-1/2)), the normalization that makes
// int_0^t K(t,s) dB_s a standard fBm.
double c_H(HurstParam H);

// c_H * Gamma(H-1/2): ratio between the fBm-normalized kernel and the
// fractional-integral composition I^1 t^{H-1/2} I^{H-1/2} t^{1/2-H}.  The
// analytic inverse and everything derived from it must divide by this.
double kappa(HurstParam H);

// K(t,s) = c_H s^{1/2-H} int_s^t u^{H-1/2}(u-s)^{H-3/2} du for s < t, else 0.
double eval_kernel(HurstParam H, double t, double s);

// Standard fBm covariance (test oracle): R_H(t,s) = (t^{2H}+s^{2H}-|t-s|^{2H})/2.
double fbm_covariance(HurstParam H, double t, double s);

// Lower-triangular discretization: row i discretizes K(t_{i+1}, .).
// Cells j in [1, i] hold the cell average (1/dt) int_{cell j} K(t_{i+1}, s) ds;
// cell 0 holds the cell L2 norm sqrt((1/dt) int_{cell 0} K^2 ds) so that
// covariance products are exact for the shared s^{1/2-H} profile there.
struct DiscreteKernel {
    HurstParam H;
    TimeGrid grid;
    std::vector<double> m;   // n x n row-major

    double at(int i, int j) const { return m[(std::size_t)i * grid.n_steps + j]; }
    int n() const { return grid.n_steps; }
};

DiscreteKernel kernel_matrix(HurstParam H, const TimeGrid& grid, Exec exec = Exec::parallel);

// Empirical constant in |K(t,s)| <= C1 s^{1/2-H}, fitted as the max of
// K(t,s) s^{H-1/2} over a (t, s/t) lattice of the given density.
double fit_C1(HurstParam H, int lattice_density);

// C2 in int_0^s (s^{1/2-H}-u^{1/2-H})/(s-u)^{1/2+H} du = C2 s^{1-2H}, computed
// by singularity-absorbing quadrature at s=1 after a self-similarity check at
// s in {0.25, 0.5, 1} (0.5% tolerance).
double compute_C2(HurstParam H);

struct KernelConstants {
    double c_H;
    double C1;
    double C2;
};

KernelConstants kernel_constants(HurstParam H, int lattice_density = 64);

// Shared quadrature tables for one H; used by the matrix builder and the
// singular integrals in other modules.
class KernelEval {
public:
    explicit KernelEval(HurstParam H, int inner_order = 24);

    // K(t,s) factors as c_H s^{1/2-H} (t-s)^{H-1/2} * jtilde(s,t) with jtilde
    // bounded on the diagonal; jtilde reduces to the tail integral of
    // x^{-2H}(1-x)^{H-3/2}.
    double jtilde(double s, double t) const;
    double tail_integral(double c, double one_minus_c) const;
    double operator()(double t, double s) const;
    HurstParam hurst() const { return H_; }

private:
    HurstParam H_;
    double ch_;
    quad::Rule inner_;   // weight (1-y)^{H-3/2} on [0,1]
    quad::Rule gl_;
    double i_half_ = 0.0;
};

} // namespace fou
