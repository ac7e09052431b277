#pragma once
#include "fou/fracops.hpp"
#include "fou/malliavin.hpp"
#include "fou/parallel.hpp"
#include "fou/simulate.hpp"

#include <span>
#include <string>
#include <vector>

namespace fou {

// beta_t = (Kh)'_t + alpha (Kh)_t on cells: forward difference plus the
// left-point value, so that the cumulative sum telescopes back to
// Kh + alpha * leftsum(Kh) exactly.
struct PullbackDrift {
    std::vector<double> beta;        // n_steps x dim
    std::vector<double> source_h;    // the h it was built from
    double alpha = 0.0;
};

PullbackDrift pullback_drift(std::span<const double> h, double alpha,
                             const DiscreteKernel& kernel, int dim = 1);

// j_s = (K^-1 int_0^. beta_u du)_s via cumulative sum + triangular solve.
std::vector<double> j_integrand(const PullbackDrift& drift, const DiscreteKernel& kernel,
                                int dim = 1);

// rho_t = exp(-r * Ito(j) - r^2/2 * int |j|^2), left-point sums; rho[0] = 1.
struct GirsanovDensity {
    double r = 0.0;
    std::vector<double> rho;        // n_steps+1 values
    std::vector<double> integrand;  // the j it was built from
};

GirsanovDensity girsanov_density(std::span<const double> j, std::span<const double> increments,
                                 const TimeGrid& grid, int dim, double r);

// Direct measurement of the three correction pieces of j - h (dim 1): I1
// the prefactor term, I2 the power-difference integral, I3 the Marchaud
// difference of Kh. All carry the kappa-corrected normalization.
struct CorrectionDecomp {
    std::vector<double> I1, I2, I3;   // cell midpoint values
};

CorrectionDecomp decompose_correction(const DiscreteKernel& kernel, std::span<const double> h,
                                      double alpha);

// Right side of the L2 bound: 4||h||^2 (1 + b1^2 + b2^2) + 4 ||I3||^2 with the
// I1/I2 constant bounds and the I3 term measured directly.
double correction_l2_bound(const DiscreteKernel& kernel, std::span<const double> h, double alpha,
                           const KernelConstants& kc, const CorrectionDecomp& decomp);

// Paired Monte Carlo check of E[F * Ito(j)] = E[D_h F] on a shared batch.
struct IbpReport {
    double lhs = 0.0, rhs = 0.0;
    double se_lhs = 0.0, se_rhs = 0.0;
    double se_diff = 0.0;   // SE of the paired per-path difference
    double z_score = 0.0;   // mean difference over se_diff
    int n_paths = 0;
};

IbpReport ibp_check(const CylindricalFunctional& F, const std::string& direction,
                    const ModelParams& params, const DiscreteKernel& kernel, int n_paths,
                    const RngSpec& rng, Exec exec = Exec::parallel);

// E[rho_1] estimate at perturbation scale r for a direction label.
struct DensityReport {
    double mean = 0.0, se = 0.0, z_score = 0.0;
    int n_paths = 0;
};

DensityReport density_normalization(const std::string& direction, double r,
                                    const ModelParams& params, const DiscreteKernel& kernel,
                                    int n_paths, const RngSpec& rng, Exec exec = Exec::parallel);

} // namespace fou
