#pragma once
#include "fou/girsanov.hpp"
#include "fou/malliavin.hpp"
#include "fou/simulate.hpp"

#include <span>
#include <string>
#include <vector>

namespace fou {

// Two interchangeable realizations of the singular correction machinery:
// the regularized closed-form route and the grid adjoint of the composed
// linear maps (unconditionally finite; the reference).
enum class PRoute { regularized, matrix };

// Regularized P applied to a per-cell profile g (scalar):
// P_t = (1/(kappa*Gamma(3/2-H))) [ g_t (1-t)^{1/2-H}
//        - (H-1/2) t^{1/2-H} int_t^1 (u^{H-1/2} g_u - t^{H-1/2} g_t)/(u-t)^{1/2+H} du ],
// the only finite combination of the printed A_t and the tail integral.
std::vector<double> p_term(const DiscreteKernel& kernel, std::span<const double> g);

// Grid adjoint route: P = Cum^T K^{-T} g.
std::vector<double> p_term_matrix(const DiscreteKernel& kernel, std::span<const double> g);

// Finite coefficient of g_t surviving the regularization of A_t (the printed
// A_t alone diverges for H > 1/2).
std::vector<double> a_term_regularized(const DiscreteKernel& kernel);

// delta_k = alpha^2 e^{-at} int_0^t e^{au}(Kj)_u du - alpha (Kj)_t realized as
// the exact discrete relation delta = -alpha * z(t_k), (I + alpha L) z = Kj.
std::vector<double> delta_from_j(const DiscreteKernel& kernel, std::span<const double> j,
                                 double alpha, int dim = 1);

// h_t = (K^-1(-alpha e^{-a.} int_0^. e^{au}(Kj)_u du + (Kj)_.))_t, computed as
// the exact inverse of the h -> j composition.
std::vector<double> map_j_to_h(const DiscreteKernel& kernel, std::span<const double> j,
                               double alpha, int dim = 1);

// Correction integral of the martingale integrand:
// corr_t = int_t^1 K(s,t) (int_s^1 a^2 e^{-au} e^{as} P_u du - a P_s) ds.
// Exponential-sum form and exact-adjoint form.
std::vector<double> eta_correction_exp(const DiscreteKernel& kernel, std::span<const double> P,
                                       double alpha);
std::vector<double> eta_correction_matrix(const DiscreteKernel& kernel, std::span<const double> P,
                                          double alpha);

// <P, delta(j)> computed directly, and through the reordered double sum
// <K^T (I+aL)^{-T} S^T P, j>; the pair behind the adjoint-consistency check.
double pairing_p_delta_direct(const DiscreteKernel& kernel, std::span<const double> P,
                              std::span<const double> j, double alpha);
double pairing_p_delta_reordered(const DiscreteKernel& kernel, std::span<const double> P,
                                 std::span<const double> j, double alpha);

// Per-gradient-slot profiles psi_i = kappa_i + corr(P(kappa_i)) so that the
// per-path inner quantity is Y_t = sum_i grad_i * psi_i(t).
struct EtaBasis {
    std::vector<int> time_index;                 // grid index of each slot
    std::vector<std::vector<double>> psi;        // one profile per slot, n cells
};

EtaBasis eta_basis(const CylindricalFunctional& F, const DiscreteKernel& kernel, double alpha,
                   PRoute route);

enum class Estimator { exact, regression };

struct EstimatorConfig {
    Estimator kind = Estimator::exact;
    int basis_degree = 3;
    PRoute route = PRoute::regularized;
};

// Per-path adapted integrand eta (n_paths x n_cells, row-major), estimated
// from the batch per the configured conditional-expectation strategy.
// Conditioning is on the natural filtration of the coordinate process X; on
// the grid this generates the same information as the driving increments,
// since the kernel matrix and the Euler recursion are invertible triangular
// maps between them.
std::vector<double> eta_integrand(const CylindricalFunctional& F, const ModelParams& params,
                                  const DiscreteKernel& kernel,
                                  const std::vector<PathBundle>& batch,
                                  const EstimatorConfig& config);

// Pathwise delta/A/P/eta snapshot for one realization: delta from the test
// direction j, the regularized A coefficient, P applied to K^-1 DF, and the
// per-path inner quantity of the martingale integrand before conditioning.
struct CorrectionTerms {
    std::vector<double> delta;
    std::vector<double> A;
    std::vector<double> P;
    std::vector<double> eta;
};

CorrectionTerms correction_terms(const CylindricalFunctional& F, const VecPath& path,
                                 const DiscreteKernel& kernel, double alpha,
                                 std::span<const double> j);

struct RepresentationReport {
    double e_f = 0.0;
    double residual_var_ratio = 0.0;
    double var_f = 0.0;
    int n_paths = 0;
    std::string estimator;
};

RepresentationReport representation_check(const CylindricalFunctional& F,
                                          const ModelParams& params, const DiscreteKernel& kernel,
                                          int n_paths, const RngSpec& rng,
                                          const EstimatorConfig& config,
                                          Exec exec = Exec::parallel);

} // namespace fou
