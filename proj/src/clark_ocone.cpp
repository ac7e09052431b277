#include "fou/clark_ocone.hpp"
#include "fou/special.hpp"
#include "fou/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace fou {

namespace {

// int (c0 + m (u-t)) (u-t)^{-b} du over [a, c] with 0 <= wa = a-t <= wc = c-t.
// First-segment calls have wa = 0 together with c0 = 0.
inline double tail_seg(double wa, double wc, double b, double c0, double m) {
    double p1 = 1.0 - b, p2 = 2.0 - b;
    double i0 = (std::pow(wc, p1) - (wa > 0.0 ? std::pow(wa, p1) : 0.0)) / p1;
    double i1 = (std::pow(wc, p2) - (wa > 0.0 ? std::pow(wa, p2) : 0.0)) / p2;
    return c0 * i0 + m * i1;
}

} // namespace

std::vector<double> p_term(const DiscreteKernel& kernel, std::span<const double> g) {
    int n = kernel.n();
    if ((int)g.size() != n) throw std::invalid_argument("p_term: expects one value per cell");
    double H = kernel.H.value, dt = kernel.grid.dt;
    double b = 0.5 + H;
    double norm = 1.0 / (special::gamma_fn(1.5 - H) * kappa(kernel.H));

    std::vector<double> tau(n), phi(n);
    for (int k = 0; k < n; ++k) {
        tau[k] = kernel.grid.cell_mid(k);
        phi[k] = std::pow(tau[k], H - 0.5) * g[k];
    }

    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        double t = tau[i];
        double Q = 0.0;
        for (int k = i; k < n; ++k) {
            double a = tau[k];
            double c = k < n - 1 ? tau[k + 1] : 1.0;
            double slope = k < n - 1 ? (phi[k + 1] - phi[k]) / dt
                                     : (n > 1 ? (phi[n - 1] - phi[n - 2]) / dt : 0.0);
            // phi(u) - phi(t) = (phi_k - phi_i - slope (a - t)) + slope (u - t)
            double c0 = k == i ? 0.0 : phi[k] - phi[i] - slope * (a - t);
            Q += tail_seg(a - t, c - t, b, c0, slope);
        }
        double boundary = g[i] * std::pow(1.0 - t, 0.5 - H);
        out[i] = norm * (boundary - (H - 0.5) * std::pow(t, 0.5 - H) * Q);
        if (!std::isfinite(out[i]))
            throw std::runtime_error("p_term: regularization failure at cell " + std::to_string(i));
    }
    return out;
}

std::vector<double> p_term_matrix(const DiscreteKernel& kernel, std::span<const double> g) {
    int n = kernel.n();
    if ((int)g.size() != n) throw std::invalid_argument("p_term_matrix: expects one value per cell");
    double dt = kernel.grid.dt;
    // y = K^{-T} g: back substitution on the transposed triangular factor
    std::vector<double> y(n);
    for (int i = n - 1; i >= 0; --i) {
        double acc = g[i];
        for (int r = i + 1; r < n; ++r) acc -= kernel.at(r, i) * dt * y[r];
        double diag = kernel.at(i, i) * dt;
        if (!(diag > 0.0)) throw std::runtime_error("p_term_matrix: singular kernel diagonal");
        y[i] = acc / diag;
    }
    // P = Cum^T y: dt-weighted suffix sums
    std::vector<double> P(n);
    double run = 0.0;
    for (int k = n - 1; k >= 0; --k) {
        run += y[k];
        P[k] = dt * run;
    }
    return P;
}

std::vector<double> a_term_regularized(const DiscreteKernel& kernel) {
    int n = kernel.n();
    double H = kernel.H.value;
    double norm = 1.0 / (special::gamma_fn(1.5 - H) * kappa(kernel.H));
    std::vector<double> A(n);
    for (int k = 0; k < n; ++k) A[k] = norm * std::pow(1.0 - kernel.grid.cell_mid(k), 0.5 - H);
    return A;
}

std::vector<double> delta_from_j(const DiscreteKernel& kernel, std::span<const double> j,
                                 double alpha, int dim) {
    int n = kernel.n();
    double dt = kernel.grid.dt;
    std::vector<double> kj = apply_K(kernel, j, dim);
    // (I + alpha L) z = Kj, point-indexed; then delta_k = -alpha z(t_k)
    std::vector<double> z((std::size_t)(n + 1) * dim, 0.0);
    std::vector<double> run(dim, 0.0);
    for (int m = 1; m <= n; ++m)
        for (int d = 0; d < dim; ++d) {
            z[(std::size_t)m * dim + d] = kj[(std::size_t)m * dim + d] - alpha * run[d];
            run[d] += z[(std::size_t)m * dim + d] * dt;
        }
    std::vector<double> delta((std::size_t)n * dim, 0.0);
    for (int k = 1; k < n; ++k)
        for (int d = 0; d < dim; ++d)
            delta[(std::size_t)k * dim + d] = -alpha * z[(std::size_t)k * dim + d];
    return delta;
}

std::vector<double> map_j_to_h(const DiscreteKernel& kernel, std::span<const double> j,
                               double alpha, int dim) {
    int n = kernel.n();
    double dt = kernel.grid.dt;
    std::vector<double> kj = apply_K(kernel, j, dim);
    std::vector<double> z((std::size_t)(n + 1) * dim, 0.0);
    std::vector<double> run(dim, 0.0);
    for (int m = 1; m <= n; ++m)
        for (int d = 0; d < dim; ++d) {
            z[(std::size_t)m * dim + d] = kj[(std::size_t)m * dim + d] - alpha * run[d];
            run[d] += z[(std::size_t)m * dim + d] * dt;
        }
    return apply_K_inverse_matrix(kernel, z, dim);
}

std::vector<double> eta_correction_exp(const DiscreteKernel& kernel, std::span<const double> P,
                                       double alpha) {
    int n = kernel.n();
    if ((int)P.size() != n) throw std::invalid_argument("eta_correction_exp: shape mismatch");
    double dt = kernel.grid.dt;
    // T_m = int_{tau_m}^1 e^{-au} P_u du (midpoint sums), W = a^2 e^{at} T - a P
    std::vector<double> W(n);
    double run = 0.0;
    for (int m = n - 1; m >= 0; --m) {
        double tau = kernel.grid.cell_mid(m);
        run += std::exp(-alpha * tau) * P[m] * dt;
        W[m] = alpha * alpha * std::exp(alpha * tau) * run - alpha * P[m];
    }
    std::vector<double> corr(n, 0.0);
    for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int m = k; m < n; ++m) acc += kernel.at(m, k) * W[m];
        corr[k] = acc * dt;
    }
    return corr;
}

std::vector<double> eta_correction_matrix(const DiscreteKernel& kernel, std::span<const double> P,
                                          double alpha) {
    int n = kernel.n();
    if ((int)P.size() != n) throw std::invalid_argument("eta_correction_matrix: shape mismatch");
    double dt = kernel.grid.dt;
    // v = S^T P on points t_1..t_n ; solve (I + alpha L)^T w = v backward
    std::vector<double> w(n, 0.0);
    double run = 0.0;
    for (int m = n - 1; m >= 0; --m) {
        double v = m + 1 <= n - 1 ? P[m + 1] : 0.0;
        w[m] = v - alpha * run;
        run += w[m] * dt;
    }
    // corr = -alpha K^T w
    std::vector<double> corr(n, 0.0);
    for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int m = k; m < n; ++m) acc += kernel.at(m, k) * w[m];
        corr[k] = -alpha * acc * dt;
    }
    return corr;
}

double pairing_p_delta_direct(const DiscreteKernel& kernel, std::span<const double> P,
                              std::span<const double> j, double alpha) {
    std::vector<double> delta = delta_from_j(kernel, j, alpha, 1);
    return inner_product(kernel.grid, P, delta, 1);
}

double pairing_p_delta_reordered(const DiscreteKernel& kernel, std::span<const double> P,
                                 std::span<const double> j, double alpha) {
    std::vector<double> corr = eta_correction_matrix(kernel, P, alpha);
    return inner_product(kernel.grid, corr, j, 1);
}

CorrectionTerms correction_terms(const CylindricalFunctional& F, const VecPath& path,
                                 const DiscreteKernel& kernel, double alpha,
                                 std::span<const double> j) {
    CorrectionTerms out;
    out.delta = delta_from_j(kernel, j, alpha, 1);
    out.A = a_term_regularized(kernel);
    std::vector<double> g = k_inv_gradient(F, path, kernel);
    out.P = p_term(kernel, g);
    std::vector<double> corr = eta_correction_exp(kernel, out.P, alpha);
    out.eta.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out.eta[i] = g[i] + corr[i];
    return out;
}

EtaBasis eta_basis(const CylindricalFunctional& F, const DiscreteKernel& kernel, double alpha,
                   PRoute route) {
    int n = kernel.n();
    EtaBasis basis;
    basis.time_index = time_indices(F, kernel.grid);
    for (int r : basis.time_index) {
        std::vector<double> row(n, 0.0);
        for (int j = 0; j < r; ++j) row[j] = kernel.at(r - 1, j);
        std::vector<double> psi = row;
        if (alpha != 0.0) {
            std::vector<double> P = route == PRoute::regularized ? p_term(kernel, row)
                                                                 : p_term_matrix(kernel, row);
            std::vector<double> corr = route == PRoute::regularized
                                           ? eta_correction_exp(kernel, P, alpha)
                                           : eta_correction_matrix(kernel, P, alpha);
            for (int k = 0; k < n; ++k) psi[k] += corr[k];
        }
        basis.psi.push_back(std::move(psi));
    }
    return basis;
}

namespace {

// Least-squares projection of y onto polynomial features of x, returning the
// fitted values. Normal equations with Cholesky; degree is small.
void regress_fitted(std::span<const double> x, std::span<const double> y, int degree,
                    std::span<double> fitted) {
    int k = degree + 1;
    std::size_t npts = x.size();
    // degenerate slice (t_0: the state is identically zero): project onto the
    // constant, which is the conditional expectation under a trivial sigma-field
    double xm = 0.0, xv = 0.0;
    for (double v : x) xm += v;
    xm /= (double)npts;
    for (double v : x) xv += (v - xm) * (v - xm);
    if (xv <= 1e-24 * (double)npts * (1.0 + xm * xm)) {
        double ym = 0.0;
        for (double v : y) ym += v;
        ym /= (double)npts;
        for (std::size_t p = 0; p < npts; ++p) fitted[p] = ym;
        return;
    }
    std::vector<double> ata((std::size_t)k * k, 0.0), aty(k, 0.0), feat(k);
    for (std::size_t p = 0; p < npts; ++p) {
        feat[0] = 1.0;
        for (int d = 1; d < k; ++d) feat[d] = feat[d - 1] * x[p];
        for (int a = 0; a < k; ++a) {
            aty[a] += feat[a] * y[p];
            for (int b = a; b < k; ++b) ata[(std::size_t)a * k + b] += feat[a] * feat[b];
        }
    }
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < a; ++b) ata[(std::size_t)a * k + b] = ata[(std::size_t)b * k + a];
    // Cholesky
    std::vector<double> L((std::size_t)k * k, 0.0);
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b <= a; ++b) {
            double s = ata[(std::size_t)a * k + b];
            for (int c = 0; c < b; ++c) s -= L[(std::size_t)a * k + c] * L[(std::size_t)b * k + c];
            if (a == b) {
                if (s <= 0.0)
                    throw std::runtime_error(
                        "eta_integrand: regression matrix singular; enlarge the batch or reduce "
                        "--basis-degree");
                L[(std::size_t)a * k + a] = std::sqrt(s);
            } else {
                L[(std::size_t)a * k + b] = s / L[(std::size_t)b * k + b];
            }
        }
    }
    std::vector<double> c(k);
    for (int a = 0; a < k; ++a) {
        double s = aty[a];
        for (int b = 0; b < a; ++b) s -= L[(std::size_t)a * k + b] * c[b];
        c[a] = s / L[(std::size_t)a * k + a];
    }
    for (int a = k - 1; a >= 0; --a) {
        double s = c[a];
        for (int b = a + 1; b < k; ++b) s -= L[(std::size_t)b * k + a] * c[b];
        c[a] = s / L[(std::size_t)a * k + a];
    }
    for (std::size_t p = 0; p < npts; ++p) {
        double xp = 1.0, acc = c[0];
        for (int d = 1; d < k; ++d) {
            xp *= x[p];
            acc += c[d] * xp;
        }
        fitted[p] = acc;
    }
}

} // namespace

std::vector<double> eta_integrand(const CylindricalFunctional& F, const ModelParams& params,
                                  const DiscreteKernel& kernel,
                                  const std::vector<PathBundle>& batch,
                                  const EstimatorConfig& config) {
    if (params.dim != 1)
        throw std::invalid_argument("eta_integrand: the state-polynomial estimator is scalar (dim 1)");
    int n = kernel.n();
    int npaths = (int)batch.size();
    if (npaths == 0) throw std::invalid_argument("eta_integrand: empty batch");

    EtaBasis basis = eta_basis(F, kernel, params.alpha, config.route);
    int m = (int)basis.psi.size();

    // Y[p][k] = sum_i grad_i(path p) psi_i[k]
    std::vector<double> Y((std::size_t)npaths * n, 0.0);
    for (int p = 0; p < npaths; ++p) {
        std::vector<double> g = F.grad(gather_at_times(F, batch[p].fou));
        for (int i = 0; i < m; ++i) {
            const std::vector<double>& psi = basis.psi[i];
            double gi = g[i];
            double* yrow = Y.data() + (std::size_t)p * n;
            for (int k = 0; k < n; ++k) yrow[k] += gi * psi[k];
        }
    }

    if (config.kind == Estimator::exact) {
        if (!F.constant_gradient)
            throw std::invalid_argument(
                "eta_integrand: exact estimator requires a path-independent integrand (linear F); "
                "use the regression estimator");
        return Y;   // Y_t deterministic => E[Y_t | F_t] = Y_t
    }

    // regression: project Y[:,k] on polynomial features of X_{t_k}
    std::vector<double> eta((std::size_t)npaths * n, 0.0);
    std::vector<double> xk(npaths), yk(npaths), fit(npaths);
    for (int k = 0; k < n; ++k) {
        for (int p = 0; p < npaths; ++p) {
            xk[p] = batch[p].fou.at(k, 0);
            yk[p] = Y[(std::size_t)p * n + k];
        }
        regress_fitted(xk, yk, config.basis_degree, fit);
        for (int p = 0; p < npaths; ++p) eta[(std::size_t)p * n + k] = fit[p];
    }
    return eta;
}

RepresentationReport representation_check(const CylindricalFunctional& F,
                                          const ModelParams& params, const DiscreteKernel& kernel,
                                          int n_paths, const RngSpec& rng,
                                          const EstimatorConfig& config, Exec exec) {
    if (params.dim != 1)
        throw std::invalid_argument("representation_check: estimator is scalar (dim 1)");
    int n = kernel.n();
    EtaBasis basis = eta_basis(F, kernel, params.alpha, config.route);
    int m = (int)basis.psi.size();

    // streamed per-path state: F value, Ito accumulators need eta which may
    // need the cross-sectional regression; keep X (left points), dB, grads.
    std::vector<double> Fv(n_paths);
    std::vector<double> X((std::size_t)n_paths * n);
    std::vector<double> dB((std::size_t)n_paths * n);
    std::vector<double> grads((std::size_t)n_paths * m);

    for_each_bundle(params, kernel, n_paths, rng, exec, [&](int p, const PathBundle& bun) {
        Fv[p] = eval_functional(F, bun.fou);
        std::vector<double> g = F.grad(gather_at_times(F, bun.fou));
        for (int i = 0; i < m; ++i) grads[(std::size_t)p * m + i] = g[i];
        for (int k = 0; k < n; ++k) {
            X[(std::size_t)p * n + k] = bun.fou.at(k, 0);
            dB[(std::size_t)p * n + k] = bun.increments[k];
        }
    });

    double varF = stats::variance(Fv);
    if (varF <= 0.0)
        throw std::invalid_argument("representation_check: Var(F) = 0 (degenerate functional)");
    double ef = stats::mean(Fv);

    std::vector<double> ito(n_paths, 0.0);
    if (config.kind == Estimator::exact) {
        if (!F.constant_gradient)
            throw std::invalid_argument("representation_check: exact estimator needs linear F");
        std::vector<double> eta(n, 0.0);
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < n; ++k) eta[k] += grads[i] * basis.psi[i][k];
        for (int p = 0; p < n_paths; ++p) {
            double acc = 0.0;
            const double* db = dB.data() + (std::size_t)p * n;
            for (int k = 0; k < n; ++k) acc += eta[k] * db[k];
            ito[p] = acc;
        }
    } else {
        std::vector<double> xk(n_paths), yk(n_paths), fit(n_paths);
        for (int k = 0; k < n; ++k) {
            for (int p = 0; p < n_paths; ++p) {
                xk[p] = X[(std::size_t)p * n + k];
                double acc = 0.0;
                for (int i = 0; i < m; ++i) acc += grads[(std::size_t)p * m + i] * basis.psi[i][k];
                yk[p] = acc;
            }
            regress_fitted(xk, yk, config.basis_degree, fit);
            for (int p = 0; p < n_paths; ++p) ito[p] += fit[p] * dB[(std::size_t)p * n + k];
        }
    }

    std::vector<double> res(n_paths);
    for (int p = 0; p < n_paths; ++p) res[p] = Fv[p] - ef - ito[p];

    RepresentationReport rep;
    rep.e_f = ef;
    rep.var_f = varF;
    rep.residual_var_ratio = stats::variance(res) / varF;
    rep.n_paths = n_paths;
    rep.estimator = config.kind == Estimator::exact ? "exact" : "regression";
    return rep;
}

} // namespace fou
