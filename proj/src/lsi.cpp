#include "fou/lsi.hpp"
#include "fou/special.hpp"
#include "fou/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace fou {

LSIConstants lsi_constants(HurstParam H, double alpha, const KernelConstants& kc) {
    double h = H.value;
    double G = special::gamma_fn(1.5 - h);
    double g2 = G * G;
    double w = 2.0 - 2.0 * h;
    double hm = h - 0.5;

    LSIConstants c;
    c.H = h;
    c.alpha = alpha;
    c.C1 = kc.C1;
    c.C2 = kc.C2;
    c.c_H = kc.c_H;
    c.C = (1.0 + 4.0 + kc.C2 * kc.C2 * hm * hm) / (g2 * w);
    double B = special::beta_fn(hm, 1.5 - h);
    c.C_hat = kc.C1 * kc.C1 * (5.0 + kc.C2 * kc.C2 * hm * hm) / (g2 * w)
              + 2.0 * kc.c_H * kc.c_H * (B * B + 1.0 / (hm * hm)) / g2;
    c.lsi_factor = 4.0 * (1.0
                          + 4.0 * std::pow(alpha, 4) * std::exp(2.0 * alpha) * kc.C1 * kc.C1
                                * (1.0 + alpha * alpha) * c.C / w
                          + 2.0 * alpha * alpha * c.C_hat / w);
    return c;
}

EntropyStats entropy_plugin(std::span<const double> G) {
    if (G.empty()) throw std::invalid_argument("entropy_plugin: empty sample");
    auto xlnx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };

    stats::MeanVar ma, mb;
    bool constant = true;
    for (double g : G) {
        if (g < 0.0) throw std::invalid_argument("entropy_plugin: negative value");
        ma.add(xlnx(g));
        mb.add(g);
        if (g != G[0]) constant = false;
    }
    EntropyStats out;
    if (constant) {
        out.degenerate = true;
        out.entropy = 0.0;
        out.se = 0.0;
        return out;
    }
    double mg = mb.mean();
    out.entropy = ma.mean() - xlnx(mg);

    // delta method on (A, B) = (mean G lnG, mean G): d/dA = 1, d/dB = -(ln B + 1)
    std::vector<double> colA(G.size()), colB(G.begin(), G.end());
    for (std::size_t i = 0; i < G.size(); ++i) colA[i] = xlnx(G[i]);
    std::vector<double> cov = stats::covariance_matrix({colA, colB});
    double grad[2] = {1.0, -(std::log(mg) + 1.0)};
    out.se = std::sqrt(stats::delta_method_var({grad, 2}, cov, (long long)G.size()));
    return out;
}

EntropyStats entropy_mc(const CylindricalFunctional& F, const ModelParams& params,
                        const DiscreteKernel& kernel, int n_paths, const RngSpec& rng, Exec exec) {
    std::vector<double> G(n_paths);
    for_each_bundle(params, kernel, n_paths, rng, exec, [&](int p, const PathBundle& b) {
        double f = eval_functional(F, b.fou);
        G[p] = f * f;
    });
    return entropy_plugin(G);
}

EntropyReport lsi_check(const CylindricalFunctional& F, const ModelParams& params,
                        const DiscreteKernel& kernel, const KernelConstants& kc, int n_paths,
                        const RngSpec& rng, Exec exec) {
    if (params.dim != 1) throw std::invalid_argument("lsi_check: dim 1 suite");
    double dt = kernel.grid.dt;
    LSIConstants lc = lsi_constants(kernel.H, params.alpha, kc);

    // Gram matrix of the kernel rows at F.times: int |K^-1 DF|^2 dt is the
    // quadratic form of the gradient coefficients.
    std::vector<int> idx = time_indices(F, kernel.grid);
    int m = (int)idx.size();
    std::vector<double> gram((std::size_t)m * m, 0.0);
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
            double acc = 0.0;
            int jmax = std::min(idx[a], idx[b]);
            for (int j = 0; j < jmax; ++j) acc += kernel.at(idx[a] - 1, j) * kernel.at(idx[b] - 1, j);
            gram[(std::size_t)a * m + b] = gram[(std::size_t)b * m + a] = acc * dt;
        }

    std::vector<double> G(n_paths), Q(n_paths);
    for_each_bundle(params, kernel, n_paths, rng, exec, [&](int p, const PathBundle& bun) {
        double f = eval_functional(F, bun.fou);
        G[p] = f * f;
        std::vector<double> c = F.grad(gather_at_times(F, bun.fou));
        double q = 0.0;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) q += c[a] * gram[(std::size_t)a * m + b] * c[b];
        Q[p] = q;
    });

    auto xlnx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
    std::vector<double> colA(n_paths);
    for (int p = 0; p < n_paths; ++p) colA[p] = xlnx(G[p]);

    double mq = stats::mean(Q), mg = stats::mean(G), maln = stats::mean(colA);
    EntropyReport rep;
    rep.n_paths = n_paths;
    rep.grad_norm_sq = mq;
    rep.entropy = maln - xlnx(mg);
    rep.rhs = lc.lsi_factor * mq;
    rep.margin = rep.rhs - rep.entropy;

    // margin = f*mean(Q) - mean(A) + mean(G) ln mean(G):
    // grad = (lsi_factor, -1, ln mg + 1)
    std::vector<double> cov = stats::covariance_matrix({Q, colA, G});
    double grad[3] = {lc.lsi_factor, -1.0, std::log(mg) + 1.0};
    rep.se = std::sqrt(stats::delta_method_var({grad, 3}, cov, n_paths));
    return rep;
}

} // namespace fou
