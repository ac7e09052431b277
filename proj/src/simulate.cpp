#include "fou/simulate.hpp"

#include <cmath>
#include <stdexcept>

namespace fou {

ModelParams::ModelParams(HurstParam H_, double alpha_, int dim_) : H(H_), alpha(alpha_), dim(dim_) {
    if (alpha < 0.0) throw std::invalid_argument("ModelParams: alpha must be >= 0");
    if (dim < 1) throw std::invalid_argument("ModelParams: dim must be >= 1");
}

PathBundle simulate_bundle(const ModelParams& params, const DiscreteKernel& kernel,
                           const RngSpec& rng, FouScheme scheme) {
    if (kernel.H.value != params.H.value)
        throw std::invalid_argument("simulate_bundle: kernel built for a different H");
    const TimeGrid& grid = kernel.grid;
    int n = grid.n_steps, dim = params.dim;
    double dt = grid.dt, alpha = params.alpha;

    PathBundle b{VecPath(grid, dim), VecPath(grid, dim), VecPath(grid, dim),
                 sample_bm_increments(grid, dim, rng), rng};

    for (int k = 0; k < n; ++k)
        for (int d = 0; d < dim; ++d)
            b.bm.at(k + 1, d) = b.bm.at(k, d) + b.increments[(std::size_t)k * dim + d];

    // B^H_{t_{i+1}} = sum_j M[i][j] dB_j  (== apply_K with h = dB/dt)
    for (int i = 0; i < n; ++i) {
        const double* row = kernel.m.data() + (std::size_t)i * n;
        for (int d = 0; d < dim; ++d) {
            double acc = 0.0;
            for (int j = 0; j <= i; ++j) acc += row[j] * b.increments[(std::size_t)j * dim + d];
            b.fbm.at(i + 1, d) = acc;
        }
    }

    if (scheme == FouScheme::euler) {
        for (int k = 0; k < n; ++k)
            for (int d = 0; d < dim; ++d)
                b.fou.at(k + 1, d) = b.fou.at(k, d) * (1.0 - alpha * dt)
                                     + (b.fbm.at(k + 1, d) - b.fbm.at(k, d));
    } else {
        // variation-of-constants cross-check: X_t = sum_{j<k} e^{-alpha(t_k - t_j)} dB^H_j
        double damp = std::exp(-alpha * dt);
        for (int k = 0; k < n; ++k)
            for (int d = 0; d < dim; ++d)
                b.fou.at(k + 1, d) = b.fou.at(k, d) * damp
                                     + (b.fbm.at(k + 1, d) - b.fbm.at(k, d));
    }
    return b;
}

std::vector<PathBundle> simulate_batch(const ModelParams& params, const DiscreteKernel& kernel,
                                       int n_paths, const RngSpec& base_rng, FouScheme scheme) {
    if (n_paths < 1) throw std::invalid_argument("simulate_batch: n_paths must be >= 1");
    std::vector<PathBundle> out(n_paths);
    for (int i = 0; i < n_paths; ++i)
        out[i] = simulate_bundle(params, kernel,
                                 RngSpec{base_rng.master_seed, base_rng.stream_id + (std::uint64_t)i},
                                 scheme);
    return out;
}

void for_each_bundle(const ModelParams& params, const DiscreteKernel& kernel, int n_paths,
                     const RngSpec& base_rng, Exec exec,
                     const std::function<void(int, const PathBundle&)>& fn, FouScheme scheme) {
    par_for(exec, n_paths, [&](std::int64_t i) {
        PathBundle b = simulate_bundle(params, kernel,
                                       RngSpec{base_rng.master_seed,
                                               base_rng.stream_id + (std::uint64_t)i},
                                       scheme);
        fn((int)i, b);
    });
}

} // namespace fou
