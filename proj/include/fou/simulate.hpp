#pragma once
#include "fou/fracops.hpp"
#include "fou/grid.hpp"
#include "fou/kernel.hpp"
#include "fou/parallel.hpp"

#include <functional>
#include <vector>

namespace fou {

struct ModelParams {
    HurstParam H;
    double alpha = 1.0;    // mean reversion; alpha = 0 admitted (fOU collapses to fBm)
    int dim = 1;

    ModelParams(HurstParam H_, double alpha_, int dim_ = 1);
};

enum class FouScheme { euler, exact_exp };

// One driving noise, three coupled paths: B (cumulative increments),
// B^H = K(dB), X from dX = -alpha X dt + dB^H.
struct PathBundle {
    VecPath bm;
    VecPath fbm;
    VecPath fou;
    std::vector<double> increments;   // n_steps x dim
    RngSpec rng;
};

PathBundle simulate_bundle(const ModelParams& params, const DiscreteKernel& kernel,
                           const RngSpec& rng, FouScheme scheme = FouScheme::euler);

// Path i uses stream_id = base.stream_id + i.
std::vector<PathBundle> simulate_batch(const ModelParams& params, const DiscreteKernel& kernel,
                                       int n_paths, const RngSpec& base_rng,
                                       FouScheme scheme = FouScheme::euler);

// Streaming driver for large Monte Carlo: builds each bundle in a worker and
// hands it to fn(path_index, bundle). fn must only write to per-path slots.
void for_each_bundle(const ModelParams& params, const DiscreteKernel& kernel, int n_paths,
                     const RngSpec& base_rng, Exec exec,
                     const std::function<void(int, const PathBundle&)>& fn,
                     FouScheme scheme = FouScheme::euler);

} // namespace fou
