#pragma once
#include "fou/kernel.hpp"
#include "fou/malliavin.hpp"
#include "fou/parallel.hpp"
#include "fou/simulate.hpp"

#include <vector>

namespace fou {

// Explicit constants of the entropy bound. lsi_factor collapses to 4 at
// alpha = 0 and grows with every alpha term.
struct LSIConstants {
    double H = 0.0, alpha = 0.0;
    double C1 = 0.0, C2 = 0.0, c_H = 0.0;
    double C = 0.0;
    double C_hat = 0.0;
    double lsi_factor = 0.0;
};

LSIConstants lsi_constants(HurstParam H, double alpha, const KernelConstants& kc);

// Plug-in entropy of nonnegative data: mean(G ln G) - mean(G) ln mean(G),
// with x ln x extended by 0 at 0. SE by the delta method on the joint means.
struct EntropyStats {
    double entropy = 0.0;
    double se = 0.0;
    bool degenerate = false;   // all values identical
};

EntropyStats entropy_plugin(std::span<const double> G);

// Monte Carlo entropy of F^2 under the fOU measure.
EntropyStats entropy_mc(const CylindricalFunctional& F, const ModelParams& params,
                        const DiscreteKernel& kernel, int n_paths, const RngSpec& rng,
                        Exec exec = Exec::parallel);

// One inequality check: margin = lsi_factor * E int |K^-1 DF|^2 dt - Ent(F^2),
// with the margin's standard error from the joint delta method.
struct EntropyReport {
    double entropy = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double se = 0.0;          // SE of the margin
    double grad_norm_sq = 0.0; // E int |K^-1 DF|^2 dt
    int n_paths = 0;
};

EntropyReport lsi_check(const CylindricalFunctional& F, const ModelParams& params,
                        const DiscreteKernel& kernel, const KernelConstants& kc, int n_paths,
                        const RngSpec& rng, Exec exec = Exec::parallel);

} // namespace fou
