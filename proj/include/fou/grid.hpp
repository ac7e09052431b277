#pragma once
#include <cstdint>
#include <vector>

namespace fou {

// Uniform partition of [0,1]: points t_k = k/n_steps.
struct TimeGrid {
    int n_steps = 0;
    double dt = 0.0;
    std::vector<double> points;   // n_steps+1 values, points[0]=0, points[n_steps]=1

    double cell_mid(int j) const { return (j + 0.5) * dt; }
    bool same_as(const TimeGrid& o) const { return n_steps == o.n_steps; }
};

TimeGrid make_grid(int n_steps);

// Sample path on a grid, values[k*dim + d]; values at t_0 are exactly zero.
struct VecPath {
    TimeGrid grid;
    int dim = 1;
    std::vector<double> values;

    VecPath() = default;
    VecPath(const TimeGrid& g, int d)
        : grid(g), dim(d), values((std::size_t)(g.n_steps + 1) * d, 0.0) {}

    double at(int k, int d) const { return values[(std::size_t)k * dim + d]; }
    double& at(int k, int d) { return values[(std::size_t)k * dim + d]; }
};

// Deterministic-seeding contract: everything consuming an RngSpec is a pure
// function of (inputs, master_seed, stream_id).
struct RngSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

// n_steps x dim increments, each coordinate ~ N(0, dt).
std::vector<double> sample_bm_increments(const TimeGrid& grid, int dim, const RngSpec& rng);

} // namespace fou
