#include "fou/grid.hpp"
#include "fou/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace fou {

TimeGrid make_grid(int n_steps) {
    if (n_steps < 2) throw std::invalid_argument("make_grid: n_steps must be >= 2");
    TimeGrid g;
    g.n_steps = n_steps;
    g.dt = 1.0 / n_steps;
    g.points.resize(n_steps + 1);
    for (int k = 0; k <= n_steps; ++k) g.points[k] = (double)k / n_steps;
    g.points[n_steps] = 1.0;
    return g;
}

std::vector<double> sample_bm_increments(const TimeGrid& grid, int dim, const RngSpec& rng) {
    if (grid.n_steps < 2) throw std::invalid_argument("sample_bm_increments: invalid grid");
    if (dim < 1) throw std::invalid_argument("sample_bm_increments: dim must be >= 1");
    SplitMix64 gen = stream_rng(rng.master_seed, rng.stream_id);
    double sd = std::sqrt(grid.dt);
    std::vector<double> inc((std::size_t)grid.n_steps * dim);
    for (double& v : inc) v = sd * gen.next_gaussian();
    return inc;
}

} // namespace fou
