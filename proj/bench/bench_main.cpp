// Timing comparison between the serial reference path and the OpenMP path
// for the two hot kernels: matrix construction and batch simulation.
#include "fou/kernel.hpp"
#include "fou/simulate.hpp"

#include <chrono>
#include <cstdio>

using namespace fou;

namespace {

template <typename F>
double time_ms(F&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 512;
    int paths = argc > 2 ? std::atoi(argv[2]) : 2000;
    HurstParam H(0.75);
    TimeGrid grid = make_grid(n);

    std::printf("%-28s %10s %10s %8s\n", "kernel", "serial ms", "openmp ms", "speedup");

    double ts = 0, tp = 0;
    DiscreteKernel k{H, grid, {}};
    ts = time_ms([&] { k = kernel_matrix(H, grid, Exec::serial); });
    tp = time_ms([&] { k = kernel_matrix(H, grid, Exec::parallel); });
    std::printf("%-28s %10.1f %10.1f %8.2f\n", "kernel_matrix", ts, tp, ts / tp);

    ModelParams params(H, 1.0, 1);
    std::vector<double> slot(paths);
    auto run_batch = [&](Exec e) {
        for_each_bundle(params, k, paths, RngSpec{7, 0}, e,
                        [&](int p, const PathBundle& b) { slot[p] = b.fou.at(n, 0); });
        double acc = 0.0;
        for (double v : slot) acc += v;
        return acc;
    };
    volatile double sink;
    ts = time_ms([&] { sink = run_batch(Exec::serial); });
    tp = time_ms([&] { sink = run_batch(Exec::parallel); });
    (void)sink;
    std::printf("%-28s %10.1f %10.1f %8.2f\n", "simulate batch", ts, tp, ts / tp);
    return 0;
}
