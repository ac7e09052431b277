#pragma once
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fou {

// Serial reference vs OpenMP execution. Parallel loops must write to disjoint
// slots only; reductions happen serially afterwards so results are
// bit-identical across policies and thread counts.
enum class Exec { serial, parallel };

int thread_cap();
void set_thread_cap(int k);   // k <= 0 restores the hardware default

template <typename F>
void par_for(Exec exec, std::int64_t count, F&& body) {
#ifdef _OPENMP
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static) num_threads(thread_cap())
        for (std::int64_t i = 0; i < count; ++i) body(i);
        return;
    }
#endif
    for (std::int64_t i = 0; i < count; ++i) body(i);
}

} // namespace fou
