#include "fou/parallel.hpp"

namespace fou {

namespace {
int g_cap = 0;
}

int thread_cap() {
#ifdef _OPENMP
    return g_cap > 0 ? g_cap : omp_get_max_threads();
#else
    return 1;
#endif
}

void set_thread_cap(int k) { g_cap = k; }

} // namespace fou
