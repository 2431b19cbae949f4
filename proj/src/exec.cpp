#include "ctcr/exec.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ctcr {

static int env_thread_cap() {
    const char* v = std::getenv("CTCR_THREADS");
    if (!v) return 0;
    try {
        int n = std::stoi(v);
        return n > 0 ? n : 0;
    } catch (...) {
        return 0;
    }
}

int worker_count() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
#else
    int n = 1;
#endif
    if (int cap = env_thread_cap(); cap > 0) n = std::min(n, cap);
    return std::max(1, n);
}

void apply_thread_cap() {
#ifdef _OPENMP
    if (int cap = env_thread_cap(); cap > 0)
        omp_set_num_threads(std::min(cap, omp_get_max_threads()));
#endif
}

} // namespace ctcr
