#include "stokeskit/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace stokeskit {

int apply_thread_cap_from_env() {
#ifdef _OPENMP
    if (const char* env = std::getenv("STOKESKIT_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace stokeskit
