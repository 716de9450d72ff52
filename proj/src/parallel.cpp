#include "lagrangeflow/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>

namespace lagrangeflow {

int worker_count() { return omp_get_max_threads(); }

void set_worker_count(int workers) { omp_set_num_threads(std::max(workers, 1)); }

void apply_thread_env() {
    const char* env = std::getenv("LAGRANGEFLOW_THREADS");
    if (env == nullptr) return;
    try {
        const int cap = std::stoi(env);
        if (cap > 0) set_worker_count(cap);
    } catch (const std::exception&) {
    }
}

}  // namespace lagrangeflow
