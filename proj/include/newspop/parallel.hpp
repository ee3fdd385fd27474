#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace newspop {

// Worker count used by the parallel kernels and the backtest fold loop.
// 0 means "whatever OpenMP would use by default".
void set_worker_threads(int n);
int worker_threads();

inline int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Static-schedule parallel loop over [0, n). Each index is processed by
// exactly one thread, so per-index outputs are identical to a serial run.
template <typename Fn>
void parallel_for(std::ptrdiff_t n, Fn&& fn) {
#ifdef _OPENMP
    const int nt = worker_threads();
    if (nt != 1 && n > 1) {
#pragma omp parallel for schedule(static) num_threads(nt > 0 ? nt : omp_get_max_threads())
        for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
        return;
    }
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
}

// Dynamic-schedule variant for uneven work items (backtest folds). Outputs
// must be written to pre-sized disjoint slots to stay deterministic.
template <typename Fn>
void parallel_for_dynamic(std::ptrdiff_t n, Fn&& fn) {
#ifdef _OPENMP
    const int nt = worker_threads();
    if (nt != 1 && n > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt > 0 ? nt : omp_get_max_threads())
        for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
        return;
    }
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
}

}  // namespace newspop
