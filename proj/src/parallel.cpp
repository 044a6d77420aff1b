#include "rlaif/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rlaif::par {

namespace {
ExecMode g_mode = ExecMode::parallel;
}

ExecMode exec_mode() { return g_mode; }
void set_exec_mode(ExecMode mode) { g_mode = mode; }

bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

namespace detail {

void run_chunks(std::int64_t n_chunks, ExecMode mode, void* ctx, void (*body)(void*, std::int64_t)) {
#ifdef _OPENMP
    if (mode == ExecMode::parallel && n_chunks > 1) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t c = 0; c < n_chunks; ++c) {
            body(ctx, c);
        }
        return;
    }
#else
    (void)mode;
#endif
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        body(ctx, c);
    }
}

}  // namespace detail

}  // namespace rlaif::par
