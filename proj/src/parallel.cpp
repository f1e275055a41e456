#include "capt/parallel.hpp"

#include <atomic>

namespace capt::par {

namespace {
std::atomic<bool> g_enabled{true};
}

bool enabled() noexcept { return g_enabled.load(std::memory_order_relaxed); }
void set_enabled(bool on) noexcept { g_enabled.store(on, std::memory_order_relaxed); }

int thread_count() noexcept {
#ifdef _OPENMP
  return enabled() ? omp_get_max_threads() : 1;
#else
  return 1;
#endif
}

}  // namespace capt::par
