#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace capt::par {

/// Global switch between the OpenMP kernels and the serial reference path.
/// Every parallel loop in the toolkit writes only to per-index outputs, so
/// both paths produce bit-identical results; tests and the benchmark flip
/// this switch to compare them.
bool enabled() noexcept;
void set_enabled(bool on) noexcept;
int thread_count() noexcept;

/// RAII guard used by tests to force the serial reference path.
class serial_section {
 public:
  serial_section() : was_(enabled()) { set_enabled(false); }
  ~serial_section() { set_enabled(was_); }
  serial_section(const serial_section&) = delete;
  serial_section& operator=(const serial_section&) = delete;

 private:
  bool was_;
};

/// Static-schedule loop over [0, n).  body(i) must touch only state owned by
/// index i; reductions are done by the caller in fixed index order.
template <class F>
void for_each(std::int64_t n, F&& body) {
  if (!enabled() || n < 2) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) body(i);
#else
  for (std::int64_t i = 0; i < n; ++i) body(i);
#endif
}

}  // namespace capt::par
