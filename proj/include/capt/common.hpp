#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace capt {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

/// Error categories surfaced by the toolkit.  The CLI maps these to process
/// exit codes (invalid input -> 2, decomposition failure -> 3, infeasible
/// window/resolution -> 4, everything else -> 2).
enum class errc {
  invalid_input,
  numeric_domain,
  singularity,
  unsupported,
  window_infeasible,
  decomposition_failure,
  no_kernel,
  diagnostic,
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw error(code, msg); }

inline void require(bool ok, errc code, const std::string& msg) {
  if (!ok) fail(code, msg);
}

/// Axis-aligned window used for schemes, covers and scans.
struct Window {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool contains(cplx z) const {
    return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
  }
  Window padded(double p) const { return {x0 - p, y0 - p, x1 + p, y1 + p}; }
};

}  // namespace capt
